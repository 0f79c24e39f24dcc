"""Reference sentence splitter and cleaner, written against the filtering rules
independently of the C++ implementation. Produces the frozen golden files used
by the text-cleaning tests.

usage: python3 reference_clean.py <raw.txt> <question> <out_split.json> <out_clean.txt>
"""
import json
import re
import sys


def split(text):
    return [f.strip() for f in re.split(r"(?<=[.!?])(?=\s|$)", text) if f.strip()]


def normalize(s):
    while True:
        t = re.sub(r"\s+", " ", s).strip()
        t = re.sub(r"([.!?])\1+", r"\1", t)
        t = strip_brackets(t)
        if t == s:
            return t
        s = t


def strip_brackets(s):
    drop = set()
    stack = []
    pairs = {")": "(", "]": "["}
    for i, c in enumerate(s):
        if c in "([":
            stack.append(i)
        elif c in ")]":
            if not stack or s[stack[-1]] != pairs[c]:
                drop.add(i)
                continue
            j = stack.pop()
            if s[j + 1:i].strip() == "":
                drop.update(range(j, i + 1))
    drop.update(stack)
    return "".join(c for i, c in enumerate(s) if i not in drop)


def interior_split(s):
    return [f.strip() for f in re.split(r"(?<=\.)(?=.)", s) if f.strip()]


def refine(s, out):
    n = normalize(s)
    if not n:
        return
    pieces = [p for part in split(n) for p in interior_split(part)]
    if pieces == [n]:
        out.append(n)
        return
    for p in pieces:
        refine(p, out)


def clean(raw):
    out = []
    for frag in split(raw):
        refine(frag, out)
    return out


if __name__ == "__main__":
    raw = open(sys.argv[1]).read()
    with open(sys.argv[3], "w") as f:
        json.dump(split(raw), f, indent=1)
        f.write("\n")
    with open(sys.argv[4], "w") as f:
        f.write("\n".join(clean(raw)) + "\n")
