#include "covidbot/textclean.hpp"

#include "covidbot/error.hpp"
#include "covidbot/text_util.hpp"

namespace covidbot::textclean {
namespace {

bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

void push_fragment(std::vector<std::string>& out, std::string_view fragment) {
  auto t = text::trim(fragment);
  if (!t.empty()) out.emplace_back(t);
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : s) {
    if (text::is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += c;
  }
  return out;
}

std::string collapse_repeated_marks(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (is_terminator(c) && !out.empty() && out.back() == c) continue;
    out += c;
  }
  return out;
}

// Drops "( )"/"[ ]" groups whose content is blank, plus brackets that have no
// partner. Nested empties such as "(( ))" need more than one pass.
std::string strip_brackets(std::string_view s) {
  std::vector<bool> drop(s.size(), false);
  std::vector<std::size_t> open;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '(' || c == '[') {
      open.push_back(i);
    } else if (c == ')' || c == ']') {
      const char want = c == ')' ? '(' : '[';
      if (open.empty() || s[open.back()] != want) {
        drop[i] = true;
        continue;
      }
      const std::size_t start = open.back();
      open.pop_back();
      if (text::is_blank(s.substr(start + 1, i - start - 1))) {
        for (std::size_t k = start; k <= i; ++k) drop[k] = true;
      }
    }
  }
  for (std::size_t i : open) drop[i] = true;

  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!drop[i]) out += s[i];
  }
  return out;
}

void refine(std::string_view sentence, std::vector<std::string>& out) {
  std::string normalized = normalize_sentence(sentence);
  if (normalized.empty()) return;

  std::vector<std::string> pieces;
  for (const auto& part : split_sentences(normalized)) {
    for (auto& piece : split_interior_periods(part)) pieces.push_back(std::move(piece));
  }
  if (pieces.size() == 1 && pieces.front() == normalized) {
    out.push_back(std::move(normalized));
    return;
  }
  for (const auto& piece : pieces) refine(piece, out);
}

}  // namespace

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (!is_terminator(text[i])) continue;
    if (i + 1 == text.size() || text::is_space(text[i + 1])) {
      push_fragment(out, text.substr(start, i + 1 - start));
      start = i + 1;
    }
  }
  if (start < text.size()) push_fragment(out, text.substr(start));
  return out;
}

std::string normalize_sentence(std::string_view sentence) {
  std::string current(sentence);
  while (true) {
    std::string next = strip_brackets(collapse_repeated_marks(collapse_whitespace(current)));
    if (next == current) return next;
    current = std::move(next);
  }
}

std::vector<std::string> split_interior_periods(std::string_view sentence) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i + 1 < sentence.size(); ++i) {
    if (sentence[i] == '.') {
      push_fragment(out, sentence.substr(start, i + 1 - start));
      start = i + 1;
    }
  }
  if (start < sentence.size()) push_fragment(out, sentence.substr(start));
  return out;
}

SentenceSet clean_answer(std::string_view raw, std::string_view question) {
  if (text::is_blank(question)) {
    throw Error(Errc::kInvalidArgument, "question must be non-empty", Stage::kClean);
  }
  SentenceSet set;
  set.question = std::string(question);
  for (const auto& fragment : split_sentences(raw)) refine(fragment, set.sentences);
  if (set.sentences.empty()) {
    throw Error(Errc::kEmptyAnswer, "no usable answer", Stage::kClean, std::string(raw));
  }
  return set;
}

}  // namespace covidbot::textclean
