#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace covidbot::textclean {

// Cleaned sentences of one generated answer plus the question that prompted it.
// Sentences are non-empty, contain no newline and no double space.
struct SentenceSet {
  std::vector<std::string> sentences;
  std::string question;

  bool operator==(const SentenceSet&) const = default;
};

// Splits after every '.', '!' or '?' that is followed by whitespace or the end
// of the text. Terminators stay on their sentence; fragments are trimmed and
// blank ones dropped.
std::vector<std::string> split_sentences(std::string_view text);

// Collapses whitespace, collapses runs of a repeated '.', '!' or '?', and
// removes empty bracket groups and unmatched brackets. The steps repeat until
// the string stops changing. An empty result means the sentence should be
// dropped. Never lengthens the input.
std::string normalize_sentence(std::string_view sentence);

// Splits a normalized sentence after every period that is not its last
// character.
std::vector<std::string> split_interior_periods(std::string_view sentence);

// Full regex/string filtering stage. The question is attached unmodified.
// Throws Error{kInvalidArgument} for a blank question and Error{kEmptyAnswer}
// (detail = raw text) when no sentence survives.
SentenceSet clean_answer(std::string_view raw, std::string_view question);

}  // namespace covidbot::textclean
