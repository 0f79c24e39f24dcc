#pragma once

#include <string>
#include <string_view>
#include <vector>

// Small ASCII helpers shared across modules.
namespace covidbot::text {

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\v' || c == '\f' ||
         c == '\r';
}

inline bool is_alnum(char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
         (c >= 'A' && c <= 'Z');
}

inline char to_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

std::string lower(std::string_view s);
std::string_view trim(std::string_view s);
bool is_blank(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

// A token is a maximal run of at least two ASCII alphanumerics, lowercased.
struct Token {
  std::string text;
  std::size_t offset;  // byte offset of the run in the source
};
std::vector<Token> tokenize_with_offsets(std::string_view s);
std::vector<std::string> tokenize(std::string_view s);

}  // namespace covidbot::text
