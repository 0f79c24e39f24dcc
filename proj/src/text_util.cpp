#include "covidbot/text_util.hpp"

namespace covidbot::text {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = to_lower(c);
  return out;
}

std::string_view trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

bool is_blank(std::string_view s) { return trim(s).empty(); }

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i != 0) out += sep;
    out += parts[i];
  }
  return out;
}

std::vector<Token> tokenize_with_offsets(std::string_view s) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < s.size()) {
    if (!is_alnum(s[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < s.size() && is_alnum(s[j])) ++j;
    if (j - i >= 2) tokens.push_back({lower(s.substr(i, j - i)), i});
    i = j;
  }
  return tokens;
}

std::vector<std::string> tokenize(std::string_view s) {
  std::vector<std::string> out;
  for (auto& t : tokenize_with_offsets(s)) out.push_back(std::move(t.text));
  return out;
}

}  // namespace covidbot::text
