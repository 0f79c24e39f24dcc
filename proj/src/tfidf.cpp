#include <algorithm>
#include <cmath>
#include <set>

#include "covidbot/embed.hpp"
#include "covidbot/error.hpp"
#include "covidbot/text_util.hpp"

namespace covidbot::embed {

TfidfModel fit_tfidf(std::span<const std::string> texts) {
  if (std::all_of(texts.begin(), texts.end(),
                  [](const std::string& t) { return t.empty(); })) {
    throw Error(Errc::kInvalidArgument, "tf-idf needs at least one non-empty text");
  }

  std::map<std::string, std::size_t> doc_freq;
  for (const auto& t : texts) {
    const auto tokens = text::tokenize(t);
    for (const auto& term : std::set<std::string>(tokens.begin(), tokens.end())) {
      ++doc_freq[term];
    }
  }
  if (doc_freq.empty()) {
    throw Error(Errc::kEmptyVocabulary, "no token of two or more alphanumerics");
  }

  TfidfModel model;
  model.fitted_on = texts.size();
  const double n = static_cast<double>(texts.size());
  std::size_t column = 0;
  for (const auto& [term, df] : doc_freq) {
    model.vocabulary.emplace(term, column++);
    model.idf.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(df))) + 1.0);
  }
  return model;
}

std::vector<double> tfidf_row(const TfidfModel& model, std::string_view text) {
  std::vector<double> row(model.dimension(), 0.0);
  for (const auto& term : text::tokenize(text)) {
    if (auto it = model.vocabulary.find(term); it != model.vocabulary.end()) {
      row[it->second] += 1.0;
    }
  }
  double sq = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    row[i] *= model.idf[i];
    sq += row[i] * row[i];
  }
  if (sq > 0.0) {
    const double norm = std::sqrt(sq);
    for (double& v : row) v /= norm;
  }
  return row;
}

std::vector<std::string> texts_of(const textclean::SentenceSet& set) {
  std::vector<std::string> texts = set.sentences;
  texts.push_back(set.question);
  return texts;
}

EmbeddingMatrix transform_tfidf(const TfidfModel& model,
                                const textclean::SentenceSet& set) {
  EmbeddingMatrix m;
  m.normalized = true;
  m.approach = Approach::tfidf();
  m.rows.reserve(set.sentences.size() + 1);
  for (const auto& s : set.sentences) m.rows.push_back(tfidf_row(model, s));
  m.rows.push_back(tfidf_row(model, set.question));
  return m;
}

}  // namespace covidbot::embed
