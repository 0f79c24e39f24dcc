#pragma once

#include <chrono>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "covidbot/corpus.hpp"
#include "covidbot/textclean.hpp"

namespace covidbot::embed {

enum class ApproachKind { kTfidf, kBert, kBiobert, kUse };

inline constexpr ApproachKind kAllApproaches[] = {
    ApproachKind::kTfidf, ApproachKind::kBert, ApproachKind::kBiobert,
    ApproachKind::kUse};

std::string_view to_string(ApproachKind kind);
// Accepts "tfidf"/"tf-idf", "bert", "biobert", "use" in any case.
std::optional<ApproachKind> parse_approach(std::string_view name);

// Embedding approach; the neural encoders live behind a provider endpoint
// (base URL such as "http://127.0.0.1:8501").
struct Approach {
  ApproachKind kind = ApproachKind::kTfidf;
  std::string endpoint;

  static Approach tfidf() { return {ApproachKind::kTfidf, {}}; }
  static Approach provider(ApproachKind kind, std::string endpoint) {
    return {kind, std::move(endpoint)};
  }

  // Throws Error{kInvalidArgument} when a neural approach has no endpoint.
  void validate() const;

  bool operator==(const Approach&) const = default;
};

struct TfidfModel {
  std::map<std::string, std::size_t> vocabulary;  // term -> column, 0..V-1
  std::vector<double> idf;                        // aligned with columns
  std::size_t fitted_on = 0;

  std::size_t dimension() const noexcept { return idf.size(); }
};

// Rows for every element of S followed by the question row (always last).
struct EmbeddingMatrix {
  std::vector<std::vector<double>> rows;
  bool normalized = false;
  Approach approach;

  std::size_t size() const noexcept { return rows.size(); }
  std::size_t dimension() const noexcept { return rows.empty() ? 0 : rows.front().size(); }
  const std::vector<double>& question_row() const { return rows.back(); }
};

// Smoothed idf: ln((1 + N) / (1 + df)) + 1 over lowercased tokens of at least
// two alphanumerics. Columns are assigned in lexicographic term order.
// Throws Error{kInvalidArgument} without a non-empty text and
// Error{kEmptyVocabulary} when no token can be extracted.
TfidfModel fit_tfidf(std::span<const std::string> texts);

// Raw counts times idf, then L2-normalized; out-of-vocabulary tokens are
// ignored and all-OOV rows stay zero.
std::vector<double> tfidf_row(const TfidfModel& model, std::string_view text);
EmbeddingMatrix transform_tfidf(const TfidfModel& model,
                                const textclean::SentenceSet& set);

// Sentences in order followed by the question.
std::vector<std::string> texts_of(const textclean::SentenceSet& set);

struct ProviderResponse {
  std::vector<std::vector<double>> embeddings;
  bool normalized = false;
  std::string model;
};

// POST {endpoint}/embed with {"texts": [...]} and validate the reply.
//
// Throws Error{kProviderUnavailable} on transport failure or any non-200
// status, Error{kProtocol} on malformed JSON, row-count mismatch, ragged rows,
// or normalized=true with a nonzero row whose norm is off by more than 1e-6.
ProviderResponse request_embeddings(const std::string& endpoint,
                                    std::span<const std::string> texts,
                                    std::chrono::milliseconds timeout);

EmbeddingMatrix embed_via_provider(const Approach& approach,
                                   const textclean::SentenceSet& set,
                                   std::chrono::milliseconds timeout);

// Where tf-idf statistics come from: the current exchange (S plus q), or the
// corpus documents.
enum class TfidfFitScope { kExchange, kCorpus };

struct EmbedOptions {
  TfidfFitScope fit_scope = TfidfFitScope::kExchange;
  std::chrono::milliseconds timeout{30000};
};

// Dispatches on the approach. Errors carry Stage::kEmbed.
EmbeddingMatrix embed(const Approach& approach, const textclean::SentenceSet& set,
                      const corpus::Corpus* corpus, const EmbedOptions& options = {});

}  // namespace covidbot::embed
