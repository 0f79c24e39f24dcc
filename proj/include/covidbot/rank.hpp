#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "covidbot/embed.hpp"

namespace covidbot::rank {

enum class Metric { kCosine, kInnerProduct };

std::string_view to_string(Metric metric);
// "cosine", "inner_product" (also "inner", "ip", "dot").
std::optional<Metric> parse_metric(std::string_view name);

struct SimilarityOptions {
  // Inner product is only meaningful on unit-norm rows; this lifts the check.
  bool allow_unnormalized_inner_product = false;
};

// Similarity of each sentence to the question, plus the rank order:
// descending score, ties broken by ascending sentence index.
struct SimilarityRanking {
  std::vector<double> scores;
  std::vector<std::size_t> order;

  bool operator==(const SimilarityRanking&) const = default;
};

double cosine(const std::vector<double>& a, const std::vector<double>& b);
double inner_product(const std::vector<double>& a, const std::vector<double>& b);

// Throws Error{kMetricMismatch} for inner product over a non-normalized matrix
// (unless overridden) and Error{kInvalidArgument} when the matrix has fewer
// than two rows. Cosine with a zero vector is 0.
SimilarityRanking similarity_to_question(const embed::EmbeddingMatrix& e, Metric metric,
                                         const SimilarityOptions& options = {});

// (n+1)x(n+1) matrix over S and q; m[i][j] = sim(e_i, e_j). Column j is the
// similarity vector of element j and the last column is the question column.
std::vector<std::vector<double>> full_similarity_matrix(
    const embed::EmbeddingMatrix& e, Metric metric, const SimilarityOptions& options = {});

std::vector<std::size_t> rank_order(const std::vector<double>& scores);

struct Selected {
  std::string sentence;
  double score = 0.0;
  std::size_t index = 0;

  bool operator==(const Selected&) const = default;
};

// First min(k, n) entries of the ranking order. Throws for k == 0.
std::vector<Selected> select_top_k(const SimilarityRanking& ranking,
                                   const std::vector<std::string>& sentences,
                                   std::size_t k = 5);

enum class ComposeOrder { kBySimilarity, kOriginal };

struct ComposedAnswer {
  std::string text;
  std::vector<Selected> selected;
  bool dedup_applied = false;

  bool operator==(const ComposedAnswer&) const = default;
};

// Joins the selection with single spaces. With dedup, later sentences that
// equal an earlier one after case-folding are dropped; the selection is not
// refilled from lower ranks.
ComposedAnswer compose_answer(const std::vector<Selected>& selected, bool dedup = false,
                              ComposeOrder order = ComposeOrder::kBySimilarity);

}  // namespace covidbot::rank
