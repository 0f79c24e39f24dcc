#include "covidbot/rank.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "covidbot/error.hpp"
#include "covidbot/text_util.hpp"

namespace covidbot::rank {
namespace {

void check_matrix(const embed::EmbeddingMatrix& e, Metric metric,
                  const SimilarityOptions& options) {
  if (e.size() < 2) {
    throw Error(Errc::kInvalidArgument,
                "similarity needs at least one sentence and the question", Stage::kRank);
  }
  for (const auto& row : e.rows) {
    if (row.size() != e.dimension()) {
      throw Error(Errc::kInvalidArgument, "embedding rows differ in dimension", Stage::kRank);
    }
  }
  if (metric == Metric::kInnerProduct && !e.normalized &&
      !options.allow_unnormalized_inner_product) {
    throw Error(Errc::kMetricMismatch,
                "inner product requires normalized embeddings; '" +
                    std::string(embed::to_string(e.approach.kind)) +
                    "' returned unnormalized vectors",
                Stage::kRank);
  }
}

double sim(const std::vector<double>& a, const std::vector<double>& b, Metric metric) {
  return metric == Metric::kCosine ? cosine(a, b) : inner_product(a, b);
}

}  // namespace

std::string_view to_string(Metric metric) {
  return metric == Metric::kCosine ? "cosine" : "inner_product";
}

std::optional<Metric> parse_metric(std::string_view name) {
  const std::string n = text::lower(name);
  if (n == "cosine" || n == "cos") return Metric::kCosine;
  if (n == "inner_product" || n == "inner-product" || n == "inner" || n == "ip" ||
      n == "dot") {
    return Metric::kInnerProduct;
  }
  return std::nullopt;
}

double inner_product(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
  return dot;
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

std::vector<std::size_t> rank_order(const std::vector<double>& scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  return order;
}

SimilarityRanking similarity_to_question(const embed::EmbeddingMatrix& e, Metric metric,
                                         const SimilarityOptions& options) {
  check_matrix(e, metric, options);
  const auto& q = e.question_row();
  SimilarityRanking r;
  r.scores.reserve(e.size() - 1);
  for (std::size_t i = 0; i + 1 < e.size(); ++i) r.scores.push_back(sim(e.rows[i], q, metric));
  r.order = rank_order(r.scores);
  return r;
}

std::vector<std::vector<double>> full_similarity_matrix(const embed::EmbeddingMatrix& e,
                                                        Metric metric,
                                                        const SimilarityOptions& options) {
  check_matrix(e, metric, options);
  const std::size_t n = e.size();
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      m[i][j] = m[j][i] = sim(e.rows[i], e.rows[j], metric);
    }
  }
  return m;
}

std::vector<Selected> select_top_k(const SimilarityRanking& ranking,
                                   const std::vector<std::string>& sentences,
                                   std::size_t k) {
  if (k == 0) throw Error(Errc::kInvalidArgument, "top-k needs k >= 1", Stage::kRank);
  if (ranking.scores.size() != sentences.size() ||
      ranking.order.size() != sentences.size()) {
    throw Error(Errc::kInvalidArgument, "ranking does not match the sentence list",
                Stage::kRank);
  }
  const std::size_t take = std::min(k, sentences.size());
  std::vector<Selected> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    const std::size_t idx = ranking.order[i];
    out.push_back({sentences[idx], ranking.scores[idx], idx});
  }
  return out;
}

ComposedAnswer compose_answer(const std::vector<Selected>& selected, bool dedup,
                              ComposeOrder order) {
  if (selected.empty()) {
    throw Error(Errc::kInvalidArgument, "nothing selected to compose", Stage::kRank);
  }
  ComposedAnswer answer;
  answer.dedup_applied = dedup;
  std::set<std::string> seen;
  for (const auto& s : selected) {
    if (dedup && !seen.insert(text::lower(s.sentence)).second) continue;
    answer.selected.push_back(s);
  }

  std::vector<const Selected*> ordered;
  for (const auto& s : answer.selected) ordered.push_back(&s);
  if (order == ComposeOrder::kOriginal) {
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const Selected* a, const Selected* b) { return a->index < b->index; });
  }
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    if (i != 0) answer.text += ' ';
    answer.text += ordered[i]->sentence;
  }
  return answer;
}

}  // namespace covidbot::rank
