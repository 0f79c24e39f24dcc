#include "covidbot/embed.hpp"

#include <cmath>

#include "covidbot/error.hpp"
#include "covidbot/http_util.hpp"
#include "covidbot/text_util.hpp"
#include "json.hpp"

namespace covidbot::embed {
using nlohmann::json;

std::string_view to_string(ApproachKind kind) {
  switch (kind) {
    case ApproachKind::kTfidf: return "tfidf";
    case ApproachKind::kBert: return "bert";
    case ApproachKind::kBiobert: return "biobert";
    case ApproachKind::kUse: return "use";
  }
  return "tfidf";
}

std::optional<ApproachKind> parse_approach(std::string_view name) {
  const std::string n = text::lower(name);
  if (n == "tfidf" || n == "tf-idf") return ApproachKind::kTfidf;
  if (n == "bert") return ApproachKind::kBert;
  if (n == "biobert") return ApproachKind::kBiobert;
  if (n == "use") return ApproachKind::kUse;
  return std::nullopt;
}

void Approach::validate() const {
  if (kind != ApproachKind::kTfidf && endpoint.empty()) {
    throw Error(Errc::kInvalidArgument,
                "approach '" + std::string(to_string(kind)) + "' has no provider endpoint",
                Stage::kEmbed);
  }
}

ProviderResponse request_embeddings(const std::string& endpoint,
                                    std::span<const std::string> texts,
                                    std::chrono::milliseconds timeout) {
  json request = {{"texts", json::array()}};
  for (const auto& t : texts) request["texts"].push_back(t);

  const http::Reply reply = http::post_json(endpoint, "/embed", request.dump(), timeout);
  if (reply.status == 0) {
    throw Error(Errc::kProviderUnavailable,
                "embedding provider " + endpoint + " unreachable: " + reply.transport_error,
                Stage::kEmbed);
  }
  if (reply.status != 200) {
    throw Error(Errc::kProviderUnavailable,
                "embedding provider " + endpoint + " returned status " +
                    std::to_string(reply.status),
                Stage::kEmbed);
  }

  auto protocol = [&](const std::string& what) {
    return Error(Errc::kProtocol, "embedding provider " + endpoint + ": " + what,
                 Stage::kEmbed);
  };

  const json body = json::parse(reply.body, nullptr, false);
  if (body.is_discarded() || !body.is_object()) throw protocol("response is not a JSON object");
  auto emb = body.find("embeddings");
  if (emb == body.end() || !emb->is_array()) throw protocol("missing 'embeddings' list");
  auto norm = body.find("normalized");
  if (norm == body.end() || !norm->is_boolean()) throw protocol("missing 'normalized' flag");

  ProviderResponse out;
  out.normalized = norm->get<bool>();
  if (auto model = body.find("model"); model != body.end() && model->is_string()) {
    out.model = model->get<std::string>();
  }
  if (emb->size() != texts.size()) {
    throw protocol("expected " + std::to_string(texts.size()) + " embeddings, got " +
                   std::to_string(emb->size()));
  }
  out.embeddings.reserve(emb->size());
  for (std::size_t i = 0; i < emb->size(); ++i) {
    const json& row = (*emb)[i];
    if (!row.is_array()) throw protocol("embedding " + std::to_string(i) + " is not a list");
    std::vector<double> values;
    values.reserve(row.size());
    for (const json& v : row) {
      if (!v.is_number()) throw protocol("embedding " + std::to_string(i) + " has a non-number");
      values.push_back(v.get<double>());
    }
    if (values.empty()) throw protocol("embedding " + std::to_string(i) + " is empty");
    if (!out.embeddings.empty() && values.size() != out.embeddings.front().size()) {
      throw protocol("ragged embeddings: row " + std::to_string(i) + " has dimension " +
                     std::to_string(values.size()) + ", expected " +
                     std::to_string(out.embeddings.front().size()));
    }
    if (out.normalized) {
      double sq = 0.0;
      for (double v : values) sq += v * v;
      const double n = std::sqrt(sq);
      if (sq > 0.0 && std::abs(n - 1.0) > 1e-6) {
        throw protocol("flagged normalized but row " + std::to_string(i) + " has norm " +
                       std::to_string(n));
      }
    }
    out.embeddings.push_back(std::move(values));
  }
  return out;
}

EmbeddingMatrix embed_via_provider(const Approach& approach,
                                   const textclean::SentenceSet& set,
                                   std::chrono::milliseconds timeout) {
  approach.validate();
  const auto texts = texts_of(set);
  ProviderResponse resp = request_embeddings(approach.endpoint, texts, timeout);
  EmbeddingMatrix m;
  m.rows = std::move(resp.embeddings);
  m.normalized = resp.normalized;
  m.approach = approach;
  return m;
}

EmbeddingMatrix embed(const Approach& approach, const textclean::SentenceSet& set,
                      const corpus::Corpus* corpus, const EmbedOptions& options) {
  try {
    if (approach.kind != ApproachKind::kTfidf) {
      return embed_via_provider(approach, set, options.timeout);
    }
    TfidfModel model;
    if (options.fit_scope == TfidfFitScope::kCorpus) {
      if (corpus == nullptr || corpus->empty()) {
        throw Error(Errc::kInvalidArgument, "corpus-scoped tf-idf needs a corpus");
      }
      std::vector<std::string> docs;
      docs.reserve(corpus->size());
      for (const auto& d : corpus->documents) docs.push_back(d.combined_text);
      model = fit_tfidf(docs);
    } else {
      model = fit_tfidf(texts_of(set));
    }
    EmbeddingMatrix m = transform_tfidf(model, set);
    m.approach = approach;
    return m;
  } catch (const Error& e) {
    throw e.with_stage(Stage::kEmbed);
  }
}

}  // namespace covidbot::embed
