#include "covidbot/pipeline.hpp"

#include "covidbot/error.hpp"
#include "covidbot/text_util.hpp"

namespace covidbot::pipeline {
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

}  // namespace

std::string_view to_string(GeneratorKind kind) {
  return kind == GeneratorKind::kRemote ? "remote" : "stub";
}

std::optional<GeneratorKind> parse_generator(std::string_view name) {
  const std::string n = text::lower(name);
  if (n == "remote") return GeneratorKind::kRemote;
  if (n == "stub") return GeneratorKind::kStub;
  return std::nullopt;
}

void PipelineConfig::validate() const {
  if (top_k == 0) throw Error(Errc::kInvalidArgument, "top_k must be at least 1", Stage::kRank);
  approach.validate();
  if (generator == GeneratorKind::kRemote && generator_endpoint.empty()) {
    throw Error(Errc::kInvalidArgument, "remote generator needs an endpoint", Stage::kGenerate);
  }
}

generator::GenerationRequest PipelineConfig::request_for(const std::string& question) const {
  generator::GenerationRequest req;
  req.question = question;
  req.max_length = max_length;
  req.temperature = temperature;
  req.seed = seed;
  req.prompt_template = prompt_template;
  return req;
}

std::unique_ptr<generator::Generator> make_generator(const PipelineConfig& config,
                                                     const corpus::Corpus* corpus) {
  if (config.generator == GeneratorKind::kRemote) {
    if (config.generator_endpoint.empty()) {
      throw Error(Errc::kInvalidArgument, "remote generator needs an endpoint",
                  Stage::kGenerate);
    }
    return std::make_unique<generator::RemoteGenerator>(config.generator_endpoint,
                                                        config.timeout);
  }
  if (corpus == nullptr || corpus->empty()) {
    throw Error(Errc::kEmptyCorpus, "stub generator needs a corpus", Stage::kGenerate);
  }
  return std::make_unique<generator::StubGenerator>(*corpus);
}

FinalResponse answer_question(const std::string& question, const PipelineConfig& config,
                              const corpus::Corpus* corpus,
                              const generator::Generator& generator) {
  if (text::is_blank(question)) {
    throw Error(Errc::kInvalidArgument, "question must be non-empty", Stage::kGenerate);
  }
  config.validate();

  FinalResponse out;
  out.config = config;
  const auto t0 = Clock::now();

  auto t = Clock::now();
  out.raw = generator.generate(config.request_for(question));
  out.timings.generate_ms = ms_since(t);

  t = Clock::now();
  out.sentence_set = textclean::clean_answer(out.raw.text, question);
  out.timings.clean_ms = ms_since(t);

  t = Clock::now();
  embed::EmbedOptions embed_options;
  embed_options.fit_scope = config.fit_scope;
  embed_options.timeout = config.timeout;
  const embed::EmbeddingMatrix matrix =
      embed::embed(config.approach, out.sentence_set, corpus, embed_options);
  out.timings.embed_ms = ms_since(t);

  t = Clock::now();
  rank::SimilarityOptions sim_options;
  sim_options.allow_unnormalized_inner_product = config.allow_unnormalized_inner_product;
  out.ranking = rank::similarity_to_question(matrix, config.metric, sim_options);
  const auto selected = rank::select_top_k(out.ranking, out.sentence_set.sentences, config.top_k);
  out.answer = rank::compose_answer(selected, config.dedup, config.order);
  out.timings.rank_ms = ms_since(t);

  out.timings.total_ms = ms_since(t0);
  return out;
}

FinalResponse answer_question(const std::string& question, const PipelineConfig& config,
                              const corpus::Corpus* corpus) {
  const auto gen = make_generator(config, corpus);
  return answer_question(question, config, corpus, *gen);
}

json config_to_json(const PipelineConfig& c) {
  json j = {
      {"approach", embed::to_string(c.approach.kind)},
      {"metric", rank::to_string(c.metric)},
      {"top_k", c.top_k},
      {"dedup", c.dedup},
      {"order", c.order == rank::ComposeOrder::kOriginal ? "original" : "similarity"},
      {"tfidf_fit", c.fit_scope == embed::TfidfFitScope::kCorpus ? "corpus" : "exchange"},
      {"generator", to_string(c.generator)},
      {"max_length", c.max_length},
      {"temperature", c.temperature},
      {"seed", c.seed},
  };
  if (!c.approach.endpoint.empty()) j["provider"] = c.approach.endpoint;
  if (!c.generator_endpoint.empty()) j["generator_endpoint"] = c.generator_endpoint;
  if (!c.prompt_template.empty()) j["prompt_template"] = c.prompt_template;
  if (c.allow_unnormalized_inner_product) j["allow_unnormalized_inner_product"] = true;
  return j;
}

json response_to_json(const FinalResponse& r, bool include_timings) {
  json selected = json::array();
  for (const auto& s : r.answer.selected) {
    selected.push_back({{"index", s.index}, {"sentence", s.sentence}, {"score", s.score}});
  }
  json j = {
      {"answer", r.answer.text},
      {"selected", selected},
      {"dedup_applied", r.answer.dedup_applied},
      {"raw", {{"text", r.raw.text}, {"backend", r.raw.backend_id}}},
      {"question", r.sentence_set.question},
      {"sentences", r.sentence_set.sentences},
      {"scores", r.ranking.scores},
      {"order", r.ranking.order},
      {"config", config_to_json(r.config)},
  };
  if (include_timings) {
    j["raw"]["latency_ms"] = r.raw.latency_ms;
    j["timings"] = {{"generate_ms", r.timings.generate_ms},
                    {"clean_ms", r.timings.clean_ms},
                    {"embed_ms", r.timings.embed_ms},
                    {"rank_ms", r.timings.rank_ms},
                    {"total_ms", r.timings.total_ms}};
  }
  return j;
}

std::string serialize_response(const FinalResponse& response, bool include_timings) {
  return response_to_json(response, include_timings).dump();
}

}  // namespace covidbot::pipeline
