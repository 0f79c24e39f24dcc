#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>

#include "covidbot/corpus.hpp"
#include "covidbot/embed.hpp"
#include "covidbot/generator.hpp"
#include "covidbot/rank.hpp"
#include "covidbot/textclean.hpp"
#include "json.hpp"

namespace covidbot::pipeline {

enum class GeneratorKind { kRemote, kStub };

std::string_view to_string(GeneratorKind kind);
std::optional<GeneratorKind> parse_generator(std::string_view name);

struct PipelineConfig {
  embed::Approach approach = embed::Approach::tfidf();
  rank::Metric metric = rank::Metric::kCosine;
  std::size_t top_k = 5;
  bool dedup = false;
  rank::ComposeOrder order = rank::ComposeOrder::kBySimilarity;
  bool allow_unnormalized_inner_product = false;
  embed::TfidfFitScope fit_scope = embed::TfidfFitScope::kExchange;

  GeneratorKind generator = GeneratorKind::kStub;
  std::string generator_endpoint;
  int max_length = 512;
  double temperature = 0.7;
  std::uint64_t seed = 0;
  std::string prompt_template;

  std::chrono::milliseconds timeout{30000};

  // Throws Error{kInvalidArgument} for top_k == 0, a neural approach without
  // endpoint, or a remote generator without endpoint.
  void validate() const;
  generator::GenerationRequest request_for(const std::string& question) const;
};

struct StageTimings {
  double generate_ms = 0;
  double clean_ms = 0;
  double embed_ms = 0;
  double rank_ms = 0;
  double total_ms = 0;
};

struct FinalResponse {
  rank::ComposedAnswer answer;
  generator::RawAnswer raw;
  textclean::SentenceSet sentence_set;
  rank::SimilarityRanking ranking;
  PipelineConfig config;
  StageTimings timings;
};

// Builds the generator selected by the config. The stub borrows `corpus`.
std::unique_ptr<generator::Generator> make_generator(const PipelineConfig& config,
                                                     const corpus::Corpus* corpus);

// Question -> raw generation -> regex/string filtering -> similarity
// filtering -> composed answer. Errors keep their stage attribution; an
// empty-answer error carries the raw generation as its detail.
FinalResponse answer_question(const std::string& question, const PipelineConfig& config,
                              const corpus::Corpus* corpus,
                              const generator::Generator& generator);
FinalResponse answer_question(const std::string& question, const PipelineConfig& config,
                              const corpus::Corpus* corpus);

nlohmann::json config_to_json(const PipelineConfig& config);
// Timing fields (stage timings and raw latency) are left out unless asked for,
// which makes the serialization a pure function of the inputs.
nlohmann::json response_to_json(const FinalResponse& response, bool include_timings = false);
std::string serialize_response(const FinalResponse& response, bool include_timings = false);

}  // namespace covidbot::pipeline
