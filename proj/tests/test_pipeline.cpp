#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "covidbot/error.hpp"
#include "covidbot/pipeline.hpp"
#include "mock_backends.hpp"
#include "test_files.hpp"

using namespace covidbot;
using namespace covidbot::testing;
using pipeline::PipelineConfig;
using Strings = std::vector<std::string>;

namespace {

const std::string kRiskQuestion = "What do we know about COVID-19 risk factors?";

// Six sentences after cleaning; the keyword embedder puts them on the
// mask / vaccine / bat axes.
const std::string kSixSentences =
    "Masks reduce spread..  Vaccines train immunity. Masks and ( ) vaccines both help. "
    "Bats host coronaviruses.\nHandwashing matters!! Bat masks exist.";

Error error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "no error thrown";
  return Error(Errc::kInvalidArgument, "none");
}

}  // namespace

TEST(Pipeline, StubTfidfCosineIsByteIdenticalAcrossRuns) {
  const auto c = corpus::build_corpus(fixture("cord19"));
  PipelineConfig config;
  config.seed = 42;
  Strings outputs;
  for (int run = 0; run < 3; ++run) {
    outputs.push_back(pipeline::serialize_response(pipeline::answer_question(kRiskQuestion, config, &c)));
  }
  EXPECT_EQ(outputs[0], outputs[1]);
  EXPECT_EQ(outputs[1], outputs[2]);
  EXPECT_NE(outputs[0].find("\"answer\""), std::string::npos);
}

TEST(Pipeline, StageTwoFixtureSelectsAtMostFiveCleanedSentences) {
  const FixedGenerator gen(read_file(fixture("raw_generation.txt")));
  const auto r = pipeline::answer_question("What drugs inhibit COVID-19 infection?",
                                           PipelineConfig{}, nullptr, gen);
  EXPECT_EQ(r.answer.selected.size(), 5u);
  for (const auto& s : r.answer.selected) {
    EXPECT_NE(std::find(r.sentence_set.sentences.begin(), r.sentence_set.sentences.end(),
                        s.sentence),
              r.sentence_set.sentences.end())
        << s.sentence;
    EXPECT_EQ(r.sentence_set.sentences.at(s.index), s.sentence);
  }
  EXPECT_EQ(r.ranking.scores.size(), r.sentence_set.sentences.size());
}

// Hand trace. Keyword axes (mask, vaccine, bat); question -> (1,1,0)/sqrt2.
//   0 "Masks reduce spread."            (1,0,0)        1/sqrt2
//   1 "Vaccines train immunity."        (0,1,0)        1/sqrt2
//   2 "Masks and vaccines both help."   (1,1,0)/sqrt2  1
//   3 "Bats host coronaviruses."        (0,0,1)        0
//   4 "Handwashing matters!"            zero row       0
//   5 "Bat masks exist."                (1,0,1)/sqrt2  1/2
// Ranked: 2, 0, 1 (tie by index), 5, 3 (tie with 4 by index).
TEST(Pipeline, EndToEndGoldenWithKeywordEmbeddings) {
  MockServer provider;
  serve_embeddings(provider, keyword_embedder({"mask", "vaccine", "bat"}, true), true);
  provider.start();
  const FixedGenerator gen(kSixSentences);

  PipelineConfig config;
  config.approach = embed::Approach::provider(embed::ApproachKind::kBert, provider.url());
  const auto r = pipeline::answer_question("Do masks or vaccines help?", config, nullptr, gen);

  EXPECT_EQ(r.sentence_set.sentences,
            (Strings{"Masks reduce spread.", "Vaccines train immunity.",
                     "Masks and vaccines both help.", "Bats host coronaviruses.",
                     "Handwashing matters!", "Bat masks exist."}));
  const double h = 1 / std::sqrt(2.0);
  const std::vector<double> expected_scores = {h, h, 1.0, 0.0, 0.0, 0.5};
  ASSERT_EQ(r.ranking.scores.size(), 6u);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(r.ranking.scores[i], expected_scores[i], 1e-12);
  EXPECT_EQ(r.ranking.order, (std::vector<std::size_t>{2, 0, 1, 5, 3, 4}));
  EXPECT_EQ(r.answer.text,
            "Masks and vaccines both help. Masks reduce spread. Vaccines train immunity. "
            "Bat masks exist. Bats host coronaviruses.");
  EXPECT_EQ(r.raw.text, kSixSentences);
}

TEST(Pipeline, ComposesTheFourOperationsWithoutHiddenState) {
  const FixedGenerator gen(kSixSentences);
  PipelineConfig config;
  config.top_k = 3;
  const std::string q = "Do masks or vaccines help?";
  const auto r = pipeline::answer_question(q, config, nullptr, gen);

  const auto set = textclean::clean_answer(kSixSentences, q);
  const auto e = embed::embed(embed::Approach::tfidf(), set, nullptr);
  const auto ranking = rank::similarity_to_question(e, rank::Metric::kCosine);
  const auto manual = rank::compose_answer(rank::select_top_k(ranking, set.sentences, 3));
  EXPECT_EQ(r.sentence_set, set);
  EXPECT_EQ(r.ranking, ranking);
  EXPECT_EQ(r.answer, manual);
}

TEST(Pipeline, ApproachDoesNotChangeEarlierStages) {
  MockServer provider;
  serve_embeddings(provider, hashing_embedder(16), true);
  provider.start();
  const FixedGenerator gen(read_file(fixture("raw_generation.txt")));
  PipelineConfig tfidf;
  PipelineConfig bert;
  bert.approach = embed::Approach::provider(embed::ApproachKind::kBert, provider.url());
  const auto a = pipeline::answer_question(kRiskQuestion, tfidf, nullptr, gen);
  const auto b = pipeline::answer_question(kRiskQuestion, bert, nullptr, gen);
  EXPECT_EQ(a.raw.text, b.raw.text);
  EXPECT_EQ(a.sentence_set, b.sentence_set);
}

TEST(Pipeline, RepeatedSentenceKeptUnlessDedup) {
  const FixedGenerator gen(read_file(fixture("dialogue_drugs.txt")));
  const std::string repeated =
      "Because of their role in viral pathogenesis and host defense, several drugs have been "
      "developed against COVID-19.";
  const std::string q = "What drugs have been developed against COVID-19?";
  auto count = [&](const std::string& text) {
    std::size_t n = 0;
    for (auto pos = text.find(repeated); pos != std::string::npos;
         pos = text.find(repeated, pos + 1)) {
      ++n;
    }
    return n;
  };

  PipelineConfig config;
  const auto kept = pipeline::answer_question(q, config, nullptr, gen);
  EXPECT_EQ(count(kept.answer.text), 2u);
  EXPECT_EQ(kept.answer.text.rfind(repeated + " " + repeated, 0), 0u);

  config.dedup = true;
  const auto once = pipeline::answer_question(q, config, nullptr, gen);
  EXPECT_EQ(count(once.answer.text), 1u);
  EXPECT_TRUE(once.answer.dedup_applied);
  EXPECT_EQ(once.answer.selected.size(), kept.answer.selected.size() - 1);
}

TEST(Pipeline, EmptyAnswerCarriesRawText) {
  const FixedGenerator gen("( ) [ ]\n ( [ ] )");
  const Error e = error_of([&] { pipeline::answer_question("Why?", PipelineConfig{}, nullptr, gen); });
  EXPECT_EQ(e.code(), Errc::kEmptyAnswer);
  EXPECT_EQ(e.stage(), Stage::kClean);
  EXPECT_EQ(e.detail(), "( ) [ ]\n ( [ ] )");
}

TEST(Pipeline, FailuresKeepStageAttribution) {
  const FixedGenerator gen(kSixSentences);
  PipelineConfig config;
  config.approach = embed::Approach::provider(embed::ApproachKind::kUse, dead_endpoint());
  const Error embed_err = error_of([&] { pipeline::answer_question("Why?", config, nullptr, gen); });
  EXPECT_EQ(embed_err.code(), Errc::kProviderUnavailable);
  EXPECT_EQ(embed_err.stage(), Stage::kEmbed);

  PipelineConfig remote;
  remote.generator = pipeline::GeneratorKind::kRemote;
  remote.generator_endpoint = dead_endpoint();
  remote.timeout = std::chrono::milliseconds(1000);
  const Error gen_err = error_of([&] { pipeline::answer_question("Why?", remote, nullptr); });
  EXPECT_EQ(gen_err.code(), Errc::kBackendUnavailable);
  EXPECT_EQ(gen_err.stage(), Stage::kGenerate);

  MockServer provider;
  serve_embeddings(provider, [](const std::string&) { return std::vector<double>{2, 0}; }, false);
  provider.start();
  PipelineConfig ip;
  ip.approach = embed::Approach::provider(embed::ApproachKind::kUse, provider.url());
  ip.metric = rank::Metric::kInnerProduct;
  const Error rank_err = error_of([&] { pipeline::answer_question("Why?", ip, nullptr, gen); });
  EXPECT_EQ(rank_err.code(), Errc::kMetricMismatch);
  EXPECT_EQ(rank_err.stage(), Stage::kRank);

  ip.allow_unnormalized_inner_product = true;
  EXPECT_NO_THROW(pipeline::answer_question("Why?", ip, nullptr, gen));
}

TEST(Pipeline, ConfigValidation) {
  const FixedGenerator gen(kSixSentences);
  PipelineConfig config;
  config.top_k = 0;
  EXPECT_EQ(error_of([&] { pipeline::answer_question("Why?", config, nullptr, gen); }).code(),
            Errc::kInvalidArgument);
  EXPECT_EQ(error_of([&] { pipeline::answer_question(" ", PipelineConfig{}, nullptr, gen); }).code(),
            Errc::kInvalidArgument);
  EXPECT_EQ(error_of([&] { pipeline::answer_question("Why?", PipelineConfig{}, nullptr); }).code(),
            Errc::kEmptyCorpus);
}

TEST(Pipeline, RemoteGeneratorEndToEnd) {
  MockServer backend;
  serve_generation(backend, kSixSentences);
  backend.start();
  PipelineConfig config;
  config.generator = pipeline::GeneratorKind::kRemote;
  config.generator_endpoint = backend.url();
  config.prompt_template = "Human: {question} Bot:";
  const auto r = pipeline::answer_question("Do masks help?", config, nullptr);
  EXPECT_EQ(r.raw.backend_id, "mock-gpt2");
  EXPECT_EQ(nlohmann::json::parse(backend.requests().at(0))["prompt"], "Human: Do masks help? Bot:");
  EXPECT_EQ(r.sentence_set.question, "Do masks help?");
}

TEST(Pipeline, SerializationOmitsTimingsByDefault) {
  const FixedGenerator gen(kSixSentences);
  const auto r = pipeline::answer_question("Do masks help?", PipelineConfig{}, nullptr, gen);
  const auto plain = pipeline::response_to_json(r);
  const auto timed = pipeline::response_to_json(r, true);
  EXPECT_FALSE(plain.contains("timings"));
  EXPECT_TRUE(timed.contains("timings"));
  EXPECT_EQ(plain["config"]["approach"], "tfidf");
  EXPECT_EQ(plain["config"]["top_k"], 5);
}
