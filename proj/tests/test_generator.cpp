#include <gtest/gtest.h>

#include "covidbot/error.hpp"
#include "covidbot/generator.hpp"
#include "mock_backends.hpp"

using namespace covidbot;
using namespace covidbot::testing;
using generator::GenerationRequest;
using nlohmann::json;
using std::chrono::milliseconds;

namespace {

GenerationRequest request(std::string q, int max_length = 512) {
  GenerationRequest r;
  r.question = std::move(q);
  r.max_length = max_length;
  return r;
}

corpus::Corpus make_corpus(std::vector<std::pair<std::string, std::string>> docs) {
  corpus::Corpus c;
  for (auto& [id, body] : docs) c.documents.push_back(corpus::Document::make(id, "", body));
  return c;
}

}  // namespace

TEST(GenerationRequest, Validation) {
  EXPECT_NO_THROW(request("Why?").validate());
  EXPECT_THROW(request("  ").validate(), Error);
  EXPECT_THROW(request("Why?", 15).validate(), Error);
  auto r = request("Why?");
  r.temperature = -0.1;
  EXPECT_THROW(r.validate(), Error);
}

TEST(GenerationRequest, PromptTemplate) {
  auto r = request("Why?");
  EXPECT_EQ(r.prompt(), "Why?");
  r.prompt_template = "Human: {question}\nBot:";
  EXPECT_EQ(r.prompt(), "Human: Why?\nBot:");
}

TEST(GenerateRemote, PassesTextThroughVerbatim) {
  MockServer server;
  const std::string text = "  Raw text.. with  spacing!! ";
  serve_generation(server, text);
  server.start();
  auto req = request("What is known about transmission?", 64);
  req.temperature = 0.25;
  const auto a = generator::generate_remote(server.url(), req);
  EXPECT_EQ(a.text, text);
  EXPECT_EQ(a.backend_id, "mock-gpt2");
  EXPECT_GE(a.latency_ms, 0);
  ASSERT_EQ(server.requests().size(), 1u);
  EXPECT_EQ(json::parse(server.requests()[0]),
            json({{"prompt", "What is known about transmission?"},
                  {"max_length", 64},
                  {"temperature", 0.25}}));
}

TEST(GenerateRemote, EmptyCompletion) {
  MockServer server;
  serve_generation(server, "");
  server.start();
  try {
    generator::generate_remote(server.url(), request("Why?"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kEmptyGeneration);
    EXPECT_EQ(e.stage(), Stage::kGenerate);
  }
}

TEST(GenerateRemote, LatencyCoversDelay) {
  MockServer server;
  serve_generation(server, "Slow answer.", milliseconds(200));
  server.start();
  const auto a = generator::generate_remote(server.url(), request("Why?"));
  EXPECT_GE(a.latency_ms, 200);
}

TEST(GenerateRemote, FailuresAreBackendUnavailable) {
  auto code_for = [](const std::string& endpoint, milliseconds timeout) {
    try {
      generator::generate_remote(endpoint, request("Why?"), timeout);
    } catch (const Error& e) {
      EXPECT_EQ(e.stage(), Stage::kGenerate);
      return e.code();
    }
    return Errc::kInvalidArgument;
  };
  EXPECT_EQ(code_for(dead_endpoint(), milliseconds(1000)), Errc::kBackendUnavailable);

  MockServer failing;
  serve_generate_reply(failing, 503, "{}");
  failing.start();
  EXPECT_EQ(code_for(failing.url(), milliseconds(1000)), Errc::kBackendUnavailable);

  MockServer slow;
  serve_generation(slow, "late", milliseconds(600));
  slow.start();
  EXPECT_EQ(code_for(slow.url(), milliseconds(150)), Errc::kBackendUnavailable);

  MockServer garbage;
  serve_generate_reply(garbage, 200, "not json");
  garbage.start();
  EXPECT_EQ(code_for(garbage.url(), milliseconds(1000)), Errc::kBackendUnavailable);
}

TEST(GenerateStub, StartsAtBestMatchingToken) {
  const auto c = make_corpus({{"d1", "virus spreads fast"}});
  const auto a = generator::generate_stub(c, request("How does the virus spread?"));
  EXPECT_EQ(a.text, "virus spreads fast");
  EXPECT_EQ(a.backend_id, "stub");
  EXPECT_EQ(a.latency_ms, 0);
}

TEST(GenerateStub, PicksDocumentWithMostSharedTokens) {
  const auto c = make_corpus({{"a", "Masks reduce spread. Masks work."},
                              {"b", "Intro text. Masks reduce virus transmission in homes."},
                              {"c", "Nothing relevant here at all."}});
  const auto a = generator::generate_stub(c, request("Do masks reduce virus transmission?"));
  EXPECT_EQ(a.text, "Masks reduce virus transmission in homes.");
}

TEST(GenerateStub, MostFrequentSharedTokenWins) {
  const auto c = make_corpus({{"a", "Early vaccine work. Later, masks and masks and masks."}});
  const auto a = generator::generate_stub(c, request("vaccine or masks?"));
  EXPECT_EQ(a.text, "masks and masks and masks.");
}

TEST(GenerateStub, TiesGoToFirstDocumentAndEarliestToken) {
  const auto c = make_corpus({{"b", "zeta alpha beta"}, {"a", "beta alpha zeta"}});
  const auto a = generator::generate_stub(c, request("alpha beta?"));
  EXPECT_EQ(a.text, "alpha beta");
}

TEST(GenerateStub, NoOverlapFallsBackToFirstDocumentPrefix) {
  const auto c = make_corpus({{"a", std::string(40, 'x') + " tail"}, {"b", "other"}});
  const auto a = generator::generate_stub(c, request("Why qq?", 16));
  EXPECT_EQ(a.text, std::string(16, 'x'));
}

TEST(GenerateStub, DeterministicAndSeedIndependent) {
  const auto c = make_corpus({{"a", "The virus spreads through droplets and aerosols."}});
  auto r1 = request("How does the virus spread?", 20);
  auto r2 = r1;
  r2.seed = 99;
  const auto a = generator::generate_stub(c, r1);
  const auto b = generator::generate_stub(c, r1);
  const auto s = generator::generate_stub(c, r2);
  EXPECT_EQ(a.text, b.text);
  EXPECT_EQ(a.text, s.text);
  EXPECT_EQ(a.text, "The virus spreads th");
}

TEST(GenerateStub, DoesNotSplitUtf8Sequences) {
  // "é" is two bytes; a 17-byte cut would land inside it.
  const auto c = make_corpus({{"a", "virus caf\xC3\xA9 caf\xC3\xA9 cafe"}});
  const auto a = generator::generate_stub(c, request("virus?", 16));
  EXPECT_EQ(a.text, "virus caf\xC3\xA9 caf");
  const auto b = generator::generate_stub(c, request("virus?", 17));
  EXPECT_EQ(b.text, "virus caf\xC3\xA9 caf\xC3\xA9");
}

TEST(GenerateStub, EmptyCorpusRejected) {
  EXPECT_THROW(generator::generate_stub(corpus::Corpus{}, request("Why?")), Error);
}

TEST(Generators, BothImplementTheSameInterface) {
  MockServer server;
  serve_generation(server, "Remote text.");
  server.start();
  const auto c = make_corpus({{"a", "Stub text."}});
  const generator::RemoteGenerator remote(server.url(), milliseconds(2000));
  const generator::StubGenerator stub(c);
  for (const generator::Generator* g : {static_cast<const generator::Generator*>(&remote),
                                        static_cast<const generator::Generator*>(&stub)}) {
    const generator::RawAnswer a = g->generate(request("text?"));
    EXPECT_FALSE(a.text.empty()) << g->id();
  }
  EXPECT_EQ(stub.id(), "stub");
}
