#include <gtest/gtest.h>

#include <random>

#include "covidbot/error.hpp"
#include "covidbot/text_util.hpp"
#include "covidbot/textclean.hpp"
#include "json.hpp"
#include "test_files.hpp"

using namespace covidbot;
using covidbot::testing::fixture;
using covidbot::testing::read_file;
using textclean::clean_answer;
using textclean::normalize_sentence;
using textclean::split_sentences;
using Strings = std::vector<std::string>;

namespace {

// Random ASCII with extra weight on the characters the cleaner cares about.
std::string random_ascii(std::mt19937& rng) {
  static const std::string special = ".!?()[]  \t\n..";
  std::uniform_int_distribution<int> len(0, 60);
  std::uniform_int_distribution<int> pick(0, 3);
  std::uniform_int_distribution<int> printable(32, 126);
  std::uniform_int_distribution<std::size_t> sp(0, special.size() - 1);
  std::string s;
  for (int i = len(rng); i > 0; --i) {
    s += pick(rng) == 0 ? special[sp(rng)] : static_cast<char>(printable(rng));
  }
  return s;
}

void expect_sentence_invariants(const std::string& s) {
  EXPECT_FALSE(text::is_blank(s)) << '"' << s << '"';
  EXPECT_EQ(s.find('\n'), std::string::npos) << s;
  EXPECT_EQ(s.find("  "), std::string::npos) << s;
  EXPECT_EQ(text::trim(s), s);
}

}  // namespace

TEST(SplitSentences, SplitsOnTerminatorFollowedBySpaceOrEnd) {
  EXPECT_EQ(split_sentences("A. B! C?"), (Strings{"A.", "B!", "C?"}));
  EXPECT_EQ(split_sentences(""), Strings{});
  EXPECT_EQ(split_sentences("   "), Strings{});
  EXPECT_EQ(split_sentences("3.5 percent. Done"), (Strings{"3.5 percent.", "Done"}));
  EXPECT_EQ(split_sentences("Why?!\nBecause."), (Strings{"Why?!", "Because."}));
}

TEST(SplitSentences, MatchesReferenceSplitterOnFixture) {
  const auto raw = read_file(fixture("raw_generation.txt"));
  const auto expected = nlohmann::json::parse(read_file(fixture("raw_generation.split.json")));
  EXPECT_EQ(split_sentences(raw), expected.get<Strings>());
}

TEST(NormalizeSentence, StepExamples) {
  EXPECT_EQ(normalize_sentence("hello   world"), "hello world");
  EXPECT_EQ(normalize_sentence("really???"), "really?");
  EXPECT_EQ(normalize_sentence("seen ( ) in [ ] bats"), "seen in bats");
}

TEST(NormalizeSentence, BracketRules) {
  EXPECT_EQ(normalize_sentence("kept (as is) here"), "kept (as is) here");
  EXPECT_EQ(normalize_sentence("cite [12 here"), "cite 12 here");
  EXPECT_EQ(normalize_sentence("odd ) close"), "odd close");
  EXPECT_EQ(normalize_sentence("nested (( )) gone"), "nested gone");
  EXPECT_EQ(normalize_sentence("mixed ([ )] pair"), "mixed pair");
  EXPECT_EQ(normalize_sentence(" ( ) "), "");
}

TEST(NormalizeSentence, MixedMarksAreKept) {
  EXPECT_EQ(normalize_sentence("what?!"), "what?!");
  EXPECT_EQ(normalize_sentence("what??!!"), "what?!");
}

TEST(SplitInteriorPeriods, SplitsAfterEveryInteriorPeriod) {
  EXPECT_EQ(textclean::split_interior_periods("a.b"), (Strings{"a.", "b"}));
  EXPECT_EQ(textclean::split_interior_periods("end."), (Strings{"end."}));
}

TEST(CleanAnswer, ComposesTheSteps) {
  const auto set = clean_answer("Virus spreads.. Fast!!  ( )", "How fast?");
  EXPECT_EQ(set.sentences, (Strings{"Virus spreads.", "Fast!"}));
  EXPECT_EQ(set.question, "How fast?");
  EXPECT_EQ(clean_answer("a.b", "q?").sentences, (Strings{"a.", "b"}));
}

TEST(CleanAnswer, QuestionPassesThroughUnmodified) {
  EXPECT_EQ(clean_answer("Fine.", "  Why   so?? ").question, "  Why   so?? ");
}

TEST(CleanAnswer, Errors) {
  try {
    clean_answer("( ) [  ]\t ((  ))", "q?");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kEmptyAnswer);
    EXPECT_EQ(e.stage(), Stage::kClean);
    EXPECT_EQ(e.detail(), "( ) [  ]\t ((  ))");
  }
  try {
    clean_answer("Fine.", " ");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kInvalidArgument);
  }
}

TEST(CleanAnswer, MatchesReferenceGolden) {
  const auto raw = read_file(fixture("raw_generation.txt"));
  std::string golden = read_file(fixture("raw_generation.clean.txt"));
  Strings expected;
  for (std::size_t start = 0; start < golden.size();) {
    auto nl = golden.find('\n', start);
    if (nl == std::string::npos) nl = golden.size();
    if (nl > start) expected.push_back(golden.substr(start, nl - start));
    start = nl + 1;
  }
  EXPECT_EQ(clean_answer(raw, "q?").sentences, expected);
}

TEST(CleanProperties, RandomAsciiInvariantsAndIdempotence) {
  std::mt19937 rng(20200401);
  int cleaned = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::string raw = random_ascii(rng);

    const std::string once = normalize_sentence(raw);
    EXPECT_EQ(normalize_sentence(once), once) << raw;
    EXPECT_LE(once.size(), raw.size());

    textclean::SentenceSet first;
    try {
      first = clean_answer(raw, "q?");
    } catch (const Error& e) {
      ASSERT_EQ(e.code(), Errc::kEmptyAnswer);
      continue;
    }
    ++cleaned;
    for (const auto& s : first.sentences) expect_sentence_invariants(s);
    const auto second = clean_answer(text::join(first.sentences, " "), "q?");
    EXPECT_EQ(second.sentences, first.sentences) << raw;
  }
  EXPECT_GT(cleaned, 500);
}
