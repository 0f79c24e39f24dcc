#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "covidbot/embed.hpp"

namespace covidbot::eval {

// ---------------------------------------------------------------------------
// Question battery
// ---------------------------------------------------------------------------

struct EvalQuestion {
  int id = 0;  // 1..12
  std::string text;

  bool operator==(const EvalQuestion&) const = default;
};

// Appends " of COVID-19" (before a terminal '?', if any) when the question
// does not mention COVID-19 in any case.
std::string ensure_covid_suffix(std::string_view question);

// Battery file: {"version": N, "questions": [{"id": 1, "text": "..."}, ...]}.
// Every text is passed through ensure_covid_suffix.
std::vector<EvalQuestion> parse_questions(std::string_view json_text);
std::vector<EvalQuestion> load_questions(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Ratings
// ---------------------------------------------------------------------------

enum class RatingCategory {
  kPoor = 1,
  kAcceptable = 2,
  kInformative = 3,
  kWellFormed = 4,
  kRelevant = 5,
};

inline int points(RatingCategory c) { return static_cast<int>(c); }
std::string_view to_string(RatingCategory c);
// Category name ("relevant", "well-formed", ...) or its points ("1".."5").
std::optional<RatingCategory> parse_rating(std::string_view s);

struct RatingRecord {
  int question_id = 0;
  embed::ApproachKind approach = embed::ApproachKind::kTfidf;
  int sample = 1;  // 1..5
  std::string annotator;
  RatingCategory rating = RatingCategory::kPoor;
  // Free-form annotation phase tag ("test", "main"); partitioning metadata only.
  std::string phase;
};

// Score file: one record per line, comma- or tab-separated:
//   question_id, approach, sample, annotator, category-or-points [, phase]
// Blank lines and lines starting with '#' are skipped, as is a header line
// whose first field is "question_id".
// Throws Error{kParse} with the line number on bad input and
// Error{kInvalidArgument} on a duplicate (question, approach, sample,
// annotator) key.
std::vector<RatingRecord> parse_scores(std::string_view text);
std::vector<RatingRecord> load_scores(const std::filesystem::path& path);
std::string format_scores(std::span<const RatingRecord> records);

std::vector<RatingRecord> filter_phase(std::span<const RatingRecord> records,
                                       std::string_view phase);

// ---------------------------------------------------------------------------
// Aggregation
// ---------------------------------------------------------------------------

struct ApproachRow {
  embed::ApproachKind approach;
  std::vector<double> annotator_means;  // aligned with ApproachTable::annotators
  double overall = 0;                   // mean of the annotator means
};

struct ApproachTable {
  std::vector<std::string> annotators;
  std::vector<ApproachRow> rows;  // in tfidf, bert, biobert, use order
};

double mean_of(std::span<const double> values);

// Per annotator, mean rating per approach; works for any number of annotators.
// Throws Error{kInvalidArgument} for empty input or an annotator without
// ratings for a listed approach.
ApproachTable aggregate_by_approach(std::span<const RatingRecord> records);
ApproachRow approach_row_from_means(embed::ApproachKind approach,
                                    std::vector<double> annotator_means);

struct QuestionRow {
  int question_id = 0;
  double a1 = 0;
  double a2 = 0;
  double average = 0;
  double difference = 0;  // |a1 - a2|
  std::string higher;     // "A1", "A2" or "NA" on a tie
};

struct QuestionTable {
  std::pair<std::string, std::string> annotators;
  std::vector<QuestionRow> rows;  // ascending question id
};

QuestionRow question_row_from_means(int question_id, double a1, double a2);

// Two-annotator table. Without an explicit pair, the two annotator ids in
// lexicographic order become A1 and A2; any other count is a
// Error{kReportFormat}.
QuestionTable aggregate_by_question(
    std::span<const RatingRecord> records,
    std::optional<std::pair<std::string, std::string>> annotators = std::nullopt);

// Half-up rounding to `decimals` places, used only for presentation.
double round_half_up(double value, int decimals = 3);
std::string fixed3(double value);
std::string format_difference(const QuestionRow& row);  // "0.750 (A1)"

// A row as printed in a published table, checked against its own inputs.
struct PrintedQuestionRow {
  int question_id = 0;
  double a1 = 0;
  double a2 = 0;
  double average = 0;
  double difference = 0;
  std::string higher;
};

struct PrintedApproachRow {
  embed::ApproachKind approach;
  double a1 = 0;
  double a2 = 0;
  double overall = 0;
};

// Lists every column whose printed value disagrees with the value recomputed
// from the printed annotator means (compared at three decimals). Empty when
// the row is consistent.
std::vector<std::string> audit_question_row(const PrintedQuestionRow& printed);
// Overall column must be within 0.0005 of the recomputed mean.
std::vector<std::string> audit_approach_row(const PrintedApproachRow& printed);

// ---------------------------------------------------------------------------
// Statistics
// ---------------------------------------------------------------------------

// Sample Pearson correlation. Throws Error{kInvalidArgument} for mismatched or
// too-short input, Error{kUndefinedCorrelation} for zero variance.
double pearson(std::span<const double> xs, std::span<const double> ys);

enum class Tail { kLower, kUpper };

struct TTestResult {
  double t = 0;
  double p = 0;
  int df = 0;
};

// One-sample t-test of the mean against mu0; p is one-tailed. Throws
// Error{kInvalidArgument} for fewer than two values and
// Error{kDegenerateSample} when the sample standard deviation is zero.
TTestResult one_sample_t_test(std::span<const double> values, double mu0, Tail tail);

struct PairedRatings {
  // Cells in (question_id, approach, sample) order.
  std::vector<std::tuple<int, embed::ApproachKind, int>> cells;
  std::vector<double> first;
  std::vector<double> second;
};

// Throws Error{kPairing} naming every cell rated by only one annotator.
PairedRatings pair_ratings(std::span<const RatingRecord> records,
                           const std::pair<std::string, std::string>& annotators);

// Inter-annotator agreement: Pearson over the paired per-cell ratings.
double iaa_report(std::span<const RatingRecord> records,
                  const std::pair<std::string, std::string>& annotators);

// ---------------------------------------------------------------------------
// Reports (tab-delimited text)
// ---------------------------------------------------------------------------

// Throws Error{kReportFormat} unless the table has exactly two annotators.
std::string format_approach_table(const ApproachTable& table);
std::string format_question_table(const QuestionTable& table);

// Tables of both kinds, IAA, and per-question one-tailed t-tests on the
// per-cell rating differences (A1 - A2, tail in the direction of the mean).
std::string build_report(
    std::span<const RatingRecord> records,
    std::optional<std::pair<std::string, std::string>> annotators = std::nullopt);

}  // namespace covidbot::eval
