#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "covidbot/error.hpp"
#include "covidbot/eval.hpp"

namespace covidbot::eval {

double round_half_up(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  // The 1e-9 nudge keeps decimal ties such as 3.8835 from rounding down
  // because of their binary representation.
  const double scaled = std::floor(std::abs(value) * scale + 0.5 + 1e-9) / scale;
  return std::copysign(scaled, value);
}

std::string fixed3(double value) {
  double r = round_half_up(value, 3);
  if (r == 0.0) r = 0.0;  // no "-0.000"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", r);
  return buf;
}

std::string format_difference(const QuestionRow& row) {
  return fixed3(row.difference) + " (" + row.higher + ")";
}

std::vector<std::string> audit_question_row(const PrintedQuestionRow& printed) {
  const QuestionRow expected = question_row_from_means(printed.question_id, printed.a1, printed.a2);
  const std::string label = "question #" + std::to_string(printed.question_id) + ": ";
  std::vector<std::string> issues;
  if (fixed3(printed.average) != fixed3(expected.average)) {
    issues.push_back(label + "average printed " + fixed3(printed.average) +
                     " but annotator means imply " + fixed3(expected.average));
  }
  QuestionRow as_printed = expected;
  as_printed.difference = printed.difference;
  as_printed.higher = printed.higher;
  if (format_difference(as_printed) != format_difference(expected)) {
    issues.push_back(label + "difference printed " + format_difference(as_printed) +
                     " but annotator means imply " + format_difference(expected));
  }
  return issues;
}

std::vector<std::string> audit_approach_row(const PrintedApproachRow& printed) {
  const ApproachRow expected = approach_row_from_means(printed.approach, {printed.a1, printed.a2});
  std::vector<std::string> issues;
  // 1e-12 absorbs the binary representation of the decimal inputs.
  if (std::abs(printed.overall - expected.overall) > 0.0005 + 1e-12) {
    issues.push_back(std::string(embed::to_string(printed.approach)) + ": overall printed " +
                     fixed3(printed.overall) + " but annotator means imply " +
                     fixed3(expected.overall));
  }
  return issues;
}

std::string format_approach_table(const ApproachTable& table) {
  if (table.annotators.size() != 2) {
    throw Error(Errc::kReportFormat, "approach table needs exactly two annotators, found " +
                                         std::to_string(table.annotators.size()));
  }
  std::string out = "# A1 = " + table.annotators[0] + ", A2 = " + table.annotators[1] + "\n";
  out += "approach\tA1\tA2\toverall\n";
  for (const auto& row : table.rows) {
    out += std::string(embed::to_string(row.approach)) + "\t" + fixed3(row.annotator_means[0]) +
           "\t" + fixed3(row.annotator_means[1]) + "\t" + fixed3(row.overall) + "\n";
  }
  return out;
}

std::string format_question_table(const QuestionTable& table) {
  std::string out =
      "# A1 = " + table.annotators.first + ", A2 = " + table.annotators.second + "\n";
  out += "question\tA1\tA2\taverage\tdifference\n";
  for (const auto& row : table.rows) {
    out += "#" + std::to_string(row.question_id) + "\t" + fixed3(row.a1) + "\t" +
           fixed3(row.a2) + "\t" + fixed3(row.average) + "\t" + format_difference(row) + "\n";
  }
  return out;
}

std::string build_report(std::span<const RatingRecord> records,
                         std::optional<std::pair<std::string, std::string>> annotators) {
  QuestionTable by_question = aggregate_by_question(records, annotators);
  const auto pair = by_question.annotators;

  std::vector<RatingRecord> selected;
  for (const auto& r : records) {
    if (r.annotator == pair.first || r.annotator == pair.second) selected.push_back(r);
  }
  ApproachTable by_approach = aggregate_by_approach(selected);
  // aggregate_by_approach orders annotators lexicographically; keep A1/A2.
  if (by_approach.annotators.front() != pair.first) {
    std::swap(by_approach.annotators[0], by_approach.annotators[1]);
    for (auto& row : by_approach.rows) std::swap(row.annotator_means[0], row.annotator_means[1]);
  }

  std::string out = "## scores by approach\n" + format_approach_table(by_approach);
  std::vector<double> overall;
  for (const auto& row : by_approach.rows) overall.push_back(row.overall);
  out += "overall_average\t" + fixed3(mean_of(overall)) + "\n\n";

  out += "## scores by question\n" + format_question_table(by_question) + "\n";

  out += "## inter-annotator agreement (pearson)\n";
  try {
    out += "iaa\t" + fixed3(iaa_report(selected, pair)) + "\n\n";
  } catch (const Error& e) {
    out += "iaa\tNA\t# " + std::string(e.what()) + "\n\n";
  }

  out += "## one-tailed one-sample t-test on per-cell differences (A1 - A2), mu0 = 0\n";
  out += "question\tn\tmean_difference\tt\tdf\tp\ttail\n";
  std::map<int, std::vector<double>> diffs;
  try {
    const PairedRatings paired = pair_ratings(selected, pair);
    for (std::size_t i = 0; i < paired.cells.size(); ++i) {
      diffs[std::get<0>(paired.cells[i])].push_back(paired.first[i] - paired.second[i]);
    }
  } catch (const Error& e) {
    out += "# " + std::string(e.what()) + "\n";
  }
  for (const auto& [qid, values] : diffs) {
    const std::string head = "#" + std::to_string(qid) + "\t" + std::to_string(values.size());
    if (values.size() < 2) {
      out += head + "\tNA\tNA\tNA\tNA\tNA\n";
      continue;
    }
    const double mean = mean_of(values);
    const Tail tail = mean < 0 ? Tail::kLower : Tail::kUpper;
    try {
      const TTestResult t = one_sample_t_test(values, 0.0, tail);
      char buf[160];
      std::snprintf(buf, sizeof buf, "\t%.3f\t%.4f\t%d\t%.4f\t%s\n", mean, t.t, t.df, t.p,
                    tail == Tail::kUpper ? "upper" : "lower");
      out += head + buf;
    } catch (const Error&) {
      out += head + "\t" + fixed3(mean) + "\tNA\tNA\tNA\tdegenerate\n";
    }
  }
  out +=
      "\n# rubric: relevant=5 well-formed=4 informative=3 acceptable=2 poor=1\n"
      "# note: poor is scored 1 point; the printed rubric lists 2 points for both "
      "acceptable and poor\n";
  return out;
}

}  // namespace covidbot::eval
