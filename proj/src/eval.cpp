#include "covidbot/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>

#include "covidbot/error.hpp"
#include "covidbot/text_util.hpp"
#include "json.hpp"

namespace covidbot::eval {
using nlohmann::json;

namespace {

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::optional<int> parse_int(std::string_view s) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  const char sep = line.find('\t') != std::string_view::npos ? '\t' : ',';
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    fields.push_back(text::trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

using CellKey = std::tuple<int, embed::ApproachKind, int>;

std::string describe(const CellKey& cell) {
  return "(question " + std::to_string(std::get<0>(cell)) + ", " +
         std::string(embed::to_string(std::get<1>(cell))) + ", sample " +
         std::to_string(std::get<2>(cell)) + ")";
}

}  // namespace

// ---------------------------------------------------------------------------
// Question battery

std::string ensure_covid_suffix(std::string_view question) {
  if (text::lower(question).find("covid-19") != std::string::npos) {
    return std::string(question);
  }
  std::string_view body = text::trim(question);
  if (!body.empty() && body.back() == '?') {
    body.remove_suffix(1);
    return std::string(text::trim(body)) + " of COVID-19?";
  }
  return std::string(body) + " of COVID-19";
}

std::vector<EvalQuestion> parse_questions(std::string_view json_text) {
  const json doc = json::parse(json_text.begin(), json_text.end(), nullptr, false);
  if (doc.is_discarded() || !doc.is_object() || !doc.contains("questions") ||
      !doc["questions"].is_array()) {
    throw Error(Errc::kParse, "question battery needs a 'questions' list");
  }
  std::vector<EvalQuestion> out;
  std::set<int> ids;
  for (const auto& q : doc["questions"]) {
    if (!q.is_object() || !q.contains("id") || !q["id"].is_number_integer() ||
        !q.contains("text") || !q["text"].is_string()) {
      throw Error(Errc::kParse, "question entries need an integer 'id' and a 'text'");
    }
    EvalQuestion eq{q["id"].get<int>(), ensure_covid_suffix(q["text"].get<std::string>())};
    if (eq.id < 1 || !ids.insert(eq.id).second) {
      throw Error(Errc::kParse, "question id " + std::to_string(eq.id) + " is invalid or repeated");
    }
    out.push_back(std::move(eq));
  }
  std::sort(out.begin(), out.end(),
            [](const EvalQuestion& a, const EvalQuestion& b) { return a.id < b.id; });
  return out;
}

std::vector<EvalQuestion> load_questions(const std::filesystem::path& path) {
  return parse_questions(read_text(path));
}

// ---------------------------------------------------------------------------
// Ratings

std::string_view to_string(RatingCategory c) {
  switch (c) {
    case RatingCategory::kRelevant: return "relevant";
    case RatingCategory::kWellFormed: return "well-formed";
    case RatingCategory::kInformative: return "informative";
    case RatingCategory::kAcceptable: return "acceptable";
    case RatingCategory::kPoor: return "poor";
  }
  return "poor";
}

std::optional<RatingCategory> parse_rating(std::string_view s) {
  const std::string n = text::lower(text::trim(s));
  if (auto v = parse_int(n); v && *v >= 1 && *v <= 5) return static_cast<RatingCategory>(*v);
  if (n == "relevant") return RatingCategory::kRelevant;
  if (n == "well-formed" || n == "well_formed" || n == "wellformed") {
    return RatingCategory::kWellFormed;
  }
  if (n == "informative") return RatingCategory::kInformative;
  if (n == "acceptable") return RatingCategory::kAcceptable;
  if (n == "poor") return RatingCategory::kPoor;
  return std::nullopt;
}

std::vector<RatingRecord> parse_scores(std::string_view input) {
  std::vector<RatingRecord> out;
  std::set<std::tuple<int, embed::ApproachKind, int, std::string>> keys;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= input.size()) {
    auto nl = input.find('\n', pos);
    if (nl == std::string_view::npos) nl = input.size();
    std::string_view line = text::trim(input.substr(pos, nl - pos));
    pos = nl + 1;
    ++lineno;
    if (line.empty() || line.front() == '#') continue;

    const auto f = split_fields(line);
    if (f.front() == "question_id") continue;
    auto bad = [&](const std::string& what) {
      return Error(Errc::kParse, "score line " + std::to_string(lineno) + ": " + what);
    };
    if (f.size() != 5 && f.size() != 6) throw bad("expected 5 or 6 fields");

    RatingRecord r;
    const auto qid = parse_int(f[0]);
    if (!qid || *qid < 1) throw bad("bad question id '" + std::string(f[0]) + "'");
    const auto approach = embed::parse_approach(f[1]);
    if (!approach) throw bad("unknown approach '" + std::string(f[1]) + "'");
    const auto sample = parse_int(f[2]);
    if (!sample || *sample < 1 || *sample > 5) throw bad("sample must be 1..5");
    if (f[3].empty()) throw bad("empty annotator id");
    const auto rating = parse_rating(f[4]);
    if (!rating) throw bad("unknown rating '" + std::string(f[4]) + "'");
    r.question_id = *qid;
    r.approach = *approach;
    r.sample = *sample;
    r.annotator = std::string(f[3]);
    r.rating = *rating;
    if (f.size() == 6) r.phase = std::string(f[5]);

    if (!keys.emplace(r.question_id, r.approach, r.sample, r.annotator).second) {
      throw Error(Errc::kInvalidArgument,
                  "score line " + std::to_string(lineno) + ": duplicate rating for " +
                      describe({r.question_id, r.approach, r.sample}) + " by " + r.annotator);
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<RatingRecord> load_scores(const std::filesystem::path& path) {
  return parse_scores(read_text(path));
}

std::string format_scores(std::span<const RatingRecord> records) {
  std::string out = "question_id,approach,sample,annotator,rating,phase\n";
  for (const auto& r : records) {
    out += std::to_string(r.question_id) + "," + std::string(embed::to_string(r.approach)) +
           "," + std::to_string(r.sample) + "," + r.annotator + "," +
           std::string(to_string(r.rating)) + "," + r.phase + "\n";
  }
  return out;
}

std::vector<RatingRecord> filter_phase(std::span<const RatingRecord> records,
                                       std::string_view phase) {
  std::vector<RatingRecord> out;
  for (const auto& r : records) {
    if (r.phase == phase) out.push_back(r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Aggregation

double mean_of(std::span<const double> values) {
  if (values.empty()) throw Error(Errc::kInvalidArgument, "mean of an empty list");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

ApproachRow approach_row_from_means(embed::ApproachKind approach,
                                    std::vector<double> annotator_means) {
  ApproachRow row{approach, std::move(annotator_means), 0.0};
  row.overall = mean_of(row.annotator_means);
  return row;
}

ApproachTable aggregate_by_approach(std::span<const RatingRecord> records) {
  if (records.empty()) throw Error(Errc::kInvalidArgument, "no rating records");
  // (approach, annotator) -> ratings; std::map keeps the output independent of
  // record order.
  std::map<std::pair<embed::ApproachKind, std::string>, std::vector<double>> groups;
  std::set<std::string> annotators;
  std::set<embed::ApproachKind> approaches;
  for (const auto& r : records) {
    groups[{r.approach, r.annotator}].push_back(points(r.rating));
    annotators.insert(r.annotator);
    approaches.insert(r.approach);
  }

  ApproachTable table;
  table.annotators.assign(annotators.begin(), annotators.end());
  for (auto kind : embed::kAllApproaches) {
    if (!approaches.count(kind)) continue;
    std::vector<double> means;
    for (const auto& a : table.annotators) {
      auto it = groups.find({kind, a});
      if (it == groups.end()) {
        throw Error(Errc::kInvalidArgument, "annotator " + a + " has no ratings for " +
                                                std::string(embed::to_string(kind)));
      }
      std::sort(it->second.begin(), it->second.end());
      means.push_back(mean_of(it->second));
    }
    table.rows.push_back(approach_row_from_means(kind, std::move(means)));
  }
  return table;
}

QuestionRow question_row_from_means(int question_id, double a1, double a2) {
  QuestionRow row;
  row.question_id = question_id;
  row.a1 = a1;
  row.a2 = a2;
  row.average = (a1 + a2) / 2.0;
  const double diff = a1 - a2;
  if (std::abs(diff) <= 1e-12) {
    row.difference = 0.0;
    row.higher = "NA";
  } else {
    row.difference = std::abs(diff);
    row.higher = diff > 0 ? "A1" : "A2";
  }
  return row;
}

QuestionTable aggregate_by_question(
    std::span<const RatingRecord> records,
    std::optional<std::pair<std::string, std::string>> annotators) {
  if (records.empty()) throw Error(Errc::kInvalidArgument, "no rating records");
  QuestionTable table;
  if (annotators) {
    table.annotators = *annotators;
  } else {
    std::set<std::string> ids;
    for (const auto& r : records) ids.insert(r.annotator);
    if (ids.size() != 2) {
      throw Error(Errc::kReportFormat, "question table needs exactly two annotators, found " +
                                           std::to_string(ids.size()));
    }
    table.annotators = {*ids.begin(), *std::next(ids.begin())};
  }

  std::map<int, std::pair<std::vector<double>, std::vector<double>>> per_question;
  for (const auto& r : records) {
    if (r.annotator == table.annotators.first) {
      per_question[r.question_id].first.push_back(points(r.rating));
    } else if (r.annotator == table.annotators.second) {
      per_question[r.question_id].second.push_back(points(r.rating));
    }
  }
  for (auto& [qid, ratings] : per_question) {
    if (ratings.first.empty() || ratings.second.empty()) {
      throw Error(Errc::kInvalidArgument,
                  "question " + std::to_string(qid) + " is not rated by both annotators");
    }
    std::sort(ratings.first.begin(), ratings.first.end());
    std::sort(ratings.second.begin(), ratings.second.end());
    table.rows.push_back(
        question_row_from_means(qid, mean_of(ratings.first), mean_of(ratings.second)));
  }
  return table;
}

// ---------------------------------------------------------------------------
// Statistics

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw Error(Errc::kInvalidArgument, "pearson inputs differ in length");
  }
  if (xs.size() < 2) throw Error(Errc::kInvalidArgument, "pearson needs at least two pairs");
  const double mx = mean_of(xs);
  const double my = mean_of(ys);
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw Error(Errc::kUndefinedCorrelation, "correlation undefined for a constant series");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

TTestResult one_sample_t_test(std::span<const double> values, double mu0, Tail tail) {
  if (values.size() < 2) throw Error(Errc::kInvalidArgument, "t-test needs at least two values");
  std::vector<double> d;
  d.reserve(values.size());
  for (double v : values) d.push_back(v - mu0);
  if (std::all_of(d.begin(), d.end(), [&](double x) { return x == d.front(); })) {
    throw Error(Errc::kDegenerateSample, "t-test sample has zero standard deviation");
  }
  const double n = static_cast<double>(d.size());
  const double mean = mean_of(d);
  double ss = 0.0;
  for (double x : d) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  if (sd == 0.0) throw Error(Errc::kDegenerateSample, "t-test sample has zero standard deviation");

  TTestResult r;
  r.df = static_cast<int>(d.size()) - 1;
  r.t = mean / (sd / std::sqrt(n));
  const boost::math::students_t dist(static_cast<double>(r.df));
  r.p = tail == Tail::kUpper ? boost::math::cdf(boost::math::complement(dist, r.t))
                             : boost::math::cdf(dist, r.t);
  return r;
}

PairedRatings pair_ratings(std::span<const RatingRecord> records,
                           const std::pair<std::string, std::string>& annotators) {
  std::map<CellKey, std::pair<std::optional<double>, std::optional<double>>> cells;
  for (const auto& r : records) {
    const CellKey key{r.question_id, r.approach, r.sample};
    if (r.annotator == annotators.first) {
      cells[key].first = points(r.rating);
    } else if (r.annotator == annotators.second) {
      cells[key].second = points(r.rating);
    }
  }
  PairedRatings out;
  std::vector<std::string> unpaired;
  for (const auto& [key, pair] : cells) {
    if (!pair.first || !pair.second) {
      unpaired.push_back(describe(key) + " lacks " +
                         (pair.first ? annotators.second : annotators.first));
      continue;
    }
    out.cells.push_back(key);
    out.first.push_back(*pair.first);
    out.second.push_back(*pair.second);
  }
  if (!unpaired.empty()) {
    throw Error(Errc::kPairing, "unpaired cells: " + text::join(unpaired, "; "));
  }
  return out;
}

double iaa_report(std::span<const RatingRecord> records,
                  const std::pair<std::string, std::string>& annotators) {
  const PairedRatings paired = pair_ratings(records, annotators);
  return pearson(paired.first, paired.second);
}

}  // namespace covidbot::eval
