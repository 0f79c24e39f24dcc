// covidbot: command-line front end for the answer pipeline, the evaluation
// grid and reports, and the HTTP service.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "covidbot/batch.hpp"
#include "covidbot/corpus.hpp"
#include "covidbot/error.hpp"
#include "covidbot/eval.hpp"
#include "covidbot/pipeline.hpp"
#include "covidbot/service.hpp"

namespace {

using namespace covidbot;

struct Options {
  std::string config_path;
  std::string corpus_path;
  std::string approach;
  std::string metric;
  std::size_t top_k = 0;
  bool dedup = false;
  std::string generator;
};

service::ServiceConfig effective_config(const Options& o) {
  std::optional<std::filesystem::path> file;
  if (!o.config_path.empty()) file = o.config_path;
  service::ServiceConfig c = service::load_service_config(file);
  if (!o.corpus_path.empty()) c.corpus_path = o.corpus_path;
  if (!o.approach.empty()) {
    auto kind = embed::parse_approach(o.approach);
    if (!kind) throw Error(Errc::kInvalidArgument, "unknown approach '" + o.approach + "'");
    c.default_approach = *kind;
  }
  if (!o.metric.empty()) {
    auto metric = rank::parse_metric(o.metric);
    if (!metric) throw Error(Errc::kInvalidArgument, "unknown metric '" + o.metric + "'");
    c.default_metric = *metric;
  }
  if (o.top_k > 0) c.top_k = o.top_k;
  if (o.dedup) c.dedup = true;
  return c;
}

embed::Approach approach_for(const service::ServiceConfig& c, embed::ApproachKind kind) {
  if (kind == embed::ApproachKind::kTfidf) return embed::Approach::tfidf();
  auto it = c.providers.find(kind);
  return {kind, it == c.providers.end() ? std::string() : it->second};
}

pipeline::PipelineConfig pipeline_config(const service::ServiceConfig& c, const Options& o) {
  pipeline::PipelineConfig p;
  p.approach = approach_for(c, c.default_approach);
  p.metric = c.default_metric;
  p.top_k = c.top_k;
  p.dedup = c.dedup;
  p.max_length = c.max_length;
  p.temperature = c.temperature;
  p.prompt_template = c.prompt_template;
  p.timeout = c.request_timeout;
  p.generator_endpoint = c.generator_endpoint;
  if (!o.generator.empty()) {
    auto kind = pipeline::parse_generator(o.generator);
    if (!kind) throw Error(Errc::kInvalidArgument, "--generator must be remote or stub");
    p.generator = *kind;
  } else {
    p.generator = c.generator_endpoint.empty() ? pipeline::GeneratorKind::kStub
                                               : pipeline::GeneratorKind::kRemote;
  }
  return p;
}

std::optional<corpus::Corpus> maybe_corpus(const service::ServiceConfig& c) {
  if (c.corpus_path.empty()) return std::nullopt;
  return corpus::open_corpus(c.corpus_path);
}

int cmd_ingest(const std::string& dir, const std::string& out) {
  const corpus::Corpus corpus = corpus::build_corpus(dir);
  corpus::save_corpus_cache(corpus, out);
  std::cout << "documents\t" << corpus.size() << "\nrejected\t" << corpus.rejected << "\n";
  for (const auto& f : corpus.rejected_files) std::cout << "rejected_file\t" << f << "\n";
  std::cout << "cache\t" << out << "\n";
  return 0;
}

int cmd_ask(const Options& o, const std::string& question, bool as_json) {
  const auto c = effective_config(o);
  const auto corpus = maybe_corpus(c);
  const auto p = pipeline_config(c, o);
  const auto r = pipeline::answer_question(question, p, corpus ? &*corpus : nullptr);
  if (as_json) {
    std::cout << pipeline::response_to_json(r, true).dump(2) << "\n";
    return 0;
  }
  std::cout << r.answer.text << "\n\n";
  for (const auto& s : r.answer.selected) {
    std::printf("%8.4f  [%zu] %s\n", s.score, s.index, s.sentence.c_str());
  }
  std::cout << "\n" << service::kDisclaimer << "\n";
  return 0;
}

int cmd_batch(const Options& o, const std::string& questions_path,
              const std::vector<std::string>& approach_names, int samples,
              std::size_t in_flight, const std::string& out_path) {
  const auto c = effective_config(o);
  const auto corpus = maybe_corpus(c);
  const auto base = pipeline_config(c, o);
  const auto questions = eval::load_questions(questions_path);

  std::vector<embed::Approach> approaches;
  if (approach_names.empty()) {
    for (auto kind : embed::kAllApproaches) approaches.push_back(approach_for(c, kind));
  } else {
    for (const auto& name : approach_names) {
      auto kind = embed::parse_approach(name);
      if (!kind) throw Error(Errc::kInvalidArgument, "unknown approach '" + name + "'");
      approaches.push_back(approach_for(c, *kind));
    }
  }

  const auto gen = pipeline::make_generator(base, corpus ? &*corpus : nullptr);
  pipeline::BatchOptions opts;
  opts.samples_per_cell = samples;
  opts.max_in_flight = in_flight;
  const auto cells = pipeline::batch_generate(questions, approaches, opts, base,
                                              corpus ? &*corpus : nullptr, *gen);
  const std::string ndjson = pipeline::grid_to_ndjson(cells);
  if (out_path.empty() || out_path == "-") {
    std::cout << ndjson;
  } else {
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::kIo, "cannot write " + out_path);
    out << ndjson;
  }
  std::size_t failed = 0;
  for (const auto& cell : cells) failed += cell.ok() ? 0 : 1;
  std::cerr << "[batch] " << cells.size() << " cells, " << failed << " failed\n";
  return 0;
}

int cmd_report(const std::string& score_path, const std::vector<std::string>& annotators) {
  const auto records = eval::load_scores(score_path);
  std::optional<std::pair<std::string, std::string>> pair;
  if (!annotators.empty()) {
    if (annotators.size() != 2) {
      throw Error(Errc::kInvalidArgument, "--annotators takes exactly two ids");
    }
    pair = std::make_pair(annotators[0], annotators[1]);
  }
  std::cout << eval::build_report(records, pair);
  return 0;
}

int cmd_serve(const Options& o) {
  const auto c = effective_config(o);
  std::cerr << "[service] effective configuration\n" << service::describe(c);
  c.validate();
  std::optional<corpus::Corpus> corpus;
  if (!c.corpus_path.empty()) corpus = corpus::open_corpus(c.corpus_path);
  const service::Service svc(c, std::move(corpus));
  return svc.run() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"covidbot: hybrid generate-then-filter question answering"};
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  app.add_option("--config", o.config_path, "JSON service/pipeline config file");
  app.add_option("--corpus", o.corpus_path, "Article directory or corpus cache file");
  app.add_option("--approach", o.approach, "tfidf, bert, biobert or use");
  app.add_option("--metric", o.metric, "cosine or inner_product");
  app.add_option("--top-k", o.top_k, "Number of sentences kept");
  app.add_flag("--dedup", o.dedup, "Drop repeated sentences from the composed answer");
  app.add_option("--generator", o.generator, "remote or stub");

  std::string ingest_dir;
  std::string ingest_out = "corpus.jsonl";
  auto* ingest = app.add_subcommand("ingest", "Build a corpus cache from article files");
  ingest->add_option("dir", ingest_dir, "Directory of article JSON files")->required();
  ingest->add_option("--out", ingest_out, "Cache file to write");

  std::string question;
  bool as_json = false;
  auto* ask = app.add_subcommand("ask", "Answer one question");
  ask->add_option("question", question, "Question text")->required();
  ask->add_flag("--json", as_json, "Print the full response as JSON");

  std::string questions_path = std::string(COVIDBOT_DATA_DIR) + "/questions.json";
  std::vector<std::string> approach_names;
  int samples = 5;
  std::size_t in_flight = 4;
  std::string batch_out;
  auto* batch = app.add_subcommand("batch", "Generate the question x approach x sample grid");
  batch->add_option("--questions", questions_path, "Question battery file");
  batch->add_option("--approaches", approach_names, "Approaches to run")->delimiter(',');
  batch->add_option("--samples", samples, "Answers per question and approach");
  batch->add_option("--max-in-flight", in_flight, "Concurrent pipeline runs");
  batch->add_option("--out", batch_out, "Output file (newline-delimited JSON)");

  std::string score_path;
  std::vector<std::string> annotators;
  auto* report = app.add_subcommand("report", "Score tables, agreement and t-tests");
  report->add_option("scorefile", score_path, "Rating records")->required();
  report->add_option("--annotators", annotators, "A1,A2 annotator ids")->delimiter(',');

  auto* serve = app.add_subcommand("serve", "Run the HTTP service");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) return cmd_ingest(ingest_dir, ingest_out);
    if (*ask) return cmd_ask(o, question, as_json);
    if (*batch) return cmd_batch(o, questions_path, approach_names, samples, in_flight, batch_out);
    if (*report) return cmd_report(score_path, annotators);
    if (*serve) return cmd_serve(o);
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]";
    if (e.stage() != Stage::kNone) std::cerr << " stage=" << to_string(e.stage());
    std::cerr << ": " << e.what() << "\n";
    return 2;
  }
  return 0;
}
