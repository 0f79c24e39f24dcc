#include "covidbot/batch.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace covidbot::pipeline {
using nlohmann::json;

std::vector<GridCell> batch_generate(std::span<const eval::EvalQuestion> questions,
                                     std::span<const embed::Approach> approaches,
                                     const BatchOptions& options, const PipelineConfig& base,
                                     const corpus::Corpus* corpus,
                                     const generator::Generator& generator) {
  if (questions.empty() || approaches.empty()) {
    throw Error(Errc::kInvalidArgument, "batch needs questions and approaches");
  }
  if (options.samples_per_cell < 1) {
    throw Error(Errc::kInvalidArgument, "samples_per_cell must be positive");
  }

  std::vector<GridCell> cells;
  cells.reserve(questions.size() * approaches.size() *
                static_cast<std::size_t>(options.samples_per_cell));
  for (const auto& q : questions) {
    for (const auto& a : approaches) {
      for (int s = 1; s <= options.samples_per_cell; ++s) {
        GridCell cell;
        cell.question_id = q.id;
        cell.question = q.text;
        cell.approach = a;
        cell.sample = s;
        cells.push_back(std::move(cell));
      }
    }
  }

  auto run_cell = [&](GridCell& cell) {
    PipelineConfig config = base;
    config.approach = cell.approach;
    config.seed = base.seed + static_cast<std::uint64_t>(cell.sample - 1);
    try {
      cell.response = answer_question(cell.question, config, corpus, generator);
    } catch (const Error& e) {
      cell.error = CellError{e.stage(), e.code(), e.what()};
    } catch (const std::exception& e) {
      cell.error = CellError{Stage::kNone, Errc::kInvalidArgument, e.what()};
    }
  };

  const std::size_t workers =
      std::clamp<std::size_t>(options.max_in_flight, 1, std::max<std::size_t>(cells.size(), 1));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < cells.size(); i = next++) run_cell(cells[i]);
    });
  }
  for (auto& t : pool) t.join();
  return cells;
}

std::string grid_record(const GridCell& cell) {
  json j = {{"question_id", cell.question_id},
            {"approach", embed::to_string(cell.approach.kind)},
            {"sample", cell.sample}};
  if (cell.response) {
    const FinalResponse& r = *cell.response;
    json scores = json::array();
    for (const auto& s : r.answer.selected) {
      scores.push_back({{"index", s.index}, {"sentence", s.sentence}, {"score", s.score}});
    }
    j["answer_text"] = r.answer.text;
    j["scores"] = scores;
    j["config"] = config_to_json(r.config);
  } else if (cell.error) {
    j["error"] = {{"stage", to_string(cell.error->stage)},
                  {"code", to_string(cell.error->code)},
                  {"message", cell.error->message}};
  }
  return j.dump();
}

std::string grid_to_ndjson(std::span<const GridCell> cells) {
  std::string out;
  for (const auto& c : cells) {
    out += grid_record(c);
    out += '\n';
  }
  return out;
}

}  // namespace covidbot::pipeline
