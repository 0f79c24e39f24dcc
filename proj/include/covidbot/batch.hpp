#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "covidbot/error.hpp"
#include "covidbot/eval.hpp"
#include "covidbot/pipeline.hpp"

namespace covidbot::pipeline {

struct CellError {
  Stage stage = Stage::kNone;
  Errc code = Errc::kInvalidArgument;
  std::string message;
};

// One answer of the evaluation grid, or the error that replaced it.
struct GridCell {
  int question_id = 0;
  std::string question;
  embed::Approach approach;
  int sample = 1;
  std::optional<FinalResponse> response;
  std::optional<CellError> error;

  bool ok() const noexcept { return response.has_value(); }
};

struct BatchOptions {
  int samples_per_cell = 5;
  std::size_t max_in_flight = 4;
};

// Runs questions x approaches x samples. Sample s (1-based) uses seed
// base.seed + s - 1 and its own generation. Failing cells are recorded and
// the batch continues. Cells come back in (question, approach, sample) order.
std::vector<GridCell> batch_generate(std::span<const eval::EvalQuestion> questions,
                                     std::span<const embed::Approach> approaches,
                                     const BatchOptions& options, const PipelineConfig& base,
                                     const corpus::Corpus* corpus,
                                     const generator::Generator& generator);

// One line per cell: question_id, approach, sample, answer_text, scores
// (per selected sentence) and the config snapshot; failing cells carry an
// "error" object instead of an answer.
std::string grid_record(const GridCell& cell);
std::string grid_to_ndjson(std::span<const GridCell> cells);

}  // namespace covidbot::pipeline
