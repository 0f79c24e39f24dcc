#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace covidbot {

enum class Errc {
  kInvalidArgument,
  kIo,
  kParse,
  kRejectedDocument,
  kEmptyCorpus,
  kEmptyVocabulary,
  kEmptyAnswer,
  kProviderUnavailable,
  kProtocol,
  kMetricMismatch,
  kBackendUnavailable,
  kEmptyGeneration,
  kReportFormat,
  kUndefinedCorrelation,
  kDegenerateSample,
  kPairing,
};

// Pipeline stage an error is attributed to. kNone for errors raised outside
// the answer pipeline (ingestion, evaluation).
enum class Stage { kNone, kGenerate, kClean, kEmbed, kRank };

std::string_view to_string(Errc code);
std::string_view to_string(Stage stage);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message, Stage stage = Stage::kNone,
        std::string detail = {})
      : std::runtime_error(message),
        code_(code),
        stage_(stage),
        detail_(std::move(detail)) {}

  Errc code() const noexcept { return code_; }
  Stage stage() const noexcept { return stage_; }
  // Extra payload, e.g. the raw generation for an empty-answer error.
  const std::string& detail() const noexcept { return detail_; }

  Error with_stage(Stage stage) const {
    return Error(code_, what(), stage, detail_);
  }

 private:
  Errc code_;
  Stage stage_;
  std::string detail_;
};

}  // namespace covidbot
