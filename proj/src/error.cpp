#include "covidbot/error.hpp"

namespace covidbot {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::kInvalidArgument: return "invalid_argument";
    case Errc::kIo: return "io_error";
    case Errc::kParse: return "parse_error";
    case Errc::kRejectedDocument: return "rejected_document";
    case Errc::kEmptyCorpus: return "empty_corpus";
    case Errc::kEmptyVocabulary: return "empty_vocabulary";
    case Errc::kEmptyAnswer: return "empty_answer";
    case Errc::kProviderUnavailable: return "provider_unavailable";
    case Errc::kProtocol: return "protocol_error";
    case Errc::kMetricMismatch: return "metric_mismatch";
    case Errc::kBackendUnavailable: return "backend_unavailable";
    case Errc::kEmptyGeneration: return "empty_generation";
    case Errc::kReportFormat: return "report_format";
    case Errc::kUndefinedCorrelation: return "undefined_correlation";
    case Errc::kDegenerateSample: return "degenerate_sample";
    case Errc::kPairing: return "pairing_error";
  }
  return "unknown";
}

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::kNone: return "none";
    case Stage::kGenerate: return "generate";
    case Stage::kClean: return "clean";
    case Stage::kEmbed: return "embed";
    case Stage::kRank: return "rank";
  }
  return "none";
}

}  // namespace covidbot
