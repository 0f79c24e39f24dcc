#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <string>

#include "covidbot/corpus.hpp"

namespace covidbot::generator {

struct GenerationRequest {
  std::string question;
  int max_length = 512;
  double temperature = 0.7;  // remote backends only
  std::uint64_t seed = 0;    // stub only
  // Optional prompt template for remote backends; "{question}" is replaced by
  // the question. Empty means the question is sent verbatim.
  std::string prompt_template;

  // Throws Error{kInvalidArgument} unless the question is non-blank,
  // max_length >= 16 and temperature >= 0.
  void validate() const;
  std::string prompt() const;
};

struct RawAnswer {
  std::string text;
  std::string backend_id;
  std::int64_t latency_ms = 0;
};

class Generator {
 public:
  virtual ~Generator() = default;
  virtual RawAnswer generate(const GenerationRequest& request) const = 0;
  virtual std::string id() const = 0;
};

// POST {endpoint}/generate {"prompt", "max_length", "temperature"} and expect
// {"text", "model"} with status 200.
//
// Throws Error{kBackendUnavailable} on transport failure, timeout or non-200,
// Error{kEmptyGeneration} on an empty completion. Errors carry Stage::kGenerate.
RawAnswer generate_remote(const std::string& endpoint, const GenerationRequest& request,
                          std::chrono::milliseconds timeout = std::chrono::seconds(30));

// Deterministic corpus-retrieval stand-in for the language model.
//
// Documents are scored by the number of distinct question tokens they
// contain; the best one (ties: first in doc_id order) is used. The returned
// text is the first max_length bytes of its combined_text starting at the
// first occurrence of the best-matching shared token, i.e. the shared token
// that occurs most often in that document (ties: earliest first occurrence).
// With no overlap anywhere, the prefix of the first document is returned.
RawAnswer generate_stub(const corpus::Corpus& corpus, const GenerationRequest& request);

class RemoteGenerator final : public Generator {
 public:
  RemoteGenerator(std::string endpoint, std::chrono::milliseconds timeout)
      : endpoint_(std::move(endpoint)), timeout_(timeout) {}
  RawAnswer generate(const GenerationRequest& request) const override {
    return generate_remote(endpoint_, request, timeout_);
  }
  std::string id() const override { return "remote:" + endpoint_; }

 private:
  std::string endpoint_;
  std::chrono::milliseconds timeout_;
};

class StubGenerator final : public Generator {
 public:
  explicit StubGenerator(const corpus::Corpus& corpus) : corpus_(&corpus) {}
  RawAnswer generate(const GenerationRequest& request) const override {
    return generate_stub(*corpus_, request);
  }
  std::string id() const override { return "stub"; }

 private:
  const corpus::Corpus* corpus_;
};

}  // namespace covidbot::generator
