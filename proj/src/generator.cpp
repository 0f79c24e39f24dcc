#include "covidbot/generator.hpp"

#include <map>
#include <set>

#include "covidbot/error.hpp"
#include "covidbot/http_util.hpp"
#include "covidbot/text_util.hpp"
#include "json.hpp"

namespace covidbot::generator {
using nlohmann::json;

void GenerationRequest::validate() const {
  if (text::is_blank(question)) {
    throw Error(Errc::kInvalidArgument, "question must be non-empty", Stage::kGenerate);
  }
  if (max_length < 16) {
    throw Error(Errc::kInvalidArgument, "max_length must be at least 16", Stage::kGenerate);
  }
  if (!(temperature >= 0.0)) {
    throw Error(Errc::kInvalidArgument, "temperature must be non-negative", Stage::kGenerate);
  }
}

std::string GenerationRequest::prompt() const {
  if (prompt_template.empty()) return question;
  static constexpr std::string_view kSlot = "{question}";
  std::string out = prompt_template;
  for (auto pos = out.find(kSlot); pos != std::string::npos;
       pos = out.find(kSlot, pos + question.size())) {
    out.replace(pos, kSlot.size(), question);
  }
  return out;
}

RawAnswer generate_remote(const std::string& endpoint, const GenerationRequest& request,
                          std::chrono::milliseconds timeout) {
  request.validate();
  const json body = {{"prompt", request.prompt()},
                     {"max_length", request.max_length},
                     {"temperature", request.temperature}};

  const auto start = std::chrono::steady_clock::now();
  const http::Reply reply = http::post_json(endpoint, "/generate", body.dump(), timeout);
  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);

  if (reply.status == 0) {
    throw Error(Errc::kBackendUnavailable,
                "generator " + endpoint + " unreachable: " + reply.transport_error,
                Stage::kGenerate);
  }
  if (reply.status != 200) {
    throw Error(Errc::kBackendUnavailable,
                "generator " + endpoint + " returned status " + std::to_string(reply.status),
                Stage::kGenerate);
  }
  const json resp = json::parse(reply.body, nullptr, false);
  if (resp.is_discarded() || !resp.is_object() || !resp.contains("text") ||
      !resp["text"].is_string()) {
    throw Error(Errc::kBackendUnavailable, "generator " + endpoint + " sent a malformed reply",
                Stage::kGenerate);
  }
  RawAnswer answer;
  answer.text = resp["text"].get<std::string>();
  if (answer.text.empty()) {
    throw Error(Errc::kEmptyGeneration, "generator returned an empty completion",
                Stage::kGenerate);
  }
  answer.backend_id = resp.contains("model") && resp["model"].is_string()
                          ? resp["model"].get<std::string>()
                          : endpoint;
  answer.latency_ms = elapsed.count();
  return answer;
}

RawAnswer generate_stub(const corpus::Corpus& corpus, const GenerationRequest& request) {
  request.validate();
  if (corpus.empty()) {
    throw Error(Errc::kEmptyCorpus, "stub generator needs a corpus", Stage::kGenerate);
  }
  const auto q_tokens = text::tokenize(request.question);
  const std::set<std::string> wanted(q_tokens.begin(), q_tokens.end());

  const corpus::Document* best = &corpus.documents.front();
  std::size_t best_score = 0;
  std::vector<text::Token> best_tokens;
  for (const auto& doc : corpus.documents) {
    auto tokens = text::tokenize_with_offsets(doc.combined_text);
    std::set<std::string> shared;
    for (const auto& t : tokens) {
      if (wanted.count(t.text)) shared.insert(t.text);
    }
    if (shared.size() > best_score) {
      best_score = shared.size();
      best = &doc;
      best_tokens = std::move(tokens);
    }
  }

  std::size_t start = 0;
  if (best_score > 0) {
    // token -> (occurrences, first offset)
    std::map<std::string, std::pair<std::size_t, std::size_t>> hits;
    for (const auto& t : best_tokens) {
      if (!wanted.count(t.text)) continue;
      auto [it, inserted] = hits.try_emplace(t.text, 0, t.offset);
      ++it->second.first;
    }
    std::size_t best_count = 0;
    for (const auto& [token, hit] : hits) {
      const auto [count, offset] = hit;
      if (count > best_count || (count == best_count && offset < start)) {
        best_count = count;
        start = offset;
      }
    }
  }

  const std::string& source = best->combined_text;
  std::size_t end = std::min(source.size(), start + static_cast<std::size_t>(request.max_length));
  // Do not cut a UTF-8 sequence in half.
  while (end < source.size() && end > start &&
         (static_cast<unsigned char>(source[end]) & 0xC0) == 0x80) {
    --end;
  }
  RawAnswer answer;
  answer.text = source.substr(start, end - start);
  answer.backend_id = "stub";
  answer.latency_ms = 0;
  if (text::is_blank(answer.text)) {
    throw Error(Errc::kEmptyGeneration, "stub produced no text", Stage::kGenerate);
  }
  return answer;
}

}  // namespace covidbot::generator
