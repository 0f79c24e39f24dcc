#include "covidbot/service.hpp"

#include <iostream>

#include "covidbot/error.hpp"
#include "covidbot/http_util.hpp"
#include "covidbot/text_util.hpp"
#include "httplib.h"

namespace covidbot::service {
using nlohmann::json;

namespace {

HttpResult error_result(int status, Stage stage, std::string_view code,
                        const std::string& message) {
  // Request validation failures are attributed to the first stage.
  if (stage == Stage::kNone) stage = Stage::kGenerate;
  return {status, {{"error", message}, {"code", code}, {"stage", to_string(stage)}}};
}

int status_for(Errc code) {
  switch (code) {
    case Errc::kInvalidArgument:
    case Errc::kMetricMismatch:
      return 400;
    case Errc::kEmptyAnswer:
      return 422;
    case Errc::kProviderUnavailable:
    case Errc::kProtocol:
    case Errc::kBackendUnavailable:
    case Errc::kEmptyGeneration:
    case Errc::kEmptyCorpus:
      return 502;
    default:
      return 500;
  }
}

}  // namespace

Service::Service(ServiceConfig config, std::optional<corpus::Corpus> corpus)
    : config_(std::move(config)), corpus_(std::move(corpus)) {}

HttpResult Service::ask(std::string_view request_body) const {
  const json req = json::parse(request_body.begin(), request_body.end(), nullptr, false);
  if (req.is_discarded() || !req.is_object()) {
    return error_result(400, Stage::kGenerate, "invalid_argument", "body must be a JSON object");
  }
  if (!req.contains("question") || !req["question"].is_string() ||
      text::is_blank(req["question"].get<std::string>())) {
    return error_result(400, Stage::kGenerate, "invalid_argument", "question must be non-empty");
  }
  const std::string question = req["question"].get<std::string>();

  pipeline::PipelineConfig cfg;
  cfg.metric = config_.default_metric;
  cfg.top_k = config_.top_k;
  cfg.dedup = config_.dedup;
  cfg.max_length = config_.max_length;
  cfg.temperature = config_.temperature;
  cfg.prompt_template = config_.prompt_template;
  cfg.timeout = config_.request_timeout;

  embed::ApproachKind kind = config_.default_approach;
  if (req.contains("approach")) {
    const auto parsed = req["approach"].is_string()
                            ? embed::parse_approach(req["approach"].get<std::string>())
                            : std::nullopt;
    if (!parsed) return error_result(400, Stage::kEmbed, "invalid_argument", "unknown approach");
    kind = *parsed;
  }
  if (kind == embed::ApproachKind::kTfidf) {
    cfg.approach = embed::Approach::tfidf();
  } else {
    auto it = config_.providers.find(kind);
    if (it == config_.providers.end()) {
      return error_result(400, Stage::kEmbed, "invalid_argument",
                          "approach '" + std::string(embed::to_string(kind)) +
                              "' is not configured");
    }
    cfg.approach = embed::Approach::provider(kind, it->second);
  }
  if (req.contains("metric")) {
    const auto parsed = req["metric"].is_string()
                            ? rank::parse_metric(req["metric"].get<std::string>())
                            : std::nullopt;
    if (!parsed) return error_result(400, Stage::kRank, "invalid_argument", "unknown metric");
    cfg.metric = *parsed;
  }
  if (req.contains("top_k")) {
    if (!req["top_k"].is_number_integer() || req["top_k"].get<long long>() < 1) {
      return error_result(400, Stage::kRank, "invalid_argument", "top_k must be a positive integer");
    }
    cfg.top_k = req["top_k"].get<std::size_t>();
  }
  if (req.contains("dedup")) {
    if (!req["dedup"].is_boolean()) {
      return error_result(400, Stage::kRank, "invalid_argument", "dedup must be a boolean");
    }
    cfg.dedup = req["dedup"].get<bool>();
  }

  if (!config_.generator_endpoint.empty()) {
    cfg.generator = pipeline::GeneratorKind::kRemote;
    cfg.generator_endpoint = config_.generator_endpoint;
  } else if (config_.stub_enabled && corpus_) {
    cfg.generator = pipeline::GeneratorKind::kStub;
  } else {
    return error_result(502, Stage::kGenerate, "backend_unavailable", "no generator available");
  }

  try {
    const pipeline::FinalResponse r = pipeline::answer_question(question, cfg, corpus());
    json selected = json::array();
    for (const auto& s : r.answer.selected) {
      selected.push_back({{"sentence", s.sentence}, {"score", s.score}, {"index", s.index}});
    }
    json body = {
        {"question", question},
        {"answer", r.answer.text},
        {"selected", selected},
        {"approach", embed::to_string(cfg.approach.kind)},
        {"metric", rank::to_string(cfg.metric)},
        {"top_k", cfg.top_k},
        {"dedup_applied", r.answer.dedup_applied},
        {"raw_answer", r.raw.text},
        {"generator", r.raw.backend_id},
        {"timings",
         {{"generate_ms", r.timings.generate_ms},
          {"clean_ms", r.timings.clean_ms},
          {"embed_ms", r.timings.embed_ms},
          {"rank_ms", r.timings.rank_ms},
          {"total_ms", r.timings.total_ms}}},
        {"disclaimer", kDisclaimer},
    };
    return {200, body};
  } catch (const Error& e) {
    HttpResult res = error_result(status_for(e.code()), e.stage(), to_string(e.code()), e.what());
    if (e.code() == Errc::kEmptyAnswer) res.body["raw_answer"] = e.detail();
    return res;
  }
}

HttpResult Service::approaches() const {
  json list = json::array();
  list.push_back({{"name", "tfidf"}, {"ready", true}});
  for (auto kind : embed::kAllApproaches) {
    auto it = config_.providers.find(kind);
    if (kind == embed::ApproachKind::kTfidf || it == config_.providers.end()) continue;
    bool ready = false;
    try {
      const std::vector<std::string> probe{"ping"};
      embed::request_embeddings(it->second, probe, config_.probe_timeout);
      ready = true;
    } catch (const Error&) {
      ready = false;
    }
    list.push_back({{"name", embed::to_string(kind)}, {"ready", ready}});
  }
  return {200, {{"approaches", list}}};
}

HttpResult Service::health() const {
  const std::size_t documents = corpus_ ? corpus_->size() : 0;
  const bool stub_ready = config_.stub_enabled && documents > 0;
  json body = {{"documents", documents}, {"stub", stub_ready}};
  bool generator_ok = false;
  if (!config_.generator_endpoint.empty()) {
    // Any HTTP reply counts as reachable.
    generator_ok = http::get(config_.generator_endpoint, "/", config_.probe_timeout).status != 0;
    body["generator"] = generator_ok;
  } else {
    body["generator"] = nullptr;
  }
  body["status"] = (stub_ready || generator_ok) ? "ok" : "degraded";
  return {200, body};
}

bool Service::origin_allowed(const std::string& origin) const {
  if (origin.empty()) return false;
  for (const auto& o : config_.cors_origins) {
    if (o == "*" || o == origin) return true;
  }
  return false;
}

void Service::mount(httplib::Server& server) const {
  auto reply = [](httplib::Response& res, const HttpResult& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  server.Post("/api/ask", [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, ask(req.body));
  });
  server.Get("/api/approaches", [this, reply](const httplib::Request&, httplib::Response& res) {
    reply(res, approaches());
  });
  server.Get("/api/health", [this, reply](const httplib::Request&, httplib::Response& res) {
    reply(res, health());
  });
  server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
  });
  server.set_post_routing_handler([this](const httplib::Request& req, httplib::Response& res) {
    const std::string origin = req.get_header_value("Origin");
    if (!origin_allowed(origin)) return;
    res.set_header("Access-Control-Allow-Origin", origin);
    res.set_header("Vary", "Origin");
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
  });
}

bool Service::run() const {
  httplib::Server server;
  mount(server);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.request_timeout);
  server.set_read_timeout(secs.count() > 0 ? secs.count() : 1, 0);
  server.set_write_timeout(secs.count() > 0 ? secs.count() : 1, 0);
  std::cerr << "[service] listening on " << config_.host << ":" << config_.port << "\n";
  return server.listen(config_.host, config_.port);
}

}  // namespace covidbot::service
