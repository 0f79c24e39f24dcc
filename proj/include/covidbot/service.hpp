#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "covidbot/corpus.hpp"
#include "covidbot/embed.hpp"
#include "covidbot/pipeline.hpp"
#include "covidbot/rank.hpp"
#include "json.hpp"

namespace httplib {
class Server;
}

namespace covidbot::service {

inline constexpr std::string_view kDisclaimer =
    "Generated health information is for general research purposes only. It is "
    "not a diagnostic tool and not a substitute for professional medical advice.";

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string corpus_path;
  bool stub_enabled = true;
  std::string generator_endpoint;
  std::map<embed::ApproachKind, std::string> providers;

  embed::ApproachKind default_approach = embed::ApproachKind::kTfidf;
  rank::Metric default_metric = rank::Metric::kCosine;
  std::size_t top_k = 5;
  bool dedup = false;
  int max_length = 512;
  double temperature = 0.7;
  std::string prompt_template;

  std::chrono::milliseconds request_timeout{30000};
  std::chrono::milliseconds probe_timeout{2000};
  std::vector<std::string> cors_origins;  // "*" allows any origin

  // At least one of a generator endpoint or a stub-enabled corpus path.
  void validate() const;
};

using EnvLookup = std::function<std::optional<std::string>(std::string_view)>;
EnvLookup process_env();

// Built-in defaults, overridden by the JSON config file (if given), overridden
// by COVIDBOT_* environment variables.
ServiceConfig load_service_config(const std::optional<std::filesystem::path>& config_file,
                                  const EnvLookup& env = process_env());
ServiceConfig parse_service_config(std::string_view json_text, ServiceConfig base = {});
void apply_env(ServiceConfig& config, const EnvLookup& env);

// Effective values, one "key = value" per line.
std::string describe(const ServiceConfig& config);

struct HttpResult {
  int status = 200;
  nlohmann::json body;
};

class Service {
 public:
  Service(ServiceConfig config, std::optional<corpus::Corpus> corpus);

  // POST /api/ask
  HttpResult ask(std::string_view request_body) const;
  // GET /api/approaches
  HttpResult approaches() const;
  // GET /api/health
  HttpResult health() const;

  // Registers the /api routes and CORS handling on `server`.
  void mount(httplib::Server& server) const;
  // Blocks serving on config.host:config.port. Returns false if binding fails.
  bool run() const;

  const ServiceConfig& config() const noexcept { return config_; }
  const corpus::Corpus* corpus() const noexcept { return corpus_ ? &*corpus_ : nullptr; }

 private:
  bool origin_allowed(const std::string& origin) const;

  ServiceConfig config_;
  std::optional<corpus::Corpus> corpus_;
};

}  // namespace covidbot::service
