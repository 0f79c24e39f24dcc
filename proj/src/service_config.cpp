#include <cstdlib>
#include <fstream>
#include <sstream>

#include "covidbot/error.hpp"
#include "covidbot/service.hpp"
#include "covidbot/text_util.hpp"

namespace covidbot::service {
using nlohmann::json;

namespace {

const std::pair<embed::ApproachKind, const char*> kProviderEnv[] = {
    {embed::ApproachKind::kBert, "COVIDBOT_BERT_URL"},
    {embed::ApproachKind::kBiobert, "COVIDBOT_BIOBERT_URL"},
    {embed::ApproachKind::kUse, "COVIDBOT_USE_URL"},
};

bool parse_bool(std::string_view v) {
  const std::string s = text::lower(text::trim(v));
  return s == "1" || s == "true" || s == "yes" || s == "on";
}

std::vector<std::string> split_list(std::string_view v) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= v.size()) {
    auto pos = v.find(',', start);
    if (pos == std::string_view::npos) pos = v.size();
    auto item = text::trim(v.substr(start, pos - start));
    if (!item.empty()) out.emplace_back(item);
    start = pos + 1;
  }
  return out;
}

int parse_int_value(std::string_view key, std::string_view v) {
  try {
    std::size_t used = 0;
    const std::string s(v);
    const int n = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing");
    return n;
  } catch (const std::exception&) {
    throw Error(Errc::kInvalidArgument, std::string(key) + " must be an integer");
  }
}

}  // namespace

void ServiceConfig::validate() const {
  if (generator_endpoint.empty() && !(stub_enabled && !corpus_path.empty())) {
    throw Error(Errc::kInvalidArgument,
                "configure a generator endpoint or a corpus with the stub generator enabled");
  }
  if (top_k == 0) throw Error(Errc::kInvalidArgument, "top_k must be at least 1");
  if (port < 0 || port > 65535) throw Error(Errc::kInvalidArgument, "port out of range");
}

EnvLookup process_env() {
  return [](std::string_view name) -> std::optional<std::string> {
    const char* v = std::getenv(std::string(name).c_str());
    if (v == nullptr) return std::nullopt;
    return std::string(v);
  };
}

ServiceConfig parse_service_config(std::string_view json_text, ServiceConfig c) {
  const json j = json::parse(json_text.begin(), json_text.end(), nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(Errc::kParse, "service config must be a JSON object");
  }
  try {
    if (j.contains("host")) c.host = j["host"].get<std::string>();
    if (j.contains("port")) c.port = j["port"].get<int>();
    if (j.contains("corpus")) c.corpus_path = j["corpus"].get<std::string>();
    if (j.contains("stub")) c.stub_enabled = j["stub"].get<bool>();
    if (j.contains("generator_url")) c.generator_endpoint = j["generator_url"].get<std::string>();
    if (j.contains("timeout_ms")) c.request_timeout = std::chrono::milliseconds(j["timeout_ms"].get<int>());
    if (j.contains("cors_origins")) c.cors_origins = j["cors_origins"].get<std::vector<std::string>>();
    if (j.contains("providers")) {
      for (const auto& [name, url] : j["providers"].items()) {
        const auto kind = embed::parse_approach(name);
        if (!kind || *kind == embed::ApproachKind::kTfidf) {
          throw Error(Errc::kParse, "unknown provider approach '" + name + "'");
        }
        c.providers[*kind] = url.get<std::string>();
      }
    }
    if (j.contains("defaults")) {
      const json& d = j["defaults"];
      if (d.contains("approach")) {
        const auto kind = embed::parse_approach(d["approach"].get<std::string>());
        if (!kind) throw Error(Errc::kParse, "unknown default approach");
        c.default_approach = *kind;
      }
      if (d.contains("metric")) {
        const auto metric = rank::parse_metric(d["metric"].get<std::string>());
        if (!metric) throw Error(Errc::kParse, "unknown default metric");
        c.default_metric = *metric;
      }
      if (d.contains("top_k")) c.top_k = d["top_k"].get<std::size_t>();
      if (d.contains("dedup")) c.dedup = d["dedup"].get<bool>();
      if (d.contains("max_length")) c.max_length = d["max_length"].get<int>();
      if (d.contains("temperature")) c.temperature = d["temperature"].get<double>();
      if (d.contains("prompt_template")) c.prompt_template = d["prompt_template"].get<std::string>();
    }
  } catch (const json::exception& e) {
    throw Error(Errc::kParse, std::string("service config: ") + e.what());
  }
  return c;
}

void apply_env(ServiceConfig& c, const EnvLookup& env) {
  if (auto v = env("COVIDBOT_HOST")) c.host = *v;
  if (auto v = env("COVIDBOT_PORT")) c.port = parse_int_value("COVIDBOT_PORT", *v);
  if (auto v = env("COVIDBOT_CORPUS")) c.corpus_path = *v;
  if (auto v = env("COVIDBOT_STUB")) c.stub_enabled = parse_bool(*v);
  if (auto v = env("COVIDBOT_GENERATOR_URL")) c.generator_endpoint = *v;
  if (auto v = env("COVIDBOT_TIMEOUT_MS")) {
    c.request_timeout = std::chrono::milliseconds(parse_int_value("COVIDBOT_TIMEOUT_MS", *v));
  }
  if (auto v = env("COVIDBOT_CORS_ORIGINS")) c.cors_origins = split_list(*v);
  for (const auto& [kind, name] : kProviderEnv) {
    if (auto v = env(name)) {
      if (v->empty()) {
        c.providers.erase(kind);
      } else {
        c.providers[kind] = *v;
      }
    }
  }
}

ServiceConfig load_service_config(const std::optional<std::filesystem::path>& config_file,
                                  const EnvLookup& env) {
  ServiceConfig c;
  if (config_file) {
    std::ifstream in(*config_file, std::ios::binary);
    if (!in) throw Error(Errc::kIo, "cannot open config " + config_file->string());
    std::ostringstream ss;
    ss << in.rdbuf();
    c = parse_service_config(ss.str(), c);
  }
  apply_env(c, env);
  return c;
}

std::string describe(const ServiceConfig& c) {
  std::ostringstream out;
  out << "host = " << c.host << "\n"
      << "port = " << c.port << "\n"
      << "corpus = " << (c.corpus_path.empty() ? "(none)" : c.corpus_path) << "\n"
      << "stub_enabled = " << (c.stub_enabled ? "true" : "false") << "\n"
      << "generator_url = " << (c.generator_endpoint.empty() ? "(none)" : c.generator_endpoint)
      << "\n";
  for (auto kind : embed::kAllApproaches) {
    if (kind == embed::ApproachKind::kTfidf) continue;
    auto it = c.providers.find(kind);
    out << "provider." << embed::to_string(kind) << " = "
        << (it == c.providers.end() ? "(none)" : it->second) << "\n";
  }
  out << "default.approach = " << embed::to_string(c.default_approach) << "\n"
      << "default.metric = " << rank::to_string(c.default_metric) << "\n"
      << "default.top_k = " << c.top_k << "\n"
      << "default.dedup = " << (c.dedup ? "true" : "false") << "\n"
      << "default.max_length = " << c.max_length << "\n"
      << "default.temperature = " << c.temperature << "\n"
      << "timeout_ms = " << c.request_timeout.count() << "\n"
      << "cors_origins = " << text::join(c.cors_origins, ",") << "\n";
  return out.str();
}

}  // namespace covidbot::service
