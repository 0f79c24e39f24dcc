#include "covidbot/http_util.hpp"

#include "httplib.h"

namespace covidbot::http {
namespace {

struct Target {
  std::string origin;  // scheme://host:port
  std::string prefix;  // path prefix without trailing slash
};

Target split_url(const std::string& base_url) {
  std::string url = base_url;
  if (url.find("://") == std::string::npos) url = "http://" + url;
  const auto host_start = url.find("://") + 3;
  const auto slash = url.find('/', host_start);
  Target t;
  t.origin = url.substr(0, slash);
  if (slash != std::string::npos) t.prefix = url.substr(slash);
  while (!t.prefix.empty() && t.prefix.back() == '/') t.prefix.pop_back();
  return t;
}

template <typename Fn>
Reply send(const std::string& base_url, std::chrono::milliseconds timeout, Fn&& fn) {
  const Target target = split_url(base_url);
  httplib::Client client(target.origin);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  auto result = fn(client, target.prefix);
  Reply reply;
  if (!result) {
    reply.transport_error = httplib::to_string(result.error());
    return reply;
  }
  reply.status = result->status;
  reply.body = result->body;
  return reply;
}

}  // namespace

Reply post_json(const std::string& base_url, const std::string& path,
                const std::string& body, std::chrono::milliseconds timeout) {
  return send(base_url, timeout, [&](httplib::Client& c, const std::string& prefix) {
    return c.Post(prefix + path, body, "application/json");
  });
}

Reply get(const std::string& base_url, const std::string& path,
          std::chrono::milliseconds timeout) {
  return send(base_url, timeout, [&](httplib::Client& c, const std::string& prefix) {
    return c.Get(prefix + path);
  });
}

}  // namespace covidbot::http
