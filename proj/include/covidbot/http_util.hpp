#pragma once

#include <chrono>
#include <string>

namespace covidbot::http {

struct Reply {
  int status = 0;  // 0 when no HTTP response was received
  std::string body;
  std::string transport_error;
};

// POSTs a JSON body to base_url + path. base_url is "http://host:port" with an
// optional path prefix.
Reply post_json(const std::string& base_url, const std::string& path,
                const std::string& body, std::chrono::milliseconds timeout);

Reply get(const std::string& base_url, const std::string& path,
          std::chrono::milliseconds timeout);

}  // namespace covidbot::http
