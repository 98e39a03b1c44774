// Copyright 2026 The IRPS Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "irps/http_client.h"

#include <cmath>
#include <cstdlib>

#include "httplib.h"
#include "irps/error.h"

namespace irps {

ParsedUrl ParseUrl(const std::string& url) {
  ParsedUrl u;
  const auto sep = url.find("://");
  if (sep == std::string::npos) throw Error("URL without scheme: " + url);
  u.scheme = url.substr(0, sep);
  if (u.scheme != "http" && u.scheme != "https") throw Error("unsupported scheme in " + url);
  std::string rest = url.substr(sep + 3);
  const auto slash = rest.find('/');
  u.path = slash == std::string::npos ? "/" : rest.substr(slash);
  std::string hostport = rest.substr(0, slash);
  u.port = u.scheme == "https" ? 443 : 80;
  const auto colon = hostport.rfind(':');
  if (colon != std::string::npos && hostport.find(']') == std::string::npos) {
    try {
      u.port = std::stoi(hostport.substr(colon + 1));
    } catch (const std::exception&) {
      throw Error("bad port in " + url);
    }
    hostport = hostport.substr(0, colon);
  }
  if (hostport.empty()) throw Error("URL without host: " + url);
  u.host = hostport;
  return u;
}

HttpResponse HttpPost(const std::string& url, const std::string& body,
                      const HttpHeaders& headers, double timeout_seconds,
                      const std::string& content_type) {
  const ParsedUrl u = ParseUrl(url);
  httplib::Headers h;
  for (const auto& [k, v] : headers) h.emplace(k, v);
  const auto sec = static_cast<time_t>(std::floor(timeout_seconds));
  const auto usec = static_cast<time_t>((timeout_seconds - std::floor(timeout_seconds)) * 1e6);
  auto run = [&](auto& client) {
    client.set_connection_timeout(sec, usec);
    client.set_read_timeout(sec, usec);
    client.set_write_timeout(sec, usec);
    auto res = client.Post(u.path, h, body, content_type);
    if (!res) {
      throw Error("request to " + u.host + " failed: " + httplib::to_string(res.error()));
    }
    return HttpResponse{res->status, res->body};
  };
  if (u.scheme == "https") {
#ifdef CPPHTTPLIB_OPENSSL_SUPPORT
    httplib::SSLClient client(u.host, u.port);
    return run(client);
#else
    throw Error("https is not available in this build");
#endif
  }
  httplib::Client client(u.host, u.port);
  return run(client);
}

HttpHeaders BearerFromEnv(const std::string& env_var) {
  if (env_var.empty()) return {};
  const char* value = std::getenv(env_var.c_str());
  if (value == nullptr || *value == '\0') {
    throw Error("environment variable " + env_var + " is not set");
  }
  return {{"Authorization", std::string("Bearer ") + value}};
}

}  // namespace irps
