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

// Minimal blocking HTTP POST used to reach external text endpoints.

#ifndef IRPS_HTTP_CLIENT_H_
#define IRPS_HTTP_CLIENT_H_

#include <string>
#include <utility>
#include <vector>

namespace irps {

struct ParsedUrl {
  std::string scheme;  // "http" or "https"
  std::string host;
  int port = 0;
  std::string path;  // starts with '/'
};

// Throws Error for anything but http(s)://host[:port][/path].
ParsedUrl ParseUrl(const std::string& url);

struct HttpResponse {
  int status = 0;
  std::string body;
};

using HttpHeaders = std::vector<std::pair<std::string, std::string>>;

// Throws Error when the connection fails or times out; HTTP error statuses
// are returned, not thrown.
HttpResponse HttpPost(const std::string& url, const std::string& body,
                      const HttpHeaders& headers, double timeout_seconds,
                      const std::string& content_type = "application/json");

// Bearer header from the named environment variable; empty when the name is
// empty. Throws Error when the variable is named but unset.
HttpHeaders BearerFromEnv(const std::string& env_var);

}  // namespace irps

#endif  // IRPS_HTTP_CLIENT_H_
