// Copyright 2026 The Playbench Authors
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

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include "playbench/gateway/http_client.h"

namespace playbench::gateway {

Transport HttplibTransport() {
  return [](const HttpRequest& request) {
    HttpResponse response;
    try {
      httplib::Client client(request.base_url);
      auto seconds = static_cast<time_t>(request.timeout_seconds);
      auto usec = static_cast<time_t>(
          (request.timeout_seconds - static_cast<double>(seconds)) * 1e6);
      client.set_connection_timeout(seconds, usec);
      client.set_read_timeout(seconds, usec);
      client.set_write_timeout(seconds, usec);
      httplib::Headers headers;
      std::string content_type = "application/json";
      for (const auto& [name, value] : request.headers) {
        if (name == "Content-Type") {
          content_type = value;
        } else {
          headers.emplace(name, value);
        }
      }
      auto result = client.Post(request.path, headers, request.body,
                                content_type);
      if (!result) {
        response.error = httplib::to_string(result.error());
        return response;
      }
      response.status = result->status;
      response.body = result->body;
    } catch (const std::exception& e) {
      response.error = e.what();
    }
    return response;
  };
}

}  // namespace playbench::gateway
