// Copyright 2026 The litkg Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LITKG_HTTP_TRANSPORT_HPP
#define LITKG_HTTP_TRANSPORT_HPP

// Live Transport backed by cpp-httplib. Define CPPHTTPLIB_OPENSSL_SUPPORT
// (and link OpenSSL) before including this header to reach https URLs.

#include <chrono>
#include <string>

#include <httplib.h>

#include "litkg/corpus_fetch.hpp"

namespace litkg {

class HttpTransport final : public Transport {
 public:
  explicit HttpTransport(std::chrono::seconds timeout = std::chrono::seconds(30)) : timeout_(timeout) {}

  HttpResponse get(const std::string& url) override {
    HttpResponse out;
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
      out.error = "not an absolute URL: " + url;
      return out;
    }
    const auto path_start = url.find('/', scheme_end + 3);
    const std::string origin = url.substr(0, path_start);
    const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);
    try {
      httplib::Client client(origin);
      client.set_connection_timeout(timeout_);
      client.set_read_timeout(timeout_);
      client.set_follow_location(true);
      auto res = client.Get(path, {{"User-Agent", "litkg/" + std::string(kToolVersion)}});
      if (!res) {
        out.error = httplib::to_string(res.error());
        return out;
      }
      out.status = res->status;
      out.body = std::move(res->body);
      if (res->has_header("Retry-After")) {
        try {
          out.retry_after_seconds = std::stod(res->get_header_value("Retry-After"));
        } catch (const std::exception&) {
        }
      }
    } catch (const std::exception& e) {
      out.status = 0;
      out.error = e.what();
    }
    return out;
  }

 private:
  std::chrono::seconds timeout_;
};

}  // namespace litkg

#endif  // LITKG_HTTP_TRANSPORT_HPP
