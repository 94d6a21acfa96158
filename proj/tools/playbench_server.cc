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

// playbench-server: serves the /v1 API.
//
// Environment: PLAYBENCH_BIND (host:port) and PLAYBENCH_DATA (store
// directory) provide defaults for --bind and --store.

#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "playbench/service/http_server.h"
#include "playbench/service/service.h"
#include "playbench/sim/config.h"

#ifndef PLAYBENCH_ASSETS_DIR
#define PLAYBENCH_ASSETS_DIR "assets"
#endif

namespace {

std::string EnvOr(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v != nullptr && *v != '\0' ? std::string(v) : fallback;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace playbench;
  CLI::App app{"playbench-server: /v1 arena API"};
  std::string config = std::string(PLAYBENCH_ASSETS_DIR) + "/config.json";
  std::string store_dir = EnvOr("PLAYBENCH_DATA", "playbench-data");
  std::string bind = EnvOr("PLAYBENCH_BIND", "127.0.0.1:8080");
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config, "platform config file");
  app.add_option("--store", store_dir, "session store directory");
  app.add_option("--bind", bind, "host:port");
  app.add_option("--seed", seed, "seed for pairing and word draws");
  CLI11_PARSE(app, argc, argv);

  std::size_t colon = bind.rfind(':');
  if (colon == std::string::npos) {
    std::cerr << "playbench-server: --bind needs host:port\n";
    return 1;
  }
  std::string host = bind.substr(0, colon);
  int port = 0;
  try {
    port = std::stoi(bind.substr(colon + 1));
  } catch (const std::exception&) {
    std::cerr << "playbench-server: bad port in " << bind << "\n";
    return 1;
  }

  try {
    sim::Platform platform =
        sim::Platform::Load(sim::PlatformConfig::FromFile(config));
    auto gateway = sim::BuildGateway(platform);
    store::SessionStore store(store_dir);
    service::ServiceOptions options;
    options.blind_play = platform.config.blind_play;
    options.expiry_hours = platform.config.session_expiry_hours;
    options.seed = seed;
    service::ArenaService arena(platform, gateway, store, options);
    service::HttpServer server(arena);
    int bound = server.Bind(host, port);
    if (bound < 0) {
      std::cerr << "playbench-server: cannot bind " << bind << "\n";
      return 2;
    }
    std::cerr << "playbench-server: listening on " << host << ":" << bound
              << "\n";
    return server.Serve() ? 0 : 2;
  } catch (const sim::AssetIoError& e) {
    std::cerr << "playbench-server: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "playbench-server: " << e.what() << "\n";
    return 1;
  }
}
