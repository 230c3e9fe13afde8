// Copyright 2026 The driveadapt Authors
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

#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "service/session_engine.hpp"

namespace driveadapt::service {

struct ServerOptions {
  std::string address = "127.0.0.1";
  unsigned short port = 8765;  // 0 picks a free port
  double time_scale = 1.0;     // simulated seconds per wall second
  SessionSpec session;
  // Written as session.json and ticks.jsonl when the session finishes or
  // the server stops.
  std::optional<std::filesystem::path> record_dir;
  bool handle_signals = false;  // stop on SIGINT/SIGTERM
};

// WebSocket endpoint for one interactive session. Every connection receives
// a hello message followed by state frames; the first connection may send
// commands, later ones are read-only. All I/O and simulation run on the
// thread that calls run(); destroy the server only after run() returns.
class Server {
 public:
  explicit Server(const ServerOptions& opts);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  unsigned short port() const;
  void run();
  // Safe to call from any thread.
  void stop();

  struct Impl;

 private:
  std::shared_ptr<Impl> impl_;
};

}  // namespace driveadapt::service
