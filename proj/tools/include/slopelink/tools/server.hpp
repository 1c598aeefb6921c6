// Copyright 2026 The SlopeLink Authors.
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

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>

#include <boost/asio/io_context.hpp>

#include "slopelink/annotation.hpp"
#include "slopelink/terrain.hpp"

namespace slopelink::tools {

struct ServerOptions {
  std::string terrain_text;  // served verbatim at /terrain.asc and hashed
  AnnotationStore initial;
  std::filesystem::path log_path;
  std::string address = "0.0.0.0";
  std::uint16_t port = 0;  // 0 picks a free port
  std::chrono::milliseconds idle_timeout{15'000};
};

/// WebSocket front end for one Session. Clients speak the envelope protocol
/// on /ws; GET /terrain.asc returns the terrain file. Everything runs on the
/// io_context's thread, which must be a single thread.
///
/// Construction replays an existing event log (throws CorruptLog) and binds
/// the listening socket (throws boost::system::system_error).
class Server {
 public:
  Server(boost::asio::io_context& ioc, ServerOptions options);
  ~Server();

  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  std::uint16_t port() const;
  /// Number of log entries recovered at startup.
  std::size_t replayed() const;

  void start();
  /// Stops accepting and closes every connection.
  void stop();

  struct Impl;

 private:
  std::shared_ptr<Impl> impl_;
};

}  // namespace slopelink::tools
