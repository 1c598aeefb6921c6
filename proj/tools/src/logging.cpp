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

#include "slopelink/tools/logging.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>

namespace slopelink::tools {

std::optional<LogLevel> parse_log_level(std::string_view text) {
  if (text == "error") return LogLevel::kError;
  if (text == "info") return LogLevel::kInfo;
  if (text == "debug") return LogLevel::kDebug;
  return std::nullopt;
}

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("slopelink");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("%Y-%m-%dT%H:%M:%S.%e %^%l%$ %v");

  LogLevel level = LogLevel::kInfo;
  const char* env = std::getenv("SLOPELINK_LOG_LEVEL");
  if (env != nullptr && *env != '\0') {
    if (auto parsed = parse_log_level(env)) {
      level = *parsed;
    } else {
      spdlog::warn("ignoring SLOPELINK_LOG_LEVEL='{}' (expected error, info or debug)", env);
    }
  }
  switch (level) {
    case LogLevel::kError: spdlog::set_level(spdlog::level::err); break;
    case LogLevel::kInfo: spdlog::set_level(spdlog::level::info); break;
    case LogLevel::kDebug: spdlog::set_level(spdlog::level::debug); break;
  }
}

}  // namespace slopelink::tools
