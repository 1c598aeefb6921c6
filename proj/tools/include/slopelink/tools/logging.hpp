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

#include <optional>
#include <string_view>

namespace slopelink::tools {

enum class LogLevel { kError, kInfo, kDebug };

std::optional<LogLevel> parse_log_level(std::string_view text);

/// Reads SLOPELINK_LOG_LEVEL (error, info, debug; default info) and points
/// the default logger at stderr.
void configure_logging();

}  // namespace slopelink::tools
