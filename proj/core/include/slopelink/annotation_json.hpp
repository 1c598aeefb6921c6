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

#include <filesystem>
#include <iosfwd>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "slopelink/annotation.hpp"

namespace slopelink {

/// The annotation set document does not match the expected schema.
class AnnotationFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kAnnotationFileVersion = 1;

nlohmann::json annotation_to_json(const Annotation& a);

/// Throws AnnotationFormatError on missing or mistyped fields. Structural
/// only: geometric validity is validate_annotation's job.
Annotation annotation_from_json(const nlohmann::json& j);

/// {"version": 1, "annotations": [...]}, tombstones included.
nlohmann::json store_to_json(const AnnotationStore& store);
AnnotationStore store_from_json(const nlohmann::json& j);

AnnotationStore load_annotation_file(const std::filesystem::path& path);
void save_annotation_file(const std::filesystem::path& path, const AnnotationStore& store);

}  // namespace slopelink
