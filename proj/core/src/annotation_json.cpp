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

#include "slopelink/annotation_json.hpp"

#include <fstream>

namespace slopelink {
namespace {

using nlohmann::json;

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw AnnotationFormatError(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

double number(const json& j, const char* what) {
  if (!j.is_number()) throw AnnotationFormatError(std::string(what) + " must be a number");
  return j.get<double>();
}

std::int64_t integer(const json& j, const char* what) {
  if (!j.is_number_integer()) {
    throw AnnotationFormatError(std::string(what) + " must be an integer");
  }
  return j.get<std::int64_t>();
}

std::string text(const json& j, const char* what) {
  if (!j.is_string()) throw AnnotationFormatError(std::string(what) + " must be a string");
  return j.get<std::string>();
}

Geometry geometry_from_json(const json& j) {
  if (!j.is_object()) throw AnnotationFormatError("geometry must be an object");
  if (j.contains("point")) {
    const json& p = j.at("point");
    HazardPoint hp;
    hp.x = number(require(p, "x"), "point.x");
    hp.y = number(require(p, "y"), "point.y");
    if (p.contains("radius")) hp.radius = number(p.at("radius"), "point.radius");
    return hp;
  }
  if (j.contains("polygon")) {
    const json& ring = j.at("polygon");
    if (!ring.is_array()) throw AnnotationFormatError("polygon must be an array");
    Polygon poly;
    poly.reserve(ring.size());
    for (const json& v : ring) {
      if (!v.is_array() || v.size() != 2) {
        throw AnnotationFormatError("polygon vertices must be [x, y] pairs");
      }
      poly.push_back({number(v[0], "vertex x"), number(v[1], "vertex y")});
    }
    return poly;
  }
  throw AnnotationFormatError("geometry needs 'point' or 'polygon'");
}

}  // namespace

json annotation_to_json(const Annotation& a) {
  json geometry;
  if (const auto* hp = a.point()) {
    geometry["point"] = {{"x", hp->x}, {"y", hp->y}, {"radius", hp->radius}};
  } else {
    json ring = json::array();
    for (const Vec2& v : *a.polygon()) ring.push_back({v.x, v.y});
    geometry["polygon"] = std::move(ring);
  }
  json j = {
      {"id", a.id},
      {"kind", std::string(to_string(a.kind))},
      {"geometry", std::move(geometry)},
      {"label", a.label},
      {"revision", a.revision},
      {"author_id", a.author_id},
      {"created_at", a.created_at},
      {"deleted", a.deleted},
  };
  if (a.speed_limit) j["speed_limit"] = *a.speed_limit;
  return j;
}

Annotation annotation_from_json(const json& j) {
  if (!j.is_object()) throw AnnotationFormatError("annotation must be an object");
  Annotation a;
  a.id = text(require(j, "id"), "id");
  const auto kind = parse_annotation_kind(text(require(j, "kind"), "kind"));
  if (!kind) throw AnnotationFormatError("unknown kind for '" + a.id + "'");
  a.kind = *kind;
  a.geometry = geometry_from_json(require(j, "geometry"));
  a.revision = integer(require(j, "revision"), "revision");
  a.author_id = text(require(j, "author_id"), "author_id");
  if (j.contains("label")) a.label = text(j.at("label"), "label");
  if (j.contains("created_at")) a.created_at = integer(j.at("created_at"), "created_at");
  if (j.contains("deleted")) {
    if (!j.at("deleted").is_boolean()) throw AnnotationFormatError("deleted must be a boolean");
    a.deleted = j.at("deleted").get<bool>();
  }
  if (j.contains("speed_limit") && !j.at("speed_limit").is_null()) {
    a.speed_limit = number(j.at("speed_limit"), "speed_limit");
  }
  return a;
}

json store_to_json(const AnnotationStore& store) {
  json list = json::array();
  for (const auto& [id, a] : store.entries()) list.push_back(annotation_to_json(a));
  return {{"version", kAnnotationFileVersion}, {"annotations", std::move(list)}};
}

AnnotationStore store_from_json(const json& j) {
  if (!j.is_object()) throw AnnotationFormatError("annotation set must be an object");
  if (integer(require(j, "version"), "version") != kAnnotationFileVersion) {
    throw AnnotationFormatError("unsupported annotation set version");
  }
  const json& list = require(j, "annotations");
  if (!list.is_array()) throw AnnotationFormatError("annotations must be an array");
  AnnotationStore store;
  for (const json& item : list) {
    Annotation a = annotation_from_json(item);
    if (store.find(a.id)) throw AnnotationFormatError("duplicate annotation id '" + a.id + "'");
    store.merge(a);
  }
  return store;
}

AnnotationStore load_annotation_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open annotation file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw AnnotationFormatError(path.string() + ": " + e.what());
  }
  return store_from_json(j);
}

void save_annotation_file(const std::filesystem::path& path, const AnnotationStore& store) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write annotation file " + path.string());
  out << store_to_json(store).dump(2) << '\n';
}

}  // namespace slopelink
