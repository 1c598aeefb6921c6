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

// Exhaustive delivery-order check for a guide and a skier sharing one
// session. The guide sends a HELLO and a script of up to four mutations; the
// skier sends HELLO, a forbidden upsert, and a POSE. Every interleaving that
// keeps each sender's own order is run and checked.

#include <bit>
#include <functional>
#include <string>
#include <vector>

#include "support/harness.hpp"
#include "support/scenes.hpp"

namespace slopelink::testing {

struct ConvergenceReport {
  std::size_t runs = 0;
  std::size_t diverged = 0;       // a mirror differed from the server store
  std::size_t skier_mutated = 0;  // the skier's upsert reached the store
  std::string first_failure;
};

inline ConvergenceReport exhaustive_convergence(std::shared_ptr<const TerrainGrid> grid,
                                                const std::string& hash, int max_script = 4) {
  using Make = std::function<Envelope(Client&)>;
  const Annotation a1 = hazard("a", 20, 20, 15, 1);
  Annotation a1_other = hazard("a", 80, 80, 15, 1);
  a1_other.label = "conflict";
  const Annotation a2 = hazard("a", 25, 20, 15, 2);
  const Annotation a3 = hazard("a", 25, 20, 15, 3);
  const Annotation b1 = zone("b", AnnotationKind::kSlowZone, rect(40, 40, 60, 60), 4.0);
  const Annotation b2 = zone("b", AnnotationKind::kSlowZone, rect(40, 40, 70, 60), 4.0, 2);
  const std::vector<Make> alphabet{
      [&](Client& c) { return c.upsert(a1); },  [&](Client& c) { return c.upsert(a2); },
      [&](Client& c) { return c.remove(a3); },  [&](Client& c) { return c.upsert(b1); },
      [&](Client& c) { return c.remove(b2); },  [&](Client& c) { return c.upsert(a1_other); },
  };
  Pose pose;
  pose.position = {50, 50, 1.7};

  ConvergenceReport report;
  std::vector<int> script;
  std::function<void()> each_script = [&] {
    const int k = static_cast<int>(script.size());
    const int n = k + 4;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      if (std::popcount(mask) != 3) continue;
      Network net(Session(grid, hash));
      Client guide{"g"}, skier{"s"};
      int gi = 0, si = 0;
      for (int slot = 0; slot < n; ++slot) {
        if (mask & (1u << slot)) {
          if (si == 0) net.send(skier, skier.hello(Role::kSkier, hash));
          if (si == 1) net.send(skier, skier.upsert(hazard("evil", 5, 5)));
          if (si == 2) net.send(skier, skier.pose(pose, 2.0, 100));
          ++si;
        } else if (gi++ == 0) {
          net.send(guide, guide.hello(Role::kGuide, hash));
        } else {
          net.send(guide, alphabet[static_cast<std::size_t>(script[gi - 2])](guide));
        }
      }
      const std::vector<Annotation> server = net.session().store().live();
      const bool ok = net.mirror("g").live() == server && net.mirror("s").live() == server;
      if (!ok && report.first_failure.empty()) {
        report.first_failure = "script size " + std::to_string(k) + ", mask " + std::to_string(mask);
      }
      report.diverged += !ok;
      report.skier_mutated += net.session().store().find("evil") != nullptr;
      ++report.runs;
    }
    if (k == max_script) return;
    for (int m = 0; m < static_cast<int>(alphabet.size()); ++m) {
      script.push_back(m);
      each_script();
      script.pop_back();
    }
  };
  each_script();
  return report;
}

}  // namespace slopelink::testing
