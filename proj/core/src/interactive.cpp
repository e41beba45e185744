// Copyright 2026 The ADAP Authors
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

#include "adap/interactive.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace adap {

ErrorVector InteractivePerceive(std::istream& in, std::ostream& out,
                                const std::string& context,
                                const PerceptionGrid& grid) {
  if (!context.empty()) out << context << '\n';
  std::string line;
  for (;;) {
    out << "error estimate in cm (dx dy, q to abort)> " << std::flush;
    if (!std::getline(in, line)) {
      throw Error(ErrorCode::kAborted, "input closed");
    }
    std::istringstream fields(line);
    std::string first;
    if (fields >> first && (first == "q" || first == "Q") &&
        !(fields >> first)) {
      throw Error(ErrorCode::kAborted, "aborted by user");
    }
    fields.clear();
    fields.str(line);
    double dx = 0.0, dy = 0.0;
    std::string rest;
    if (fields >> dx >> dy && !(fields >> rest) && std::isfinite(dx) &&
        std::isfinite(dy)) {
      return {grid.Snap(dx / 100.0), grid.Snap(dy / 100.0)};
    }
    out << "expected two numbers, e.g. \"1 -3\"\n";
  }
}

}  // namespace adap
