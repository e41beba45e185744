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

#ifndef ADAP_INTERACTIVE_HPP_
#define ADAP_INTERACTIVE_HPP_

#include <iosfwd>
#include <string>

#include "adap/perception.hpp"

namespace adap {

// Prompts on `out` for a signed per-axis estimate in centimeters ("dx dy"),
// re-prompting on unparseable input, and returns the grid-snapped error in
// meters. "q" or end of input throws Error{kAborted}.
ErrorVector InteractivePerceive(std::istream& in, std::ostream& out,
                                const std::string& context,
                                const PerceptionGrid& grid = {});

}  // namespace adap

#endif  // ADAP_INTERACTIVE_HPP_
