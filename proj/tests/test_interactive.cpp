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


#include <sstream>

#include "adap/error.hpp"
#include "adap/interactive.hpp"
#include "doctest.h"

using namespace adap;

namespace {

ErrorVector Ask(const std::string& input, std::string* transcript = nullptr) {
  std::istringstream in(input);
  std::ostringstream out;
  const ErrorVector e = InteractivePerceive(in, out, "goal 1");
  if (transcript) *transcript = out.str();
  return e;
}

}  // namespace

TEST_CASE("centimeter input converts to meters") {
  const ErrorVector e = Ask("1 -3\n");
  CHECK(e.x() == doctest::Approx(0.01));
  CHECK(e.y() == doctest::Approx(-0.03));
}

TEST_CASE("input snaps to the perception grid") {
  const ErrorVector e = Ask("0.7 17\n");
  CHECK(e.x() == doctest::Approx(0.01));
  CHECK(e.y() == doctest::Approx(0.15));
}

TEST_CASE("garbage is re-prompted") {
  std::string transcript;
  const ErrorVector e = Ask("left a bit\n5\n  -10   20 \n", &transcript);
  CHECK(e.x() == doctest::Approx(-0.10));
  CHECK(e.y() == doctest::Approx(0.20));
  CHECK(transcript.find("goal 1") != std::string::npos);
}

TEST_CASE("q and end of input abort") {
  for (const char* input : {"q\n", "", "x\n"}) {
    try {
      Ask(input);
      FAIL("expected Aborted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kAborted);
    }
  }
}
