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

#ifndef ADAP_CHECKPOINT_HPP_
#define ADAP_CHECKPOINT_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "adap/planner.hpp"

namespace adap {

// Layout: "ADAP1", u64 little-endian header length, JSON header, then the
// training and EMA parameter vectors as little-endian float64.
inline constexpr char kCheckpointMagic[] = "ADAP1";

struct CheckpointLoadOptions {
  // Training-config hash the caller expects; a mismatch is kConfigMismatch
  // unless `force` is set, in which case `warn` is called and loading goes on.
  std::optional<std::uint64_t> expected_hash;
  bool force = false;
  std::function<void(const std::string&)> warn;
};

std::string EncodeCheckpoint(const DiffusionPlanner& planner);
DiffusionPlanner DecodeCheckpoint(const std::string& bytes,
                                  const CheckpointLoadOptions& options = {});

void SaveCheckpoint(const DiffusionPlanner& planner, const std::string& path);
DiffusionPlanner LoadCheckpoint(const std::string& path,
                                const CheckpointLoadOptions& options = {});

}  // namespace adap

#endif  // ADAP_CHECKPOINT_HPP_
