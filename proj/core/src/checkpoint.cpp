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

#include "adap/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "adap/config.hpp"

namespace adap {

namespace {

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

[[noreturn]] void Corrupt(const std::string& what) {
  throw Error(ErrorCode::kCorruptCheckpoint, what);
}

void AppendU64(std::string& out, std::uint64_t v) {
  char buf[8];
  std::memcpy(buf, &v, 8);
  out.append(buf, 8);
}

void AppendVector(std::string& out, const Eigen::VectorXd& v) {
  out.append(reinterpret_cast<const char*>(v.data()),
             sizeof(double) * static_cast<std::size_t>(v.size()));
}

nlohmann::json NormalizerToJson(const RangeNormalizer& n) {
  return {{"min", VectorToJson(n.min())},
          {"max", VectorToJson(n.max())},
          {"range_floor", n.range_floor()}};
}

RangeNormalizer NormalizerFromJson(const nlohmann::json& j) {
  return RangeNormalizer(VectorFromJson(j.at("min")),
                         VectorFromJson(j.at("max")),
                         j.at("range_floor").get<double>());
}

}  // namespace

std::string EncodeCheckpoint(const DiffusionPlanner& planner) {
  if (!planner.trained()) {
    throw Error(ErrorCode::kNotTrained, "cannot save an untrained planner");
  }
  ExperimentConfig snapshot;
  snapshot.train = planner.config();
  snapshot.seed = planner.config().seed;
  snapshot.horizon = planner.shape().horizon;
  const DenoiserShape ds = planner.denoiser().shape();
  const nlohmann::json header = {
      {"format", 1},
      {"plan", {{"horizon", planner.shape().horizon},
                {"joints", planner.shape().joints},
                {"dt", planner.shape().dt}}},
      {"denoiser", {{"plan_dim", ds.plan_dim},
                    {"cond_dim", ds.cond_dim},
                    {"time_embed_dim", ds.time_embed_dim},
                    {"cond_embed_dim", ds.cond_embed_dim},
                    {"hidden", ds.hidden}}},
      {"schedule", {{"kind", std::string(ToString(planner.config().beta_schedule))},
                    {"timesteps", planner.config().timesteps}}},
      {"limits", {{"lower", VectorToJson(planner.limits().lower)},
                  {"upper", VectorToJson(planner.limits().upper)}}},
      {"plan_normalizer", NormalizerToJson(planner.plan_normalizer())},
      {"condition_normalizer", NormalizerToJson(planner.condition_normalizer())},
      {"seed", planner.config().seed},
      {"train", ConfigToJson(snapshot).at("train")},
      {"config_hash", ConfigHash(planner.config())},
      {"payload", {{"vectors", 2},
                   {"count", planner.ema_params().size()}}},
  };
  const std::string text = header.dump();
  std::string out(kCheckpointMagic, 5);
  AppendU64(out, text.size());
  out += text;
  AppendVector(out, planner.denoiser().params());
  AppendVector(out, planner.ema_params());
  return out;
}

DiffusionPlanner DecodeCheckpoint(const std::string& bytes,
                                  const CheckpointLoadOptions& options) {
  if (bytes.size() < 13 || bytes.compare(0, 5, kCheckpointMagic, 5) != 0) {
    Corrupt("bad magic");
  }
  std::uint64_t header_len = 0;
  std::memcpy(&header_len, bytes.data() + 5, 8);
  if (header_len > bytes.size() - 13) Corrupt("truncated header");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.substr(13, header_len));
  } catch (const nlohmann::json::exception& e) {
    Corrupt(std::string("header: ") + e.what());
  }
  try {
    const std::uint64_t stored_hash = header.at("config_hash").get<std::uint64_t>();
    if (options.expected_hash && *options.expected_hash != stored_hash) {
      const std::string msg = "checkpoint was trained with config hash " +
                              std::to_string(stored_hash) + ", expected " +
                              std::to_string(*options.expected_hash);
      if (!options.force) throw Error(ErrorCode::kConfigMismatch, msg);
      if (options.warn) options.warn(msg);
    }
    const auto count = header.at("payload").at("count").get<std::int64_t>();
    const std::size_t payload = 2 * sizeof(double) * static_cast<std::size_t>(count);
    const std::size_t begin = 13 + header_len;
    if (count <= 0 || bytes.size() - begin != payload) {
      Corrupt("payload has " + std::to_string(bytes.size() - begin) +
              " bytes, header declares " + std::to_string(payload));
    }
    Eigen::VectorXd train(count), ema(count);
    std::memcpy(train.data(), bytes.data() + begin, payload / 2);
    std::memcpy(ema.data(), bytes.data() + begin + payload / 2, payload / 2);

    const auto& plan = header.at("plan");
    const PlanShape shape{plan.at("horizon").get<int>(),
                          plan.at("joints").get<int>(),
                          plan.at("dt").get<double>()};
    TrainConfig tc = ParseTrainConfig(
        header.at("train"), header.at("seed").get<std::uint64_t>(), shape.horizon);
    if (ConfigHash(tc) != stored_hash) Corrupt("header config hash does not match its config");
    JointLimits limits{VectorFromJson(header.at("limits").at("lower")),
                       VectorFromJson(header.at("limits").at("upper"))};
    return DiffusionPlanner::FromParts(
        shape, std::move(limits), tc,
        NormalizerFromJson(header.at("plan_normalizer")),
        NormalizerFromJson(header.at("condition_normalizer")), std::move(train),
        std::move(ema));
  } catch (const nlohmann::json::exception& e) {
    Corrupt(std::string("header: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kSchemaError || e.code() == ErrorCode::kParseError) {
      Corrupt(e.what());
    }
    throw;
  }
}

void SaveCheckpoint(const DiffusionPlanner& planner, const std::string& path) {
  const std::string bytes = EncodeCheckpoint(planner);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "short write to " + path);
}

DiffusionPlanner LoadCheckpoint(const std::string& path,
                                const CheckpointLoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return DecodeCheckpoint(buf.str(), options);
}

}  // namespace adap
