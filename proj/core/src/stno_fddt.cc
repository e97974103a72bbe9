// core/src/stno_fddt.cc

// Copyright 2026  heatkit authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "heat/stno_fddt.h"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>

#include <fmt/format.h>

#include "heat/errors.h"
#include "json.hpp"

namespace heat {

namespace {

constexpr double kRowSumTolerance = 1e-9;

void CheckUnit(double v, const char *what) {
  if (!(v >= 0.0 && v <= 1.0))
    throw InvalidArgument(fmt::format("{} value {} outside [0,1]", what, v));
}

}  // namespace

StnoMask::StnoMask(std::vector<StnoRow> rows) : rows_(std::move(rows)) {
  for (std::size_t t = 0; t < rows_.size(); ++t) {
    double sum = 0.0;
    for (double v : rows_[t]) {
      CheckUnit(v, "STNO");
      sum += v;
    }
    if (std::abs(sum - 1.0) > kRowSumTolerance)
      throw InvalidArgument(
          fmt::format("STNO row {} sums to {}, expected 1", t, sum));
  }
}

StnoMask Stno(std::span<const double> target,
              std::span<const std::span<const double>> others) {
  for (const auto &other : others)
    if (other.size() != target.size())
      throw InvalidArgument(fmt::format(
          "activity length mismatch: target {} frames, other {} frames",
          target.size(), other.size()));

  std::vector<StnoRow> rows(target.size());
  for (std::size_t t = 0; t < target.size(); ++t) {
    const double a = target[t];
    CheckUnit(a, "target activity");
    double quiet = 1.0;  // probability that no other talker is active
    for (const auto &other : others) {
      CheckUnit(other[t], "non-target activity");
      quiet *= 1.0 - other[t];
    }
    const double n = 1.0 - quiet;
    rows[t] = {(1.0 - a) * quiet, a * quiet, (1.0 - a) * n, a * n};
  }
  return StnoMask(std::move(rows));
}

std::pair<StnoMask, StnoMask> StnoForStreams(const ActivityMask &heat) {
  if (heat.num_speakers() != 2)
    throw InvalidArgument(fmt::format(
        "expected a two-stream mask, got {} rows", heat.num_speakers()));
  std::span<const double> s0 = heat.row(0), s1 = heat.row(1);
  return {Stno(s0, std::span(&s1, 1)), Stno(s1, std::span(&s0, 1))};
}

FddtParams FddtParams::Identity(Eigen::Index dim, int layer) {
  FddtParams p;
  for (std::size_t c = 0; c < kNumStnoClasses; ++c) {
    p.weights[c] = Eigen::MatrixXd::Identity(dim, dim);
    p.biases[c] = Eigen::VectorXd::Zero(dim);
  }
  p.layer = layer;
  return p;
}

void FddtParams::Validate() const {
  const Eigen::Index d = dim();
  for (std::size_t c = 0; c < kNumStnoClasses; ++c) {
    if (weights[c].rows() != d || weights[c].cols() != d)
      throw InvalidArgument(fmt::format(
          "FDDT weight {} is {}x{}, expected {}x{}", c, weights[c].rows(),
          weights[c].cols(), d, d));
    if (biases[c].size() != d)
      throw InvalidArgument(fmt::format("FDDT bias {} has size {}, expected {}",
                                        c, biases[c].size(), d));
  }
}

Eigen::MatrixXd FddtApply(const Eigen::MatrixXd &z, const StnoMask &mask,
                          const FddtParams &params) {
  params.Validate();
  if (z.rows() != params.dim())
    throw InvalidArgument(fmt::format("hidden size {} != FDDT dimension {}",
                                      z.rows(), params.dim()));
  if (static_cast<std::size_t>(z.cols()) != mask.num_frames())
    throw InvalidArgument(fmt::format("{} hidden frames but {} mask frames",
                                      z.cols(), mask.num_frames()));

  // Frame at a time, so a frame's output does not depend on the batch it
  // came in (a blocked product may round differently).
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(z.rows(), z.cols());
  Eigen::VectorXd transformed(z.rows());
  for (Eigen::Index t = 0; t < z.cols(); ++t) {
    const StnoRow &row = mask[static_cast<std::size_t>(t)];
    for (std::size_t c = 0; c < kNumStnoClasses; ++c) {
      transformed.noalias() = params.weights[c] * z.col(t);
      transformed += params.biases[c];
      out.col(t) += transformed * row[c];
    }
  }
  return out;
}

std::string WriteStnoJson(const StnoMask &mask) {
  nlohmann::ordered_json doc;
  doc["classes"] = {"S", "T", "N", "O"};
  doc["num_frames"] = mask.num_frames();
  nlohmann::ordered_json frames = nlohmann::ordered_json::array();
  for (const StnoRow &row : mask.rows())
    frames.push_back({row[0], row[1], row[2], row[3]});
  doc["frames"] = std::move(frames);
  return doc.dump() + "\n";
}

StnoMask ParseStnoJson(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
    const auto &frames = doc.at("frames");
    std::vector<StnoRow> rows;
    rows.reserve(frames.size());
    for (const auto &f : frames) {
      if (!f.is_array() || f.size() != kNumStnoClasses)
        throw ParseError("STNO frame must have four values");
      rows.push_back({f[0].get<double>(), f[1].get<double>(),
                      f[2].get<double>(), f[3].get<double>()});
    }
    if (doc.contains("num_frames") &&
        doc.at("num_frames").get<std::size_t>() != rows.size())
      throw ParseError("num_frames does not match frame count");
    return StnoMask(std::move(rows));
  } catch (const nlohmann::json::exception &e) {
    throw ParseError(std::string("invalid STNO JSON: ") + e.what());
  } catch (const InvalidArgument &e) {
    throw ParseError(e.what());
  }
}

namespace {

void PutLe64(std::string *out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out->push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t GetLe(std::string_view bytes, std::size_t offset, int width) {
  std::uint64_t v = 0;
  for (int i = 0; i < width; ++i)
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[offset + i]))
         << (8 * i);
  return v;
}

}  // namespace

std::string WriteStnoBinary(const StnoMask &mask) {
  if (mask.num_frames() > UINT32_MAX)
    throw InvalidArgument("STNO mask too long for the binary format");
  std::string out = "STNO";
  const auto frames = static_cast<std::uint32_t>(mask.num_frames());
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((frames >> (8 * i)) & 0xff));
  for (const StnoRow &row : mask.rows())
    for (double v : row) PutLe64(&out, std::bit_cast<std::uint64_t>(v));
  return out;
}

StnoMask ReadStnoBinary(std::string_view bytes) {
  if (bytes.size() < 8 || bytes.substr(0, 4) != "STNO")
    throw ParseError("missing STNO magic");
  const std::size_t frames = GetLe(bytes, 4, 4);
  if (bytes.size() != 8 + frames * kNumStnoClasses * 8)
    throw ParseError(fmt::format("STNO file size {} does not match {} frames",
                                 bytes.size(), frames));
  std::vector<StnoRow> rows(frames);
  std::size_t offset = 8;
  for (auto &row : rows)
    for (double &v : row) {
      v = std::bit_cast<double>(GetLe(bytes, offset, 8));
      offset += 8;
    }
  try {
    return StnoMask(std::move(rows));
  } catch (const InvalidArgument &e) {
    throw ParseError(e.what());
  }
}

}  // namespace heat
