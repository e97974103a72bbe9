// heat/stno_fddt.h

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

#ifndef HEAT_STNO_FDDT_H_
#define HEAT_STNO_FDDT_H_

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "heat/segio.h"

namespace heat {

// Column order of an STNO row.
enum StnoClass : std::size_t {
  kSilence = 0,
  kTarget = 1,
  kNonTarget = 2,
  kOverlap = 3,
};
inline constexpr std::size_t kNumStnoClasses = 4;

using StnoRow = std::array<double, kNumStnoClasses>;

// Per-frame distribution over {silence, target only, non-target only,
// overlap}. Every row sums to one.
class StnoMask {
 public:
  StnoMask() = default;
  explicit StnoMask(std::vector<StnoRow> rows);

  std::size_t num_frames() const { return rows_.size(); }
  const StnoRow &operator[](std::size_t t) const { return rows_[t]; }
  const std::vector<StnoRow> &rows() const { return rows_; }

  bool operator==(const StnoMask &) const = default;

 private:
  std::vector<StnoRow> rows_;
};

// With a = target activity and n = 1 - prod_j (1 - other_j) (noisy-OR of the
// other talkers): S = (1-a)(1-n), T = a(1-n), N = (1-a)n, O = a*n.
// Binary inputs give one-hot rows.
StnoMask Stno(std::span<const double> target,
              std::span<const std::span<const double>> others);

// Each stream of a two-row HEAT mask as target, the other as non-target.
std::pair<StnoMask, StnoMask> StnoForStreams(const ActivityMask &heat);

// One affine map per STNO class for a single encoder layer.
struct FddtParams {
  std::array<Eigen::MatrixXd, kNumStnoClasses> weights;
  std::array<Eigen::VectorXd, kNumStnoClasses> biases;
  int layer = 0;

  // All four maps set to identity / zero bias.
  static FddtParams Identity(Eigen::Index dim, int layer = 0);

  Eigen::Index dim() const { return weights[0].rows(); }
  // Throws InvalidArgument on inconsistent shapes.
  void Validate() const;
};

// out_t = sum_C (W_C z_t + b_C) * mask[t][C], z is d_m x T (one column per
// frame).
Eigen::MatrixXd FddtApply(const Eigen::MatrixXd &z, const StnoMask &mask,
                          const FddtParams &params);

// {"classes": ["S","T","N","O"], "num_frames": T, "frames": [[s,t,n,o], ...]}
std::string WriteStnoJson(const StnoMask &mask);
StnoMask ParseStnoJson(std::string_view text);

// Little-endian: "STNO", u32 T, then T rows of four float64 (S, T, N, O).
std::string WriteStnoBinary(const StnoMask &mask);
StnoMask ReadStnoBinary(std::string_view bytes);

}  // namespace heat

#endif  // HEAT_STNO_FDDT_H_
