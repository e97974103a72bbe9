// tests/stno_fddt_test.cc

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

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "doctest.h"
#include "heat/errors.h"
#include "heat/stno_fddt.h"

using namespace heat;

namespace {

// Probability of each class when every talker is an independent Bernoulli
// draw, by summing over all joint outcomes.
StnoRow EnumerateStno(double target, const std::vector<double> &others) {
  StnoRow row{0, 0, 0, 0};
  const std::size_t m = others.size();
  for (int a = 0; a < 2; ++a) {
    for (std::size_t bits = 0; bits < (std::size_t{1} << m); ++bits) {
      double p = a ? target : 1.0 - target;
      bool any = false;
      for (std::size_t j = 0; j < m; ++j) {
        bool on = (bits >> j) & 1;
        p *= on ? others[j] : 1.0 - others[j];
        any |= on;
      }
      row[a ? (any ? kOverlap : kTarget) : (any ? kNonTarget : kSilence)] += p;
    }
  }
  return row;
}

StnoMask StnoOf(std::vector<double> target, std::vector<std::vector<double>> others) {
  std::vector<std::span<const double>> views(others.begin(), others.end());
  return Stno(target, views);
}

// Plain loops, no Eigen expressions.
std::vector<std::vector<double>> NaiveFddt(const std::vector<std::vector<double>> &z,
                                           const StnoMask &mask, const FddtParams &p) {
  const std::size_t d = z.size(), frames = mask.num_frames();
  std::vector<std::vector<double>> out(d, std::vector<double>(frames, 0.0));
  for (std::size_t t = 0; t < frames; ++t)
    for (std::size_t c = 0; c < kNumStnoClasses; ++c)
      for (std::size_t i = 0; i < d; ++i) {
        double acc = p.biases[c](i);
        for (std::size_t j = 0; j < d; ++j) acc += p.weights[c](i, j) * z[j][t];
        out[i][t] += acc * mask[t][c];
      }
  return out;
}

FddtParams RandomParams(std::mt19937_64 &rng, Eigen::Index d) {
  std::normal_distribution<double> g;
  FddtParams p;
  for (std::size_t c = 0; c < kNumStnoClasses; ++c) {
    p.weights[c] = Eigen::MatrixXd::NullaryExpr(d, d, [&] { return g(rng); });
    p.biases[c] = Eigen::VectorXd::NullaryExpr(d, [&] { return g(rng); });
  }
  return p;
}

StnoMask RandomMask(std::mt19937_64 &rng, std::size_t frames, int others = 2) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> target(frames);
  std::vector<std::vector<double>> rest(others, std::vector<double>(frames));
  for (auto &x : target) x = u(rng);
  for (auto &row : rest)
    for (auto &x : row) x = u(rng);
  return StnoOf(target, rest);
}

Eigen::MatrixXd RandomZ(std::mt19937_64 &rng, Eigen::Index d, Eigen::Index frames) {
  std::normal_distribution<double> g;
  return Eigen::MatrixXd::NullaryExpr(d, frames, [&] { return g(rng); });
}

}  // namespace

TEST_CASE("stno examples") {
  auto m = StnoOf({1, 0, 1, 0}, {{0, 0, 1, 1}});
  CHECK(m[0] == StnoRow{0, 1, 0, 0});
  CHECK(m[1] == StnoRow{1, 0, 0, 0});
  CHECK(m[2] == StnoRow{0, 0, 0, 1});
  CHECK(m[3] == StnoRow{0, 0, 1, 0});

  auto half = StnoOf({0.5}, {{0.5}});
  for (double v : half[0]) CHECK(v == 0.25);

  // No other talkers at all.
  auto alone = StnoOf({0.25}, {});
  CHECK(alone[0] == StnoRow{0.75, 0.25, 0, 0});
}

TEST_CASE("stno matches joint-outcome enumeration") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    std::size_t m = trial % 5;
    double a = u(rng);
    std::vector<double> o(m);
    for (auto &x : o) x = u(rng);
    std::vector<std::vector<double>> others;
    for (double x : o) others.push_back({x});
    StnoRow got = StnoOf({a}, others)[0];
    StnoRow want = EnumerateStno(a, o);
    double sum = 0.0;
    for (std::size_t c = 0; c < 4; ++c) {
      CHECK(got[c] == doctest::Approx(want[c]).epsilon(1e-12));
      CHECK(got[c] >= 0.0);
      sum += got[c];
    }
    CHECK(std::abs(sum - 1.0) <= 1e-9);
  }
}

TEST_CASE("binary inputs give one-hot rows") {
  std::mt19937_64 rng(4);
  std::bernoulli_distribution coin(0.4);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> t(16);
    std::vector<std::vector<double>> o(3, std::vector<double>(16));
    for (auto &x : t) x = coin(rng);
    for (auto &row : o)
      for (auto &x : row) x = coin(rng);
    auto mask = StnoOf(t, o);
    for (std::size_t f = 0; f < 16; ++f) {
      int ones = 0, zeros = 0;
      for (double v : mask[f]) (v == 1.0 ? ones : zeros) += v == 1.0 || v == 0.0;
      CHECK(ones == 1);
      CHECK(zeros == 3);
    }
  }
}

TEST_CASE("stno errors") {
  CHECK_THROWS_AS(StnoOf({1, 0}, {{1}}), InvalidArgument);
  CHECK_THROWS_AS(StnoMask({StnoRow{0.5, 0.5, 0.5, 0}}), InvalidArgument);
  CHECK_THROWS_AS(StnoMask({StnoRow{-0.1, 1.1, 0, 0}}), InvalidArgument);
}

TEST_CASE("stno for streams") {
  ActivityMask heat({"stream0", "stream1"}, 0.01, 2);
  heat.set(0, 0, 1.0);
  heat.set(1, 1, 1.0);
  auto [m0, m1] = StnoForStreams(heat);
  CHECK(m0[0] == StnoRow{0, 1, 0, 0});
  CHECK(m0[1] == StnoRow{0, 0, 1, 0});
  CHECK(m1[0] == StnoRow{0, 0, 1, 0});
  CHECK(m1[1] == StnoRow{0, 1, 0, 0});

  ActivityMask silent({"stream0", "stream1"}, 0.01, 3);
  auto [s0, s1] = StnoForStreams(silent);
  for (std::size_t t = 0; t < 3; ++t) {
    CHECK(s0[t] == StnoRow{1, 0, 0, 0});
    CHECK(s1[t] == StnoRow{1, 0, 0, 0});
  }

  ActivityMask full({"stream0", "stream1"}, 0.01, 3);
  for (std::size_t k = 0; k < 2; ++k)
    for (std::size_t t = 0; t < 3; ++t) full.set(k, t, 1.0);
  auto [f0, f1] = StnoForStreams(full);
  for (std::size_t t = 0; t < 3; ++t) {
    CHECK(f0[t] == StnoRow{0, 0, 0, 1});
    CHECK(f1[t] == StnoRow{0, 0, 0, 1});
  }

  CHECK_THROWS_AS(StnoForStreams(ActivityMask({"a", "b", "c"}, 0.01, 2)), InvalidArgument);
}

TEST_CASE("fddt examples") {
  FddtParams p = FddtParams::Identity(2);
  p.weights[kSilence] = 2.0 * Eigen::MatrixXd::Identity(2, 2);
  p.weights[kTarget].setZero();
  Eigen::MatrixXd z(2, 1);
  z << 1, 0;
  StnoMask mask({StnoRow{0.5, 0.5, 0, 0}});
  Eigen::MatrixXd out = FddtApply(z, mask, p);
  CHECK(out(0, 0) == 1.0);
  CHECK(out(1, 0) == 0.0);
}

TEST_CASE("fddt matches naive loops") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::Index d = 1 + trial % 16, frames = 1 + trial % 7;
    FddtParams p = RandomParams(rng, d);
    StnoMask mask = RandomMask(rng, frames);
    Eigen::MatrixXd z = RandomZ(rng, d, frames);
    std::vector<std::vector<double>> zv(d, std::vector<double>(frames));
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index t = 0; t < frames; ++t) zv[i][t] = z(i, t);
    auto want = NaiveFddt(zv, mask, p);
    Eigen::MatrixXd got = FddtApply(z, mask, p);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index t = 0; t < frames; ++t)
        CHECK(got(i, t) == doctest::Approx(want[i][t]).epsilon(1e-10));
  }
}

TEST_CASE("fddt identity fixpoint and one-hot collapse") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::Index d = 1 + trial % 16, frames = 20;
    Eigen::MatrixXd z = RandomZ(rng, d, frames);
    StnoMask mask = RandomMask(rng, frames);
    Eigen::MatrixXd out = FddtApply(z, mask, FddtParams::Identity(d));
    CHECK((out - z).cwiseAbs().maxCoeff() <= 1e-12);

    FddtParams p = RandomParams(rng, d);
    for (std::size_t c = 0; c < kNumStnoClasses; ++c) {
      StnoRow hot{0, 0, 0, 0};
      hot[c] = 1.0;
      StnoMask one(std::vector<StnoRow>(frames, hot));
      Eigen::MatrixXd got = FddtApply(z, one, p);
      for (Eigen::Index t = 0; t < frames; ++t) {
        Eigen::VectorXd want = p.weights[c] * z.col(t);
        want += p.biases[c];
        CHECK(got.col(t) == want);
      }
    }
  }
}

TEST_CASE("fddt is affine in z") {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::Index d = 1 + trial % 8, frames = 12;
    FddtParams p = RandomParams(rng, d);
    StnoMask mask = RandomMask(rng, frames);
    Eigen::MatrixXd z1 = RandomZ(rng, d, frames), z2 = RandomZ(rng, d, frames);
    Eigen::MatrixXd lhs =
        FddtApply(z1, mask, p) + FddtApply(z2, mask, p) - FddtApply(z1 + z2, mask, p);
    for (Eigen::Index t = 0; t < frames; ++t) {
      Eigen::VectorXd bias = Eigen::VectorXd::Zero(d);
      for (std::size_t c = 0; c < kNumStnoClasses; ++c) bias += p.biases[c] * mask[t][c];
      CHECK((lhs.col(t) - bias).cwiseAbs().maxCoeff() <= 1e-9);
    }
  }
}

TEST_CASE("fddt shape errors") {
  FddtParams p = FddtParams::Identity(3);
  StnoMask mask({StnoRow{1, 0, 0, 0}, StnoRow{0, 1, 0, 0}});
  CHECK_THROWS_AS(FddtApply(Eigen::MatrixXd::Zero(2, 2), mask, p), InvalidArgument);
  CHECK_THROWS_AS(FddtApply(Eigen::MatrixXd::Zero(3, 3), mask, p), InvalidArgument);
  p.biases[kOverlap] = Eigen::VectorXd::Zero(2);
  CHECK_THROWS_AS(p.Validate(), InvalidArgument);
  CHECK_THROWS_AS(FddtApply(Eigen::MatrixXd::Zero(3, 2), mask, p), InvalidArgument);
}

TEST_CASE("stno serialization") {
  std::mt19937_64 rng(11);
  StnoMask mask = RandomMask(rng, 50);

  SUBCASE("json round trip") {
    CHECK(ParseStnoJson(WriteStnoJson(mask)) == mask);
    CHECK(ParseStnoJson(WriteStnoJson(StnoMask{})).num_frames() == 0);
  }
  SUBCASE("binary round trip and layout") {
    std::string bytes = WriteStnoBinary(mask);
    CHECK(bytes.size() == 8 + 50 * 4 * 8);
    CHECK(bytes.substr(0, 4) == "STNO");
    std::uint32_t frames = 0;
    for (int i = 3; i >= 0; --i) frames = frames << 8 | static_cast<unsigned char>(bytes[4 + i]);
    CHECK(frames == 50);
    // Second value in the file is frame 0, class T.
    std::uint64_t bits = 0;
    for (int i = 7; i >= 0; --i) bits = bits << 8 | static_cast<unsigned char>(bytes[16 + i]);
    double v;
    std::memcpy(&v, &bits, sizeof v);
    CHECK(v == mask[0][kTarget]);
    CHECK(ReadStnoBinary(bytes) == mask);
  }
  SUBCASE("corrupt input") {
    std::string bytes = WriteStnoBinary(mask);
    CHECK_THROWS_AS(ReadStnoBinary(bytes.substr(0, bytes.size() - 1)), ParseError);
    CHECK_THROWS_AS(ReadStnoBinary("STN"), ParseError);
    std::string bad = bytes;
    bad[0] = 'X';
    CHECK_THROWS_AS(ReadStnoBinary(bad), ParseError);
    CHECK_THROWS_AS(ParseStnoJson("{\"frames\": [[1, 0, 0]]}"), ParseError);
    CHECK_THROWS_AS(ParseStnoJson("not json"), ParseError);
    CHECK_THROWS_AS(ParseStnoJson("{\"frames\": [[0.5, 0.5, 0.5, 0.5]]}"), std::exception);
  }
}

TEST_CASE("fddt output of a frame does not depend on its batch") {
  std::mt19937_64 rng(12);
  const Eigen::Index d = 16, frames = 64;
  FddtParams p = RandomParams(rng, d);
  StnoMask mask = RandomMask(rng, frames);
  Eigen::MatrixXd z = RandomZ(rng, d, frames);
  Eigen::MatrixXd all = FddtApply(z, mask, p);
  for (Eigen::Index t = 0; t < frames; ++t) {
    StnoMask one({mask[static_cast<std::size_t>(t)]});
    CHECK(FddtApply(z.col(t), one, p) == all.col(t));
  }
}
