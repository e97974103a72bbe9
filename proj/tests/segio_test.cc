// tests/segio_test.cc

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

#include <random>

#include "doctest.h"
#include "heat/errors.h"
#include "heat/heatcore.h"
#include "heat/segio.h"
#include "support/oracles.h"

using namespace heat;

TEST_CASE("ParseRttm maps SPEAKER columns") {
  auto utts = ParseRttm("SPEAKER s1 1 0.50 2.00 <NA> <NA> A <NA> <NA>\n");
  REQUIRE(utts.size() == 1);
  CHECK(utts[0] == Utterance{"s1", "A", 0.5, 2.5, std::nullopt});
}

TEST_CASE("ParseRttm edge cases") {
  CHECK(ParseRttm("").empty());
  CHECK(ParseRttm("\n\n").empty());
  // Non-SPEAKER lines are skipped, a missing trailing newline is fine.
  auto utts = ParseRttm(
      "SPKR-INFO s1 1 <NA> <NA> <NA> unknown A <NA> <NA>\n"
      "SPEAKER s1 1 1 2 <NA> <NA> B <NA> <NA>");
  REQUIRE(utts.size() == 1);
  CHECK(utts[0].speaker == "B");
  CHECK(utts[0].end == 3.0);
}

TEST_CASE("ParseRttm rejects bad lines with their line number") {
  try {
    ParseRttm("SPEAKER s1 1 0 1 <NA> <NA> A <NA> <NA>\n"
              "SPEAKER s1 1 1.0 -0.5 <NA> <NA> A <NA> <NA>\n");
    FAIL("expected ParseError");
  } catch (const ParseError &e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("negative duration") != std::string::npos);
  }
  CHECK_THROWS_AS(ParseRttm("SPEAKER s1 1 abc 1 <NA> <NA> A <NA> <NA>\n"), ParseError);
  CHECK_THROWS_AS(ParseRttm("SPEAKER s1 1 0 1x <NA> <NA> A <NA> <NA>\n"), ParseError);
  CHECK_THROWS_AS(ParseRttm("SPEAKER s1 1 0 0 <NA> <NA> A <NA> <NA>\n"), ParseError);
  CHECK_THROWS_AS(ParseRttm("SPEAKER s1 1 0 1\n"), ParseError);
}

TEST_CASE("RTTM writer formats times with three decimals") {
  Utterance u{"s1", "A", 1.2345, 2.5, std::nullopt};
  std::string text = WriteRttm(std::vector{u});
  CHECK(text == "SPEAKER s1 1 1.234 1.266 <NA> <NA> A <NA> <NA>\n");
  auto back = ParseRttm(text);
  CHECK(back[0].start == 1.234);
  CHECK(back[0].end == 2.5);
  CHECK(WriteRttm(std::vector<Utterance>{}).empty());
  CHECK(FormatTime(0.0005) == "0.001");
  CHECK(FormatTime(3.0) == "3.000");
}

TEST_CASE("ParseSegLst interpolates word times") {
  auto utts = ParseSegLst(
      R"([{"session_id":"s1","speaker":"A","start_time":0.0,"end_time":2.0,"words":"a b"}])");
  REQUIRE(utts.size() == 1);
  REQUIRE(utts[0].words);
  const auto &w = *utts[0].words;
  REQUIRE(w.size() == 2);
  CHECK(w[0] == Word{"a", 0.0, 1.0});
  CHECK(w[1] == Word{"b", 1.0, 2.0});
}

TEST_CASE("ParseSegLst variants and errors") {
  CHECK(ParseSegLst("[]").empty());
  CHECK(ParseSegLst("").empty());

  auto timed = ParseSegLst(
      R"([{"session_id":"s","speaker":"A","start_time":"1.5","end_time":3,)"
      R"("words":"x  y","word_timings":[[1.5,2.0],[2.5,3.0]]}])");
  REQUIRE(timed[0].words->size() == 2);
  CHECK((*timed[0].words)[1] == Word{"y", 2.5, 3.0});

  auto empty_words = ParseSegLst(
      R"([{"session_id":"s","speaker":"A","start_time":0,"end_time":1,"words":""}])");
  REQUIRE(empty_words[0].words);
  CHECK(empty_words[0].words->empty());

  try {
    ParseSegLst(R"([{"session_id":"s","speaker":"A","start_time":0,"end_time":1}])");
    FAIL("expected ParseError");
  } catch (const ParseError &e) {
    CHECK(std::string(e.what()).find("'words'") != std::string::npos);
    CHECK(std::string(e.what()).find("record 0") != std::string::npos);
  }
  CHECK_THROWS_AS(ParseSegLst("{}"), ParseError);
  CHECK_THROWS_AS(ParseSegLst("[1]"), ParseError);
  CHECK_THROWS_AS(ParseSegLst("[{"), ParseError);
  // end <= start is never accepted.
  CHECK_THROWS_AS(
      ParseSegLst(R"([{"session_id":"s","speaker":"A","start_time":2,"end_time":1,"words":"a"}])"),
      ParseError);
  CHECK_THROWS_AS(
      ParseSegLst(R"([{"session_id":"s","speaker":"A","start_time":0,"end_time":1,)"
                  R"("words":"a b","word_timings":[[0,1]]}])"),
      ParseError);
}

TEST_CASE("SegLST writer keeps explicit timings only when needed") {
  Utterance plain{"s", "A", 0.0, 2.0, InterpolateWords({"a", "b"}, 0.0, 2.0)};
  Utterance timed{"s", "B", 1.0, 3.0,
                  std::vector<Word>{{"x", 1.0, 1.5}, {"y", 2.5, 3.0}}};
  std::string text = WriteSegLst(std::vector{plain, timed});
  CHECK(text.find("word_timings") != std::string::npos);
  auto back = ParseSegLst(text);
  REQUIRE(back.size() == 2);
  CHECK(back[0] == plain);
  CHECK(back[1] == timed);
  CHECK(WriteSegLst(std::vector<Utterance>{}).empty());
}

TEST_CASE("round trip on a 1 ms grid is exact") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> ms(0, 100000), len(1, 9000), nw(0, 5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Utterance> utts;
    for (int i = 0; i < 20; ++i) {
      const int s = ms(rng), e = s + len(rng);
      Utterance u{"sess" + std::to_string(trial % 3), "spk" + std::to_string(i % 4),
                  s / 1000.0, e / 1000.0, std::nullopt};
      utts.push_back(u);
    }
    CHECK(ParseRttm(WriteRttm(utts)) == utts);

    for (auto &u : utts) {
      std::vector<std::string> tokens;
      for (int w = nw(rng); w > 0; --w) tokens.push_back("w" + std::to_string(w));
      u.words = InterpolateWords(tokens, u.start, u.end);
    }
    CHECK(ParseSegLst(WriteSegLst(utts)) == utts);
  }
}

TEST_CASE("FrameGrid frame count tolerates representation error") {
  CHECK(FrameGrid(0.01, 0.05).num_frames() == 5);
  CHECK(FrameGrid(0.01, 0.051).num_frames() == 6);
  CHECK(FrameGrid(0.01, 0.0).num_frames() == 0);
  CHECK(FrameGrid(0.1, 0.3).num_frames() == 3);
  CHECK_THROWS_AS(FrameGrid(0.0, 1.0), InvalidArgument);
}

TEST_CASE("Rasterize examples") {
  SUBCASE("whole frames") {
    auto m = Rasterize(std::vector<Utterance>{{"s", "A", 0.0, 0.02, {}}},
                       FrameGrid(0.01, 0.02));
    REQUIRE(m.num_speakers() == 1);
    CHECK(m.speakers()[0] == "A");
    CHECK(m.at(0, 0) == 1.0);
    CHECK(m.at(0, 1) == 1.0);
  }
  SUBCASE("empty") {
    auto m = Rasterize(std::vector<Utterance>{}, FrameGrid(0.01, 0.05));
    CHECK(m.num_speakers() == 0);
    CHECK(m.num_frames() == 5);
  }
  SUBCASE("half-open midpoint rule") {
    auto m = Rasterize(std::vector<Utterance>{{"s", "A", 0.005, 0.015, {}}},
                       FrameGrid(0.01, 0.02));
    CHECK(m.at(0, 0) == 1.0);
    CHECK(m.at(0, 1) == 0.0);
  }
  SUBCASE("beyond the grid") {
    CHECK_THROWS_AS(Rasterize(std::vector<Utterance>{{"s", "A", 0.0, 1.5, {}}},
                              FrameGrid(0.01, 1.0)),
                    InvalidArgument);
  }
  SUBCASE("rows are sorted") {
    auto m = Rasterize(std::vector<Utterance>{{"s", "b", 0.0, 0.01, {}},
                                              {"s", "a", 0.01, 0.02, {}}},
                       FrameGrid(0.01, 0.02));
    CHECK(m.speakers() == std::vector<std::string>{"a", "b"});
    CHECK(m.at(0, 1) == 1.0);
    CHECK(m.at(1, 0) == 1.0);
  }
}

TEST_CASE("Rasterize agrees with a brute-force midpoint sampler") {
  using heat::testing::MidpointSample;
  using heat::testing::TickUtterance;
  std::mt19937_64 rng(11);
  // Boundaries on a 0.5 ms lattice so they often land exactly on midpoints.
  std::uniform_int_distribution<std::int64_t> half_ms(0, 400), len(1, 80);
  for (std::int64_t frame_ticks : {100, 200, 400}) {
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<TickUtterance> ticks;
      std::vector<Utterance> utts;
      std::int64_t total = 0;
      for (int i = 0; i < 4; ++i) {
        std::int64_t s = half_ms(rng) * 5, e = s + len(rng) * 5;
        ticks.push_back({"s" + std::to_string(i % 2), s, e});
        utts.push_back({"x", "s" + std::to_string(i % 2),
                        s / double(heat::testing::kTicksPerSecond),
                        e / double(heat::testing::kTicksPerSecond), {}});
        total = std::max(total, e);
      }
      auto expected = MidpointSample(ticks, frame_ticks, total);
      auto mask = Rasterize(utts, FrameGrid(frame_ticks / double(heat::testing::kTicksPerSecond),
                                            total / double(heat::testing::kTicksPerSecond)));
      REQUIRE(mask.num_speakers() == expected.size());
      for (std::size_t k = 0; k < mask.num_speakers(); ++k) {
        const auto &row = expected.at(mask.speakers()[k]);
        REQUIRE(mask.num_frames() == row.size());
        for (std::size_t t = 0; t < row.size(); ++t)
          CHECK(mask.at(k, t) == row[t]);
      }
    }
  }
}

TEST_CASE("rasterize -> extract -> rasterize is idempotent") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> cs(0, 3000), len(1, 400);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Utterance> utts;
    for (int i = 0; i < 10; ++i) {
      int s = cs(rng);
      utts.push_back({"x", "s" + std::to_string(i % 3), s / 100.0,
                      (s + len(rng)) / 100.0, {}});
    }
    FrameGrid grid(0.01, 35.0);
    auto once = Rasterize(utts, grid);
    auto twice = Rasterize(ExtractUtterances(once, "x"), grid, once.speakers());
    CHECK(once == twice);
  }
}

TEST_CASE("ActivityMask invariants") {
  CHECK_THROWS_AS(ActivityMask({"a", "a"}, 0.01, 3), InvalidArgument);
  ActivityMask m({"a"}, 0.01, 2);
  CHECK_THROWS_AS(m.set(0, 0, 1.5), InvalidArgument);
  m.set(0, 1, 0.25);
  CHECK(m.row(0)[1] == 0.25);
  CHECK_FALSE(m.find("b"));
}
