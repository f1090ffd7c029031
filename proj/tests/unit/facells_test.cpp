// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "facells/error.hpp"
#include "facells/facells/compose.hpp"
#include "facells/facells/scores.hpp"
#include "facells/seq_model/config.hpp"
#include "facells/seq_model/network.hpp"
#include "facells/sketch/encoding.hpp"
#include "support/generators.hpp"

using namespace facells;
using namespace facells::scoring;
using facells::seq_model::ModelParams;
using facells::seq_model::parse_config_name;
using sketch::Point;
namespace gen = facells::testing;

namespace {

// Random weights and biases everywhere, so no term of the identity is zero.
ModelParams random_model(const std::string& name, std::uint64_t seed, std::size_t outputs = 1) {
  auto m = ModelParams::zeros(parse_config_name(name, outputs));
  Rng rng(seed);
  m.values = gen::random_vector(rng, m.values.size(), -0.6, 0.6);
  return m;
}

// Logit straight from the network forward pass.
std::vector<double> model_logits(const ModelParams& m, const sketch::EncodedSequence& seq) {
  const std::vector<sketch::EncodedSequence> one{seq};
  return seq_model::forward(m, seq_model::SequenceBatch::pack(one, {}, m.config.outputs)).logits;
}

PointScores hand_scores(const std::string& id, std::vector<double> pts, double logit) {
  PointScores s;
  s.id = id;
  s.steps = pts.size();
  s.outputs = 1;
  s.logits = {logit};
  s.points = std::move(pts);
  return s;
}

sketch::Drawing line_drawing(const std::string& id, std::vector<Point> pts) {
  return sketch::Drawing(id, 64, 64, {sketch::Stroke(std::move(pts))});
}

ScoredDrawing single_point_item(const std::string& id, Point a, Point b, double score) {
  return {line_drawing(id, {a, b}), hand_scores(id, {score, score}, 1.0)};
}

}  // namespace

// ---- per-point scores ----

TEST(PointScores, MeanEqualsLogitOnRandomDrawings) {
  const auto m = random_model("1bi(8)-ga-d1", 3);
  Rng rng(19);
  for (int i = 0; i < 100; ++i) {
    const auto d = gen::random_drawing(rng);
    const auto seq = sketch::encode(d, i % 2 ? sketch::Format::relative : sketch::Format::absolute,
                                    sketch::CoordMode::normalized);
    const auto s = per_point_scores(m, seq, d.id());
    ASSERT_EQ(s.steps, seq.triples.size());
    double mean = 0.0;
    for (std::size_t t = 0; t < s.steps; ++t) mean += s.at(t, 0);
    mean /= static_cast<double>(s.steps);
    const double logit = model_logits(m, seq)[0];
    EXPECT_LT(std::abs(mean - logit), 1e-9);
    EXPECT_LT(std::abs(s.logits[0] - logit), 1e-12);
  }
}

TEST(PointScores, StackedAndUnidirectionalModels) {
  Rng rng(4);
  for (const std::string name : {"3bi(5)-ga-d1", "2uni(6)-ga-d1"}) {
    const auto m = random_model(name, 8, 3);
    for (int i = 0; i < 10; ++i) {
      const auto seq = sketch::encode(gen::random_drawing(rng), sketch::Format::absolute,
                                      sketch::CoordMode::normalized);
      const auto s = per_point_scores(m, seq);
      const auto logits = model_logits(m, seq);
      for (std::size_t k = 0; k < 3; ++k) {
        const auto col = s.column(k);
        double mean = 0.0;
        for (double v : col) mean += v;
        EXPECT_LT(std::abs(mean / col.size() - logits[k]), 1e-9) << name;
      }
    }
  }
}

TEST(PointScores, ConstantHiddenStateGivesConstantScores) {
  // Zero weights, forget gate shut: every step computes the same c and h.
  auto m = ModelParams::zeros(parse_config_name("1bi(3)-ga-d1"));
  const auto& L = m.layout;
  Rng rng(2);
  for (int dir = 0; dir < 2; ++dir) {
    const auto& s = L.lstm(0)[dir];
    for (std::size_t r = 0; r < 4 * s.cells; ++r) {
      m.values[s.b + r] = (r / s.cells == 1) ? -60.0 : uniform_real(rng, -2.0, 2.0);
    }
  }
  for (std::size_t i = 0; i < L.output().in; ++i) m.values[L.output().w + i] = uniform_real(rng, -1, 1);
  m.values[L.output().b] = 0.3;
  const auto seq = sketch::encode(gen::random_drawing(rng), sketch::Format::absolute,
                                  sketch::CoordMode::normalized);
  const auto s = per_point_scores(m, seq);
  for (std::size_t t = 0; t < s.steps; ++t) EXPECT_EQ(s.at(t, 0), s.logits[0]);
}

TEST(PointScores, RefusesNonAffineHeads) {
  Rng rng(1);
  const auto seq = sketch::encode(gen::random_drawing(rng), sketch::Format::absolute,
                                  sketch::CoordMode::normalized);
  EXPECT_THROW(per_point_scores(random_model("1bi(4)-fs-d1", 1), seq), UsageError);
  EXPECT_THROW(per_point_scores(random_model("1bi(4)-ga-d40", 1), seq), UsageError);
  EXPECT_THROW(per_point_scores(random_model("1bi(4)-ga-d1", 1), sketch::EncodedSequence{}),
               DataError);
}

TEST(PointScores, ColumnSliceOfMultilabelModel) {
  const auto multi = random_model("1bi(6)-ga-d1", 12, 40);
  Rng rng(6);
  const auto seq = sketch::encode(gen::random_drawing(rng), sketch::Format::absolute,
                                  sketch::CoordMode::normalized);
  const auto all = per_point_scores(multi, seq);
  for (std::size_t k : {0u, 17u, 39u}) {
    auto single = ModelParams::zeros(parse_config_name("1bi(6)-ga-d1", 1));
    for (const auto& b : multi.layout.blocks()) {
      const auto& dst = *std::find_if(single.layout.blocks().begin(), single.layout.blocks().end(),
                                      [&](const auto& x) { return x.name == b.name; });
      const std::size_t first_row = (b.name.starts_with("out.")) ? k : 0;
      const std::size_t rows = dst.rows;
      std::copy_n(multi.values.begin() + b.offset + first_row * b.cols, rows * b.cols,
                  single.values.begin() + dst.offset);
    }
    const auto one = per_point_scores(single, seq);
    EXPECT_EQ(one.column(0), all.column(k));
    EXPECT_EQ(one.logits[0], all.logits[k]);
  }
}

TEST(PointScores, JsonShape) {
  const auto s = hand_scores("a", {1.0, 2.0}, 1.5);
  const auto j = to_json(s, 0);
  EXPECT_EQ(j["id"], "a");
  EXPECT_EQ(j["logit"], 1.5);
  EXPECT_EQ(j["points"].size(), 2u);
}

// ---- cell traces ----

TEST(CellTrace, ShapeAndRange) {
  const auto m = random_model("3bi(4)-ga-d1", 5);
  Rng rng(8);
  for (int i = 0; i < 20; ++i) {
    const auto seq = sketch::encode(gen::random_drawing(rng), sketch::Format::relative,
                                    sketch::CoordMode::normalized);
    const auto tr = cell_trace(m, seq, 2, 0);
    ASSERT_EQ(tr.forward.size(), seq.triples.size());
    ASSERT_EQ(tr.backward.size(), seq.triples.size());
    for (double v : tr.forward) EXPECT_TRUE(v > -1.0 && v < 1.0);
    for (double v : tr.backward) EXPECT_TRUE(v > -1.0 && v < 1.0);
  }
}

TEST(CellTrace, ZeroModelAndErrors) {
  const auto m = ModelParams::zeros(parse_config_name("2bi(3)-ga-d1"));
  Rng rng(3);
  const auto seq = sketch::encode(gen::random_drawing(rng), sketch::Format::absolute,
                                  sketch::CoordMode::normalized);
  const auto tr = cell_trace(m, seq, 1, 2);
  for (double v : tr.forward) EXPECT_EQ(v, 0.0);
  for (double v : tr.backward) EXPECT_EQ(v, 0.0);
  EXPECT_THROW(cell_trace(m, seq, 2, 0), UsageError);
  EXPECT_THROW(cell_trace(m, seq, 0, 3), UsageError);
  const auto uni = ModelParams::zeros(parse_config_name("1uni(3)-ga-d1"));
  EXPECT_TRUE(cell_trace(uni, seq, 0, 0).backward.empty());
}

TEST(CellTrace, MatchesForwardHiddenState) {
  const auto m = random_model("2bi(3)-ga-d1", 9);
  Rng rng(10);
  const auto seq = sketch::encode(gen::random_drawing(rng), sketch::Format::absolute,
                                  sketch::CoordMode::normalized);
  const std::vector<sketch::EncodedSequence> one{seq};
  const auto out = seq_model::forward(m, seq_model::SequenceBatch::pack(one, {}, 1), true);
  const auto& h = out.hidden[0][1];  // layer 1, steps x 6
  const auto tr = cell_trace(m, seq, 1, 1);
  for (std::size_t t = 0; t < tr.forward.size(); ++t) {
    EXPECT_EQ(tr.forward[t], h[t * 6 + 1]);
    EXPECT_EQ(tr.backward[t], h[t * 6 + 3 + 1]);
  }
}

// ---- filter_lines ----

TEST(FilterLines, ThresholdExample) {
  const auto d = line_drawing("a", {{1, 1}, {2, 2}, {3, 3}});
  FaCellSpec spec;
  spec.threshold = 10;
  const auto ann = filter_lines(d, hand_scores("a", {5, 20, 3}, 1), spec);
  EXPECT_EQ(ann.point_passed, (std::vector<bool>{false, true, false}));
  EXPECT_EQ(ann.stroke_marked, std::vector<bool>{false});
}

TEST(FilterLines, VeryLowThresholdPassesEverything) {
  const auto d = line_drawing("a", {{1, 1}, {2, 2}, {3, 3}});
  FaCellSpec spec;
  spec.threshold = -std::numeric_limits<double>::max();
  const auto ann = filter_lines(d, hand_scores("a", {-1e300, 0, 3}, 1), spec);
  EXPECT_EQ(ann.point_passed, (std::vector<bool>{true, true, true}));
  EXPECT_EQ(ann.stroke_marked, std::vector<bool>{true});
}

TEST(FilterLines, NegativePolarity) {
  const auto d = line_drawing("a", {{1, 1}, {2, 2}, {3, 3}});
  FaCellSpec spec;
  spec.threshold = 10;
  spec.polarity = Polarity::negative;
  const auto ann = filter_lines(d, hand_scores("a", {-15, 0, 12}, 1), spec);
  EXPECT_EQ(ann.point_passed, (std::vector<bool>{true, false, false}));
}

TEST(FilterLines, LineFractionMarksStrokes) {
  const sketch::Drawing d("a", 64, 64,
                          {sketch::Stroke({{1, 1}, {2, 2}}), sketch::Stroke({{3, 3}, {4, 4}, {5, 5}})});
  FaCellSpec spec;
  spec.threshold = 0;
  const auto s = hand_scores("a", {1, -1, 1, 1, -1}, 1);
  EXPECT_EQ(filter_lines(d, s, spec, 0.5).stroke_marked, (std::vector<bool>{true, true}));
  EXPECT_EQ(filter_lines(d, s, spec, 0.6).stroke_marked, (std::vector<bool>{false, true}));
  EXPECT_EQ(filter_lines(d, s, spec, 1.0).stroke_marked, (std::vector<bool>{false, false}));
}

TEST(FilterLines, MisalignedScores) {
  const auto d = line_drawing("a", {{1, 1}, {2, 2}, {3, 3}});
  EXPECT_THROW(filter_lines(d, hand_scores("a", {1, 2}, 1), {}), DataError);
}

TEST(FilterLines, MonotoneInThreshold) {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const auto d = gen::random_drawing(rng);
    const auto s = hand_scores("r", gen::random_vector(rng, d.point_count(), -30, 30), 1);
    for (auto pol : {Polarity::positive, Polarity::negative}) {
      FaCellSpec lo, hi;
      lo.polarity = hi.polarity = pol;
      lo.threshold = uniform_real(rng, -30, 30);
      hi.threshold = lo.threshold + uniform_real(rng, 0, 20);
      const auto a = filter_lines(d, s, lo), b = filter_lines(d, s, hi);
      for (std::size_t i = 0; i < a.point_passed.size(); ++i) {
        EXPECT_TRUE(a.point_passed[i] || !b.point_passed[i]);
      }
    }
  }
}

// ---- composition ----

TEST(Compose, SingleDrawingIsADotPlot) {
  const auto d = line_drawing("a", {{1.5, 2.5}, {10.2, 3.9}, {10.7, 3.1}, {63.0, 64.0}});
  FaCellSpec spec;
  spec.threshold = -1;
  const auto img = compose_facell({{d, hand_scores("a", {0, 0, 0, 0}, 2.0)}}, spec, 1);
  EXPECT_EQ(img.width, 64u);
  EXPECT_EQ(img.points, d.strokes()[0].points());
  std::vector<double> expect(64 * 64, 0.0);
  expect[2 * 64 + 1] = 1;
  expect[3 * 64 + 10] = 2;
  expect[63 * 64 + 63] = 1;  // the far corner clamps into the last pixel
  EXPECT_EQ(img.mass, expect);
  const auto raster = facell_raster(img, 0.25);
  EXPECT_EQ(raster.pixels[3 * 64 + 10], 128);
  EXPECT_EQ(raster.pixels[0], 255);
  const auto svg = facell_svg(img, 0.25);
  std::size_t circles = 0;
  for (auto pos = svg.find("<circle"); pos != std::string::npos; pos = svg.find("<circle", pos + 1)) {
    ++circles;
  }
  EXPECT_EQ(circles, 4u);
  EXPECT_NE(svg.find("fill-opacity=\"0.25\""), std::string::npos);
}

TEST(Compose, TwoDisjointSinglePointDrawings) {
  FaCellSpec spec;
  spec.count = 2;
  // Second point of each stroke fails the threshold.
  auto a = single_point_item("a", {5, 5}, {6, 6}, 1.0);
  auto b = single_point_item("b", {40, 40}, {41, 41}, 1.0);
  a.scores.points[1] = b.scores.points[1] = -1.0;
  const auto img = compose_facell({a, b}, spec, 3);
  std::size_t marked = 0;
  for (double v : img.mass) marked += v > 0;
  EXPECT_EQ(marked, 2u);
  EXPECT_EQ(img.mass[5 * 64 + 5], 1.0);
  EXPECT_EQ(img.mass[40 * 64 + 40], 1.0);
}

TEST(Compose, NotEnoughQualifyingDrawings) {
  FaCellSpec spec;
  spec.count = 3;
  auto neg = single_point_item("c", {1, 1}, {2, 2}, 1.0);
  neg.scores.logits[0] = -0.5;
  try {
    compose_facell({single_point_item("a", {1, 1}, {2, 2}, 1), single_point_item("b", {1, 1}, {2, 2}, 1), neg},
                   spec, 1);
    FAIL();
  } catch (const NotEnoughDrawings& e) {
    EXPECT_EQ(e.found(), 2u);
  }
  spec.polarity = Polarity::negative;
  spec.count = 1;
  EXPECT_EQ(compose_facell({single_point_item("a", {1, 1}, {2, 2}, 1), neg}, spec, 1).used_ids,
            std::vector<std::string>{"c"});
}

TEST(Compose, CanvasMismatch) {
  FaCellSpec spec;
  spec.count = 2;
  ScoredDrawing other{sketch::Drawing("b", 32, 64, {sketch::Stroke({{1, 1}, {2, 2}})}),
                      hand_scores("b", {1, 1}, 1)};
  EXPECT_THROW(compose_facell({single_point_item("a", {1, 1}, {2, 2}, 1), other}, spec, 1),
               DataError);
}

TEST(Compose, PermutationInvariant) {
  Rng rng(40);
  std::vector<ScoredDrawing> items;
  for (int i = 0; i < 30; ++i) {
    gen::DrawingShape shape;
    shape.width = shape.height = 64;
    const auto d = gen::random_drawing(rng, shape, "d" + std::to_string(i));
    items.push_back({d, hand_scores(d.id(), gen::random_vector(rng, d.point_count(), -5, 5),
                                    uniform_real(rng, -1, 1))});
  }
  FaCellSpec spec;
  spec.count = 5;
  spec.threshold = 1;
  const auto ref = compose_facell(items, spec, 77);
  for (int trial = 0; trial < 20; ++trial) {
    shuffle(items, rng);
    const auto img = compose_facell(items, spec, 77);
    EXPECT_EQ(img.used_ids, ref.used_ids);
    EXPECT_EQ(img.mass, ref.mass);
    EXPECT_EQ(img.points, ref.points);
  }
}
