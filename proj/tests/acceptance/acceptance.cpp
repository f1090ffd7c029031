// SPDX-License-Identifier: Apache-2.0
// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Run from a Release build; timing bounds are wall clock.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "facells/facells/compose.hpp"
#include "facells/facells/scores.hpp"
#include "facells/path_order/path_order.hpp"
#include "facells/seq_model/gradcheck.hpp"
#include "facells/seq_model/loss.hpp"
#include "facells/seq_model/network.hpp"
#include "facells/sketch/encoding.hpp"
#include "facells/sketch/sketch_io.hpp"
#include "facells/train_eval/experiment.hpp"
#include "facells/train_eval/toy.hpp"
#include "facells/vectorizer/vectorize.hpp"
#include "support/generators.hpp"

using namespace facells;
namespace gen = facells::testing;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string num(double v, int precision = 4) {
  std::ostringstream ss;
  ss << std::setprecision(precision) << v;
  return ss.str();
}

// Shared by criteria 6 and 8.
struct ToyRun {
  std::vector<sketch::Drawing> drawings;
  train_eval::AttributeTable table;
  train_eval::ExperimentPlan plan;
  train_eval::StageReport report;
  bool trained = false;
};

ToyRun& toy_run() {
  static ToyRun run;
  return run;
}

train_eval::ExperimentPlan toy_plan() {
  train_eval::ExperimentPlan p;
  p.config = "1bi(16)-ga-d1";
  p.attributes = {"glasses"};
  p.split = {0.8, 0.2};
  p.epochs = 20;
  p.lr = 0.005;
  p.batch_size = 32;
  return p;
}

// ---- 1 ----
Outcome gradient_oracle() {
  const auto t0 = Clock::now();
  seq_model::GradCheckOptions opt;
  opt.batches = 20;
  double worst = 0.0;
  std::string worst_cfg;
  std::size_t checked = 0;
  for (const auto& cfg : seq_model::gradcheck_configs(8)) {
    const auto r = seq_model::gradient_check(cfg, opt);
    checked += r.checked;
    if (r.max_rel_error >= worst) {
      worst = r.max_rel_error;
      worst_cfg = cfg.name();
    }
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-5 && secs < 120.0,
          "max_rel_error " + num(worst) + " (" + worst_cfg + "), " + std::to_string(checked) +
              " gradients, " + num(secs, 3) + " s"};
}

// ---- 2 ----
Outcome facells_identity() {
  auto model = seq_model::ModelParams::zeros(seq_model::parse_config_name("1bi(8)-ga-d1"));
  Rng rng(2024);
  model.values = gen::random_vector(rng, model.values.size(), -0.6, 0.6);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto d = gen::random_drawing(rng);
    const auto seq = sketch::encode(d, sketch::Format::absolute, sketch::CoordMode::normalized);
    const auto s = scoring::per_point_scores(model, seq);
    double mean = 0.0;
    for (std::size_t t = 0; t < s.steps; ++t) mean += s.at(t, 0);
    mean /= static_cast<double>(s.steps);
    const std::vector<sketch::EncodedSequence> one{seq};
    const double logit =
        seq_model::forward(model, seq_model::SequenceBatch::pack(one, {}, 1)).logits[0];
    worst = std::max(worst, std::abs(mean - logit));
  }
  return {worst < 1e-9, "max |mean s_t - logit| " + num(worst) + " over 100 drawings"};
}

// ---- 3 ----
sketch::Drawing ordering_instance(Rng& rng, std::size_t n) {
  gen::DrawingShape shape;
  shape.min_strokes = shape.max_strokes = n;
  shape.max_points = 4;
  return gen::random_drawing(rng, shape);
}

Outcome ordering_oracle() {
  Rng rng(303);
  double worst_ratio = 0.0;
  std::size_t above_identity = 0, instances = 0;
  auto check = [&](const sketch::Drawing& d, bool exact) {
    const auto h = path_order::solve_heuristic(d, rng());
    const double id_cost = path_order::tour_cost(d, path_order::Tour::identity(d.strokes().size()));
    if (h.pen_up_cost > id_cost + 1e-9 * std::max(1.0, id_cost)) ++above_identity;
    ++instances;
    if (exact) {
      const double opt = path_order::solve_exact(d).pen_up_cost;
      worst_ratio = std::max(worst_ratio, opt > 0 ? h.pen_up_cost / opt : (h.pen_up_cost > 0 ? INFINITY : 1.0));
    }
  };
  for (int i = 0; i < 200; ++i) check(ordering_instance(rng, 7), true);
  for (int i = 0; i < 50; ++i) check(ordering_instance(rng, 8), true);
  // The remaining 750 instances span 1..300 strokes, with every 25th at 300.
  for (int i = 0; i < 750; ++i) {
    const std::size_t n = i % 25 == 0 ? 300 : 1 + uniform_index(rng, 300);
    check(ordering_instance(rng, n), false);
  }
  double slowest = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto d = ordering_instance(rng, 300);
    const auto t0 = Clock::now();
    (void)path_order::solve_heuristic(d, 7);
    slowest = std::max(slowest, seconds_since(t0) * 1000.0);
  }
  const bool ok = worst_ratio <= 1.05 && above_identity == 0 && slowest < 50.0;
  return {ok, "worst heuristic/exact " + num(worst_ratio, 6) + ", " + std::to_string(above_identity) +
                  "/" + std::to_string(instances) + " above identity, slowest 300-stroke solve " +
                  num(slowest, 3) + " ms"};
}

// ---- 4 ----
Outcome encoding_round_trips() {
  Rng rng(404);
  double worst = 0.0;
  std::size_t grammar_failures = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto shape = gen::random_shape(rng);
    const auto d = gen::random_drawing(rng, shape, "r" + std::to_string(i));
    const auto mode = i % 2 ? sketch::CoordMode::raw : sketch::CoordMode::normalized;
    const auto abs = sketch::encode_absolute(d, mode);
    const auto rel = sketch::encode_relative(d, mode);
    for (const auto* s : {&abs, &rel}) {
      if (sketch::pen_grammar_violation(s->triples)) ++grammar_failures;
      const auto back = sketch::decode(*s, d.width(), d.height());
      for (std::size_t k = 0; k < d.strokes().size(); ++k) {
        const auto& a = d.strokes()[k].points();
        const auto& b = back.strokes()[k].points();
        for (std::size_t j = 0; j < a.size(); ++j) {
          worst = std::max({worst, std::abs(a[j].x - b[j].x), std::abs(a[j].y - b[j].y)});
        }
      }
    }
    // Raw relative sequences start from the canvas center.
    double x = mode == sketch::CoordMode::raw ? d.width() / 2 : 0.0;
    double y = mode == sketch::CoordMode::raw ? d.height() / 2 : 0.0;
    for (std::size_t t = 0; t < rel.triples.size(); ++t) {
      x += rel.triples[t].a;
      y += rel.triples[t].b;
      worst = std::max({worst, std::abs(x - abs.triples[t].a), std::abs(y - abs.triples[t].b)});
    }
  }
  return {worst < 1e-9 && grammar_failures == 0,
          "max coordinate error " + num(worst) + ", grammar rejections " +
              std::to_string(grammar_failures)};
}

// ---- 5 ----
Outcome masking_invariance() {
  Rng rng(505);
  double worst = 0.0;
  for (const auto& cfg : seq_model::gradcheck_configs(6)) {
    auto p = seq_model::ModelParams::zeros(cfg);
    p.values = gen::random_vector(rng, p.values.size(), -0.5, 0.5);
    const auto base = seq_model::random_batch(rng, 4, 2, 12, 1);
    const auto ref = seq_model::loss_and_gradient(p, base);
    for (std::size_t pad = 1; pad <= 50; pad += 7) {
      auto padded = base;
      padded.max_len = base.max_len + pad;
      padded.inputs.assign(base.size() * padded.max_len * 3, 0.0);
      for (std::size_t i = 0; i < base.size(); ++i) {
        for (std::size_t t = 0; t < padded.max_len; ++t) {
          for (std::size_t c = 0; c < 3; ++c) {
            padded.inputs[(i * padded.max_len + t) * 3 + c] =
                t < base.lengths[i] ? base.inputs[(i * base.max_len + t) * 3 + c]
                                    : uniform_real(rng, -50, 50);
          }
        }
      }
      const auto got = seq_model::loss_and_gradient(p, padded);
      worst = std::max(worst, std::abs(got.loss - ref.loss));
      for (std::size_t k = 0; k < ref.probs.size(); ++k) {
        worst = std::max(worst, std::abs(got.probs[k] - ref.probs[k]));
      }
      for (std::size_t k = 0; k < ref.grad.size(); ++k) {
        worst = std::max(worst, std::abs(got.grad[k] - ref.grad[k]));
      }
    }
  }
  return {worst <= 1e-12, "max change " + num(worst) + " over 5 configs, padding 1..50"};
}

// ---- 6 ----
Outcome toy_training() {
  auto& run = toy_run();
  run.drawings = train_eval::make_toy_dataset(2000, 42);
  run.table = train_eval::attributes_from_labels(run.drawings);
  run.plan = toy_plan();
  const auto t0 = Clock::now();
  run.report = train_eval::run_stage(run.plan, run.drawings, run.table);
  const double secs = seconds_since(t0);
  run.trained = true;

  std::size_t reached = 0;
  for (const auto& m : run.report.metrics) {
    if (m.split == "test" && m.loss < 0.2 && m.balanced_accuracy[0] > 0.9 && reached == 0) {
      reached = m.epoch;
    }
  }
  const auto& last = run.report.last("test");

  auto frozen = toy_plan();
  frozen.lr = 0.0;
  frozen.epochs = 3;
  const auto still = train_eval::run_stage(frozen, run.drawings, run.table);
  bool constant = true;
  for (std::size_t i = 2; i < still.metrics.size(); ++i) {
    const auto& a = still.metrics[i % 2];
    const auto& b = still.metrics[i];
    constant = constant && a.loss == b.loss && a.balanced_accuracy == b.balanced_accuracy;
  }
  return {reached > 0 && secs < 600.0 && constant,
          "targets first met at epoch " + std::to_string(reached) + ", epoch 20 test BCE " +
              num(last.loss) + " BA " + num(last.balanced_accuracy[0]) + ", " + num(secs, 3) +
              " s; lr=0 constant: " + (constant ? "yes" : "no")};
}

// ---- 7 ----
Outcome comparison_harness() {
  auto& run = toy_run();
  if (run.drawings.empty()) {
    run.drawings = train_eval::make_toy_dataset(2000, 42);
    run.table = train_eval::attributes_from_labels(run.drawings);
  }
  std::vector<train_eval::ExperimentPlan> plans;
  for (auto f : {sketch::Format::absolute, sketch::Format::relative}) {
    for (auto o : {path_order::OrderMethod::min_length, path_order::OrderMethod::random}) {
      auto p = toy_plan();
      p.epochs = 10;
      p.encoding.format = f;
      p.encoding.ordering = o;
      plans.push_back(p);
    }
  }
  const auto rep = train_eval::compare_matrix(plans, run.drawings, run.table);
  std::ostringstream csv;
  train_eval::write_comparison_csv(csv, rep);
  std::istringstream lines(csv.str());
  std::string line;
  std::size_t rows = 0;
  bool aligned = true;
  while (std::getline(lines, line)) {
    ++rows;
    aligned = aligned && std::count(line.begin(), line.end(), ',') == 4;
  }
  std::ostringstream ranking;
  for (std::size_t r = 0; r < rep.ranking.size(); ++r) {
    const std::size_t j = rep.ranking[r];
    ranking << (r ? ", " : "") << rep.labels[j] << ' ' << num(rep.test_loss.back()[j]);
  }
  return {rows == 11 && aligned, "10 epochs x 4 plans; observed ranking: " + ranking.str()};
}

// ---- 8 ----
Outcome toy_facell() {
  auto& run = toy_run();
  if (!run.trained) return {false, "needs the toy model from criterion 6"};
  const auto& model = run.report.params;
  const std::size_t column = 0;
  const auto ordered = train_eval::order_all(run.drawings, run.plan.encoding);
  std::vector<scoring::ScoredDrawing> items;
  for (const auto& d : ordered) {
    const auto seq = sketch::encode(d, run.plan.encoding.format, run.plan.encoding.coords);
    items.push_back({d, scoring::per_point_scores(model, seq, d.id())});
  }
  const train_eval::ToyLayout L;
  auto ratio_at = [&](double threshold) {
    scoring::FaCellSpec spec;
    spec.attribute = "glasses";
    spec.column = column;
    spec.count = 200;
    spec.threshold = threshold;
    const auto img = scoring::compose_facell(items, spec, 42);
    double inside = 0.0;
    for (const auto& r : L.glasses_regions()) inside += img.mass_in_disc(r.center, r.radius);
    const auto c = L.control_region();
    const double control = img.mass_in_disc(c.center, c.radius);
    return std::pair{inside, control};
  };
  // Y = 0 keeps every point the model leans positive on.
  const auto [in0, ctl0] = ratio_at(0.0);
  const auto [in10, ctl10] = ratio_at(10.0);
  const bool ok = in0 >= 2.0 * ctl0 && in0 > 0.0;
  return {ok, "X=200, Y=0: glasses mass " + num(in0, 6) + " vs control " + num(ctl0, 6) +
                  " (ratio " + num(ctl0 > 0 ? in0 / ctl0 : INFINITY) + "); Y=10: " + num(in10, 6) +
                  " vs " + num(ctl10, 6)};
}

// ---- 9 ----
double point_segment_distance(sketch::Point p, sketch::Point a, sketch::Point b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  const double t = len2 > 0 ? std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len2, 0.0, 1.0) : 0.0;
  return std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy));
}

Outcome vectorizer_checks() {
  const int w = 96, h = 80, x0 = 20, y0 = 16, x1 = 71, y1 = 59;
  vectorizer::RasterImage img(w, h, static_cast<std::uint8_t>(255));
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) img.at(x, y) = 0;
  }
  const vectorizer::VectorizeConfig cfg;
  const auto d = vectorizer::vectorize(img, cfg, "rect");
  std::size_t boundary = 0, covered = 0;
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      if (x != x0 && x != x1 && y != y0 && y != y1) continue;
      ++boundary;
      const sketch::Point p{static_cast<double>(x), static_cast<double>(y)};
      double best = INFINITY;
      for (const auto& s : d.strokes()) {
        const auto& pts = s.points();
        for (std::size_t i = 1; i < pts.size(); ++i) {
          best = std::min(best, point_segment_distance(p, pts[i - 1], pts[i]));
        }
      }
      covered += best <= 1.0;
    }
  }
  const double coverage = static_cast<double>(covered) / static_cast<double>(boundary);

  const auto flat = vectorizer::vectorize(vectorizer::RasterImage(w, h, static_cast<std::uint8_t>(128)), cfg);

  std::ostringstream a, b;
  sketch::write_jsonl(a, {vectorizer::vectorize(img, cfg, "rect")});
  sketch::write_jsonl(b, {vectorizer::vectorize(img, cfg, "rect")});
  const bool same = a.str() == b.str();
  return {coverage >= 0.95 && flat.strokes().empty() && same,
          "rectangle boundary coverage " + num(coverage * 100.0, 4) + "% (" +
              std::to_string(d.strokes().size()) + " strokes), uniform image " +
              std::to_string(flat.strokes().size()) + " strokes, deterministic: " +
              (same ? "yes" : "no")};
}

// ---- 10 ----
Outcome metric_units() {
  const std::vector<double> p{0.5}, y{1.0};
  const double bce = seq_model::bce_loss(p, y);
  const double err = std::abs(bce - std::log(2.0));
  const std::vector<double> targets{1, 0, 1, 0, 1, 0, 0, 1};
  bool half = true;
  for (double c : {0.0, 0.2, 0.5, 0.8, 1.0}) {
    const std::vector<double> probs(targets.size(), c);
    half = half && seq_model::balanced_accuracy(probs, targets) == 0.5;
  }
  return {err <= 1e-12 && half, "|BCE(1, 0.5) - ln 2| " + num(err) + ", constant-predictor BA 0.5: " +
                                    (half ? "yes" : "no")};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "gradient oracle", gradient_oracle},
      {2, "per-point identity", facells_identity},
      {3, "ordering oracle", ordering_oracle},
      {4, "encoding round trips", encoding_round_trips},
      {5, "masking invariance", masking_invariance},
      {6, "toy training run", toy_training},
      {7, "comparison harness", comparison_harness},
      {8, "toy facell", toy_facell},
      {9, "vectorizer", vectorizer_checks},
      {10, "metric units", metric_units},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << ' ' << c.id << ' ' << c.name << ": " << o.detail
              << std::endl;
  }
  std::cout << (failed ? "FAILED " : "ALL PASSED ") << (criteria.size() - failed) << '/'
            << criteria.size() << std::endl;
  return failed ? 1 : 0;
}
