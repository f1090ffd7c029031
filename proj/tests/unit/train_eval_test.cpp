// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "facells/error.hpp"
#include "facells/rng.hpp"
#include "facells/seq_model/loss.hpp"
#include "facells/train_eval/attributes.hpp"
#include "facells/train_eval/dataset.hpp"
#include "facells/train_eval/experiment.hpp"
#include "facells/train_eval/split.hpp"
#include "facells/train_eval/toy.hpp"

using namespace facells;
using namespace facells::train_eval;

namespace {

std::vector<std::string> numbered_ids(std::size_t n) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back("id" + std::to_string(i));
  return ids;
}

ExperimentPlan small_plan() {
  ExperimentPlan p;
  p.config = "1bi(4)-ga-d1";
  p.attributes = {"glasses"};
  p.split = {0.7, 0.3};
  p.epochs = 3;
  p.lr = 0.01;
  p.batch_size = 16;
  return p;
}

}  // namespace

// ---- attributes ----

TEST(Attributes, TwoRowExample) {
  std::istringstream in("2\nMale Young\na.jpg 1 -1\nb.jpg -1 1\n");
  const auto t = load_attributes(in);
  ASSERT_EQ(t.rows(), 2u);
  EXPECT_EQ(t.names(), (std::vector<std::string>{"Male", "Young"}));
  const auto a = *t.row("a.jpg"), b = *t.row("b");
  EXPECT_EQ(t.target(a, 0), 1.0);
  EXPECT_EQ(t.target(a, 1), 0.0);
  EXPECT_EQ(t.target(b, 0), 0.0);
  EXPECT_EQ(t.target(b, 1), 1.0);
  EXPECT_FALSE(t.row("c").has_value());
}

TEST(Attributes, DeclaredZeroRows) {
  std::istringstream in("0\nMale Young\n");
  EXPECT_EQ(load_attributes(in).rows(), 0u);
}

TEST(Attributes, ShortRowNamesTheLine) {
  std::string names, row = "x.jpg";
  for (int i = 0; i < 40; ++i) names += "A" + std::to_string(i) + " ";
  for (int i = 0; i < 39; ++i) row += " 1";
  std::istringstream in("1\n" + names + "\n" + row + "\n");
  try {
    load_attributes(in);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(Attributes, BadValueNamesTheLine) {
  std::istringstream in("2\nMale\na.jpg 1\nb.jpg 0\n");
  try {
    load_attributes(in);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos) << e.what();
  }
}

TEST(Attributes, CountMismatchAndDuplicates) {
  std::istringstream short_body("3\nMale\na 1\n");
  EXPECT_THROW(load_attributes(short_body), DataError);
  std::istringstream dup("2\nMale\na 1\na -1\n");
  EXPECT_THROW(load_attributes(dup), DataError);
}

TEST(Attributes, WriteReadRoundTrip) {
  const auto drawings = make_toy_dataset(20, 3);
  const auto t = attributes_from_labels(drawings);
  std::stringstream ss;
  write_attributes(ss, t);
  const auto back = load_attributes(ss);
  EXPECT_EQ(back.names(), t.names());
  EXPECT_EQ(back.ids(), t.ids());
  for (std::size_t r = 0; r < t.rows(); ++r) {
    for (std::size_t c = 0; c < t.names().size(); ++c) EXPECT_EQ(back.value(r, c), t.value(r, c));
  }
}

TEST(Attributes, UnknownColumnListsNames) {
  AttributeTable t({"Male", "Young"});
  try {
    (void)t.column("Smiling");
    FAIL();
  } catch (const UsageError& e) {
    EXPECT_NE(std::string(e.what()).find("Young"), std::string::npos);
  }
}

// ---- split ----

TEST(Split, StageOneSizes) {
  const auto s = split(numbered_ids(100), {0.3, 0.15}, 42);
  EXPECT_EQ(s.train.size(), 30u);
  EXPECT_EQ(s.test.size(), 15u);
}

TEST(Split, LargeNinetyFiveFive) {
  const auto s = split(numbered_ids(200000), {0.95, 0.05}, 1);
  EXPECT_EQ(s.train.size(), 190000u);
  EXPECT_EQ(s.test.size(), 10000u);
}

TEST(Split, InvalidFractions) {
  EXPECT_THROW((SplitSpec{0.8, 0.3}.validate()), UsageError);
  EXPECT_THROW((SplitSpec{-0.1, 0.3}.validate()), UsageError);
  EXPECT_NO_THROW((SplitSpec{0.5, 0.5}.validate()));
}

TEST(Split, PropertyDeterministicDisjointFloorSizes) {
  Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = uniform_index(rng, 300);
    const double tr = uniform_unit(rng);
    const double te = uniform_unit(rng) * (1.0 - tr);
    const std::uint64_t seed = rng();
    const auto ids = numbered_ids(n);
    const auto a = split(ids, {tr, te}, seed);
    const auto b = split(ids, {tr, te}, seed);
    EXPECT_EQ(a.train, b.train);
    EXPECT_EQ(a.test, b.test);
    EXPECT_EQ(a.train.size(), static_cast<std::size_t>(std::floor(tr * n + 1e-7)));
    EXPECT_EQ(a.test.size(), static_cast<std::size_t>(std::floor(te * n + 1e-7)));
    std::set<std::string> seen(a.train.begin(), a.train.end());
    for (const auto& id : a.test) EXPECT_TRUE(seen.insert(id).second) << id;
    for (const auto& id : seen) EXPECT_TRUE(id.starts_with("id"));
  }
}

TEST(Split, InputOrderDoesNotMatterForSizes) {
  auto ids = numbered_ids(50);
  const auto a = split(ids, {0.5, 0.2}, 9);
  std::reverse(ids.begin(), ids.end());
  const auto b = split(ids, {0.5, 0.2}, 9);
  EXPECT_EQ(a.train.size(), b.train.size());
}

// ---- toy data ----

TEST(Toy, TwoDrawings) {
  const auto d = make_toy_dataset(2, 5);
  ASSERT_EQ(d.size(), 2u);
  for (const auto& x : d) {
    EXPECT_EQ(x.width(), 256.0);
    const int g = x.labels().at("glasses");
    EXPECT_TRUE(g == 1 || g == -1);
  }
  EXPECT_THROW(make_toy_dataset(1, 5), UsageError);
}

TEST(Toy, LabelBalance) {
  const auto d = make_toy_dataset(10000, 11);
  std::size_t g = 0;
  for (const auto& x : d) g += x.labels().at("glasses") == 1;
  EXPECT_NEAR(static_cast<double>(g) / 10000.0, 0.5, 0.02);
}

TEST(Toy, LensPointsStayInRegions) {
  const ToyLayout L;
  const auto regions = L.glasses_regions();
  const auto control = L.control_region();
  for (const auto& r : regions) {
    EXPECT_GT(sketch::distance(r.center, control.center), r.radius + control.radius);
  }
  EXPECT_NEAR(control.radius * control.radius,
              regions[0].radius * regions[0].radius + regions[1].radius * regions[1].radius, 1e-9);
  // Lens strokes are the only 17-point strokes.
  std::size_t lenses = 0;
  for (const auto& d : make_toy_dataset(500, 13)) {
    for (const auto& s : d.strokes()) {
      if (s.size() != 17) continue;
      ++lenses;
      for (const auto& p : s.points()) {
        EXPECT_TRUE(regions[0].contains(p) || regions[1].contains(p));
        EXPECT_FALSE(control.contains(p));
      }
    }
  }
  EXPECT_GT(lenses, 400u);
}

TEST(Toy, Deterministic) { EXPECT_EQ(make_toy_dataset(30, 4), make_toy_dataset(30, 4)); }

// ---- dataset plumbing ----

TEST(Dataset, DrawingSeedDependsOnIdOnly) {
  EXPECT_EQ(drawing_seed(1, "a"), drawing_seed(1, "a"));
  EXPECT_NE(drawing_seed(1, "a"), drawing_seed(1, "b"));
  EXPECT_NE(drawing_seed(1, "a"), drawing_seed(2, "a"));
}

TEST(Dataset, BatchesCoverEverySequenceOnce) {
  const auto d = make_toy_dataset(37, 2);
  const auto table = attributes_from_labels(d);
  const auto seqs = encode_all(d, {});
  const auto set = label(d, seqs, table, {table.column("glasses")});
  const auto batches = make_batches(set, 8);
  std::size_t total = 0;
  for (const auto& b : batches) {
    EXPECT_LE(b.size(), 8u);
    total += b.size();
  }
  EXPECT_EQ(total, 37u);
}

TEST(Dataset, MissingRowIsDataError) {
  const auto d = make_toy_dataset(3, 2);
  AttributeTable t({"glasses"});
  t.add_row(d[0].id(), {1});
  EXPECT_THROW(label(d, encode_all(d, {}), t, {0}), DataError);
}

// ---- plans ----

TEST(Plan, ParseAndRoundTrip) {
  std::istringstream in(
      "# toy\npreset = stage2\nformat = relative\nordering = random\nconfig = 1bi(8)-fs-d1\n"
      "attributes = glasses,smiling\nepochs = 4\nlr = 0.01\n");
  const auto p = ExperimentPlan::parse(in, 7);
  EXPECT_EQ(p.split.train, 0.95);
  EXPECT_EQ(p.encoding.format, sketch::Format::relative);
  EXPECT_EQ(p.seed, 7u);
  EXPECT_EQ(p.attributes.size(), 2u);
  std::istringstream again(p.to_text());
  const auto q = ExperimentPlan::parse(again);
  EXPECT_EQ(q.to_text(), p.to_text());
}

TEST(Plan, Presets) {
  const auto s1 = ExperimentPlan::preset("stage1");
  EXPECT_EQ(s1.split.train, 0.3);
  EXPECT_EQ(s1.split.test, 0.15);
  EXPECT_EQ(s1.attributes, std::vector<std::string>{"Male"});
  const auto s3 = ExperimentPlan::preset("stage3");
  EXPECT_TRUE(s3.attributes.empty());
  EXPECT_EQ(s3.config, "3bi(150)-ga-d1");
  EXPECT_THROW(ExperimentPlan::preset("stage4"), UsageError);
}

TEST(Plan, Errors) {
  for (const std::string text :
       {"colour = red\n", "epochs = -1\n", "lr = x\n", "train = 0.9\ntest = 0.2\n", "noequals\n",
        "config = 2bi-xx-d1\n", "batch_size = 0\n"}) {
    std::istringstream in(text);
    EXPECT_THROW(ExperimentPlan::parse(in), UsageError) << text;
  }
}

TEST(Plan, UnknownConfigListsValidNames) {
  std::istringstream in("config = 4tri-ga-d1\n");
  try {
    ExperimentPlan::parse(in);
    FAIL();
  } catch (const UsageError& e) {
    EXPECT_NE(std::string(e.what()).find("3bi-ga-d1"), std::string::npos) << e.what();
  }
}

TEST(Plan, Labels) {
  ExperimentPlan p;
  p.config = "1bi-ga-d1";
  EXPECT_EQ(p.label(), "absolute-sorted-1bi-ga-d1");
  p.encoding.ordering = path_order::OrderMethod::random;
  p.encoding.format = sketch::Format::relative;
  EXPECT_EQ(p.label(), "relative-unsorted-1bi-ga-d1");
  p.name = "mine";
  EXPECT_EQ(p.label(), "mine");
}

// ---- training ----

class Training : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    drawings_ = new std::vector<sketch::Drawing>(make_toy_dataset(120, 21));
    table_ = new AttributeTable(attributes_from_labels(*drawings_));
  }
  static void TearDownTestSuite() {
    delete drawings_;
    delete table_;
  }
  static std::vector<sketch::Drawing>* drawings_;
  static AttributeTable* table_;
};
std::vector<sketch::Drawing>* Training::drawings_ = nullptr;
AttributeTable* Training::table_ = nullptr;

TEST_F(Training, ZeroLearningRateKeepsMetricsConstant) {
  auto p = small_plan();
  p.lr = 0.0;
  const auto r = run_stage(p, *drawings_, *table_);
  ASSERT_EQ(r.metrics.size(), 6u);
  for (std::size_t i = 2; i < r.metrics.size(); ++i) {
    const auto& a = r.metrics[i % 2];
    const auto& b = r.metrics[i];
    EXPECT_EQ(a.split, b.split);
    EXPECT_EQ(a.loss, b.loss);
    EXPECT_EQ(a.balanced_accuracy[0], b.balanced_accuracy[0]);
  }
}

TEST_F(Training, SamePlanSameMetrics) {
  const auto a = run_stage(small_plan(), *drawings_, *table_);
  const auto b = run_stage(small_plan(), *drawings_, *table_);
  std::ostringstream ca, cb;
  write_metrics_csv(ca, a);
  write_metrics_csv(cb, b);
  EXPECT_EQ(ca.str(), cb.str());
  EXPECT_EQ(a.params.values, b.params.values);
}

TEST_F(Training, TrainLossFallsOverTwentyEpochs) {
  auto p = small_plan();
  p.epochs = 20;
  const auto r = run_stage(p, *drawings_, *table_);
  double first = NAN, last = NAN;
  for (const auto& m : r.metrics) {
    if (m.split != "train") continue;
    if (m.epoch == 1) first = m.loss;
    if (m.epoch == 20) last = m.loss;
  }
  EXPECT_LT(last, first);
}

TEST_F(Training, CallbackAndReportShape) {
  std::vector<std::string> seen;
  const auto r = run_stage(small_plan(), *drawings_, *table_, std::nullopt,
                           [&](const EpochMetrics& m) { seen.push_back(m.split); });
  EXPECT_EQ(seen.size(), 6u);
  EXPECT_EQ(r.train_size, 84u);
  EXPECT_EQ(r.test_size, 36u);
  std::ostringstream csv;
  write_metrics_csv(csv, r);
  EXPECT_TRUE(csv.str().starts_with("epoch,split,loss,ba_glasses\n"));
  const auto ck = r.checkpoint();
  EXPECT_EQ(ck.params.config.name(), "1bi(4)-ga-d1");
}

TEST_F(Training, InitMustMatchConfigAndBeFinite) {
  const auto r = run_stage(small_plan(), *drawings_, *table_);
  auto other = small_plan();
  other.config = "1bi(5)-ga-d1";
  EXPECT_THROW(run_stage(other, *drawings_, *table_, r.checkpoint()), UsageError);
  auto poisoned = r.checkpoint();
  poisoned.params.values[3] = std::nan("");
  EXPECT_THROW(run_stage(small_plan(), *drawings_, *table_, poisoned), NumericError);
}

TEST(Metrics, ConstantPredictorOnBalancedLabels) {
  const std::vector<double> targets{1, 0, 1, 0, 0, 1};
  for (double p : {0.1, 0.5, 0.9}) {
    const std::vector<double> probs(6, p);
    EXPECT_EQ(seq_model::balanced_accuracy(probs, targets), 0.5);
  }
}

// ---- comparison ----

TEST_F(Training, TwoByTwoMatrixShape) {
  std::vector<ExperimentPlan> plans;
  for (auto f : {sketch::Format::absolute, sketch::Format::relative}) {
    for (auto o : {path_order::OrderMethod::min_length, path_order::OrderMethod::random}) {
      auto p = small_plan();
      p.epochs = 10;
      p.encoding.format = f;
      p.encoding.ordering = o;
      plans.push_back(p);
    }
  }
  const auto rep = compare_matrix(plans, *drawings_, *table_);
  std::ostringstream csv;
  write_comparison_csv(csv, rep);
  std::istringstream lines(csv.str());
  std::string line;
  std::vector<std::string> rows;
  while (std::getline(lines, line)) rows.push_back(line);
  ASSERT_EQ(rows.size(), 11u);
  EXPECT_EQ(rows[0],
            "epoch,absolute-sorted-1bi(4)-ga-d1,absolute-unsorted-1bi(4)-ga-d1,"
            "relative-sorted-1bi(4)-ga-d1,relative-unsorted-1bi(4)-ga-d1");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_EQ(std::count(rows[i].begin(), rows[i].end(), ','), 4);
  }
  std::set<std::size_t> ranked(rep.ranking.begin(), rep.ranking.end());
  EXPECT_EQ(ranked.size(), 4u);
}

TEST_F(Training, IdenticalPlansGiveIdenticalColumns) {
  const auto rep = compare_matrix({small_plan(), small_plan()}, *drawings_, *table_);
  for (const auto& row : rep.test_loss) EXPECT_EQ(row[0], row[1]);
  EXPECT_NE(rep.labels[0], rep.labels[1]);
}

TEST_F(Training, PlansDifferingInDataAreRejected) {
  auto a = small_plan(), b = small_plan();
  b.seed = 43;
  EXPECT_THROW(compare_matrix({a, b}, *drawings_, *table_), UsageError);
  b = small_plan();
  b.split = {0.6, 0.3};
  EXPECT_THROW(compare_matrix({a, b}, *drawings_, *table_), UsageError);
  EXPECT_THROW(compare_matrix({a}, *drawings_, *table_), UsageError);
}
