// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "facells/seq_model/gradcheck.hpp"
#include "facells/sketch/encoding.hpp"

using namespace facells::seq_model;

TEST(GradCheck, RelativeErrorDefinition) {
  EXPECT_NEAR(relative_error(1.0, 1.1, 1e-4), 0.1 / 1.1, 1e-15);
  EXPECT_DOUBLE_EQ(relative_error(-2.0, 2.0, 1e-4), 2.0);
  // Below the floor the error is absolute / floor.
  EXPECT_DOUBLE_EQ(relative_error(1e-9, 3e-9, 1e-4), 2e-9 / 1e-4);
  EXPECT_EQ(relative_error(0.0, 0.0, 1e-4), 0.0);
}

TEST(GradCheck, RandomBatchesFollowThePenGrammar) {
  facells::Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto b = random_batch(rng, 4, 2, 9, 3);
    ASSERT_NO_THROW(b.validate());
    EXPECT_EQ(b.targets.size(), 12u);
    for (std::size_t i = 0; i < b.size(); ++i) {
      EXPECT_GE(b.lengths[i], 2u);
      EXPECT_LE(b.lengths[i], 9u);
      std::vector<facells::sketch::Triple> tr;
      const auto row = b.row(i);
      for (std::size_t t = 0; t < b.lengths[i]; ++t) {
        tr.push_back({row[3 * t], row[3 * t + 1], static_cast<facells::sketch::PenState>(row[3 * t + 2])});
      }
      EXPECT_FALSE(facells::sketch::pen_grammar_violation(tr).has_value());
    }
  }
}

class NamedConfigGradients : public ::testing::TestWithParam<std::string> {};

TEST_P(NamedConfigGradients, AnalyticMatchesFiniteDifferences) {
  // Same architecture family at a width of 3 cells and a 5-unit hidden layer.
  std::string name = GetParam();
  name.insert(3, "(3)");
  if (const auto pos = name.find("d40"); pos != std::string::npos) name.replace(pos, 3, "d5");
  GradCheckOptions opt;
  opt.batches = 3;
  const auto r = gradient_check(parse_config_name(name, 2), opt);
  EXPECT_LT(r.max_rel_error, 1e-5) << name << " worst block " << r.worst_block;
  EXPECT_GT(r.checked, 0u);
}

INSTANTIATE_TEST_SUITE_P(All, NamedConfigGradients, ::testing::ValuesIn(named_configs()),
                         [](const auto& info) {
                           std::string n = info.param;
                           for (char& c : n) {
                             if (c == '-') c = '_';
                           }
                           return n;
                         });

TEST(GradCheck, UnidirectionalStack) {
  GradCheckOptions opt;
  opt.batches = 2;
  EXPECT_LT(gradient_check(parse_config_name("2uni(4)-fs-d3"), opt).max_rel_error, 1e-5);
}

TEST(GradCheck, AcceptanceConfigsAtReducedWidth) {
  const auto cfgs = gradcheck_configs(8);
  ASSERT_EQ(cfgs.size(), 5u);
  EXPECT_EQ(cfgs[0].name(), "1bi(8)-fs-d1");
  EXPECT_EQ(cfgs[4].name(), "3bi(8)-ga-d40");
}
