// SPDX-License-Identifier: Apache-2.0
#pragma once

// Staged training runs and the format x ordering x config comparison.
//
// Plan files are flat key=value text ('#' starts a comment):
//   preset      = stage1 | stage2 | stage3   (applied before the other keys)
//   name        = free text, used as the column label in comparisons
//   format      = absolute | relative
//   ordering    = min | random | identity
//   coords      = normalized | raw
//   config      = e.g. 3bi-ga-d1, 1bi(16)-ga-d1
//   attributes  = comma-separated names; empty = every column of the table
//   train, test = split fractions
//   epochs, seed, lr, batch_size, clip, exact_max

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "facells/seq_model/adam.hpp"
#include "facells/seq_model/checkpoint.hpp"
#include "facells/seq_model/params.hpp"
#include "facells/train_eval/attributes.hpp"
#include "facells/train_eval/dataset.hpp"
#include "facells/train_eval/split.hpp"

namespace facells::train_eval {

struct ExperimentPlan {
  std::string name;
  EncodingSpec encoding;
  std::string config = "3bi-ga-d1";
  std::vector<std::string> attributes;
  SplitSpec split;
  std::size_t epochs = 10;
  std::uint64_t seed = 42;
  double lr = 1e-3;
  std::size_t batch_size = 32;
  double clip = 5.0;

  /// stage1: 30/15 split, single attribute "Male"; stage2: 95/5, "Male";
  /// stage3: 95/5, every attribute, 3bi(150)-ga-d1 multilabel.
  static ExperimentPlan preset(const std::string& name);
  /// Throws UsageError on unknown keys, bad values or an unknown config.
  /// `default_seed` applies when the text sets no seed.
  static ExperimentPlan parse(std::istream& in, std::uint64_t default_seed = 42);
  static ExperimentPlan load(const std::filesystem::path& path, std::uint64_t default_seed = 42);

  void validate() const;
  /// name if set, else "<format>-<sorted|unsorted|identity>-<config>".
  std::string label() const;
  /// key=value text that parse() reads back to the same plan.
  std::string to_text() const;
};

struct EpochMetrics {
  std::size_t epoch = 0;
  std::string split;  ///< "train" or "test"
  double loss = 0.0;
  /// Per attribute; NaN when the split holds a single class.
  std::vector<double> balanced_accuracy;
};

struct StageReport {
  ExperimentPlan plan;
  std::vector<std::string> attributes;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  std::vector<EpochMetrics> metrics;
  seq_model::ModelParams params;
  seq_model::AdamState optimizer;

  /// The last recorded metrics for a split; throws UsageError if none.
  const EpochMetrics& last(const std::string& split) const;
  /// Attributes whose final test balanced accuracy exceeds 0.5.
  std::vector<std::string> eligible_attributes() const;
  /// Checkpoint carrying the plan and attribute names as metadata.
  seq_model::Checkpoint checkpoint() const;
};

using EpochCallback = std::function<void(const EpochMetrics&)>;

/// Trains plan.config on the drawings that have a row in `table`. After
/// every epoch both splits are evaluated in a fixed order. `init`, when
/// given, supplies starting parameters (and optimizer state); its config
/// must match the plan. Throws NumericError on a non-finite loss or
/// non-finite initial parameters.
StageReport run_stage(const ExperimentPlan& plan, const std::vector<sketch::Drawing>& drawings,
                      const AttributeTable& table,
                      const std::optional<seq_model::Checkpoint>& init = std::nullopt,
                      const EpochCallback& on_epoch = {});

/// Loss and per-attribute balanced accuracy of a model over a labeled set.
EpochMetrics evaluate(const seq_model::ModelParams& params, const LabeledSet& set,
                      std::size_t batch_size = 64);

/// Columns: epoch, split, loss, ba_<attribute>...
void write_metrics_csv(std::ostream& out, const StageReport& report);

struct ComparisonReport {
  std::vector<std::string> labels;               ///< one per plan
  std::vector<std::vector<double>> test_loss;    ///< [epoch][plan]
  std::vector<std::size_t> ranking;              ///< plan indices, best final test loss first
  std::vector<StageReport> stages;
};

/// Runs every plan and aligns their per-epoch test losses. Plans must agree
/// on everything that selects data (split, seed, epochs, attributes,
/// coordinates); otherwise UsageError. Needs at least two plans.
ComparisonReport compare_matrix(const std::vector<ExperimentPlan>& plans,
                                const std::vector<sketch::Drawing>& drawings,
                                const AttributeTable& table);

/// Columns: epoch, then one test-loss column per plan.
void write_comparison_csv(std::ostream& out, const ComparisonReport& report);
/// One line per plan in ranking order: "<rank> <label> <final test loss>".
void write_ranking(std::ostream& out, const ComparisonReport& report);

}  // namespace facells::train_eval
