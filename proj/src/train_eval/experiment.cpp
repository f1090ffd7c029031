// SPDX-License-Identifier: Apache-2.0
#include "facells/train_eval/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "facells/error.hpp"
#include "facells/parallel.hpp"
#include "facells/rng.hpp"
#include "facells/seq_model/loss.hpp"
#include "facells/seq_model/network.hpp"

namespace facells::train_eval {

namespace sm = facells::seq_model;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw UsageError("plan key '" + key + "': '" + v + "' is not a number");
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& v) {
  if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos) {
    throw UsageError("plan key '" + key + "': '" + v + "' is not a non-negative integer");
  }
  try {
    return std::stoull(v);
  } catch (const std::exception&) {
    throw UsageError("plan key '" + key + "': '" + v + "' is out of range");
  }
}

void apply(ExperimentPlan& p, const std::string& key, const std::string& v) {
  if (key == "name") p.name = v;
  else if (key == "format") p.encoding.format = sketch::parse_format(v);
  else if (key == "ordering") p.encoding.ordering = path_order::parse_order_method(v);
  else if (key == "coords") p.encoding.coords = sketch::parse_coord_mode(v);
  else if (key == "config") p.config = v;
  else if (key == "attributes") p.attributes = split_list(v);
  else if (key == "train") p.split.train = parse_double(key, v);
  else if (key == "test") p.split.test = parse_double(key, v);
  else if (key == "epochs") p.epochs = parse_unsigned(key, v);
  else if (key == "seed") p.seed = parse_unsigned(key, v);
  else if (key == "lr") p.lr = parse_double(key, v);
  else if (key == "batch_size") p.batch_size = parse_unsigned(key, v);
  else if (key == "clip") p.clip = parse_double(key, v);
  else if (key == "exact_max") p.encoding.exact_max = parse_unsigned(key, v);
  else throw UsageError("unknown plan key '" + key + "'");
}

std::string fmt(double v) {
  if (std::isnan(v)) return "NA";
  std::ostringstream ss;
  ss << std::setprecision(12) << v;
  return ss.str();
}

std::string ordering_label(path_order::OrderMethod m) {
  switch (m) {
    case path_order::OrderMethod::min_length: return "sorted";
    case path_order::OrderMethod::random: return "unsorted";
    case path_order::OrderMethod::identity: return "identity";
  }
  return "?";
}

std::vector<std::size_t> resolve_columns(const ExperimentPlan& plan, const AttributeTable& table,
                                         std::vector<std::string>& names) {
  std::vector<std::size_t> cols;
  if (plan.attributes.empty()) {
    for (std::size_t c = 0; c < table.names().size(); ++c) cols.push_back(c);
  } else {
    for (const auto& a : plan.attributes) cols.push_back(table.column(a));
  }
  names.clear();
  for (std::size_t c : cols) names.push_back(table.names()[c]);
  if (cols.empty()) throw UsageError("the attribute table has no columns");
  return cols;
}

}  // namespace

ExperimentPlan ExperimentPlan::preset(const std::string& name) {
  ExperimentPlan p;
  if (name == "stage1") {
    p.split = {0.30, 0.15};
    p.attributes = {"Male"};
  } else if (name == "stage2") {
    p.split = {0.95, 0.05};
    p.attributes = {"Male"};
  } else if (name == "stage3") {
    p.split = {0.95, 0.05};
    p.attributes = {};
    p.config = "3bi(150)-ga-d1";
  } else {
    throw UsageError("unknown preset '" + name + "'; expected stage1, stage2 or stage3");
  }
  return p;
}

ExperimentPlan ExperimentPlan::parse(std::istream& in, std::uint64_t default_seed) {
  std::vector<std::pair<std::string, std::string>> kv;
  std::string line;
  std::size_t lineno = 0;
  std::optional<std::string> preset_name;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError("plan line " + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "preset") preset_name = value;
    else kv.emplace_back(key, value);
  }
  ExperimentPlan p = preset_name ? preset(*preset_name) : ExperimentPlan{};
  p.seed = default_seed;
  for (const auto& [k, v] : kv) apply(p, k, v);
  p.validate();
  return p;
}

ExperimentPlan ExperimentPlan::load(const std::filesystem::path& path,
                                    std::uint64_t default_seed) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open plan " + path.string());
  return parse(in, default_seed);
}

void ExperimentPlan::validate() const {
  split.validate();
  sm::parse_config_name(config, 1);
  if (batch_size == 0) throw UsageError("batch_size must be positive");
  if (!(lr >= 0.0) || !std::isfinite(lr)) throw UsageError("lr must be finite and >= 0");
  if (!(clip > 0.0)) throw UsageError("clip must be positive");
  if (std::set<std::string>(attributes.begin(), attributes.end()).size() != attributes.size()) {
    throw UsageError("attributes listed twice");
  }
}

std::string ExperimentPlan::label() const {
  if (!name.empty()) return name;
  return sketch::format_name(encoding.format) + "-" + ordering_label(encoding.ordering) + "-" +
         config;
}

std::string ExperimentPlan::to_text() const {
  std::ostringstream ss;
  ss << std::setprecision(17);
  if (!name.empty()) ss << "name=" << name << '\n';
  ss << "format=" << sketch::format_name(encoding.format) << '\n'
     << "ordering=" << path_order::order_method_name(encoding.ordering) << '\n'
     << "coords=" << sketch::coord_mode_name(encoding.coords) << '\n'
     << "config=" << config << '\n'
     << "attributes=";
  for (std::size_t i = 0; i < attributes.size(); ++i) ss << (i ? "," : "") << attributes[i];
  ss << '\n'
     << "train=" << split.train << '\n'
     << "test=" << split.test << '\n'
     << "epochs=" << epochs << '\n'
     << "seed=" << seed << '\n'
     << "lr=" << lr << '\n'
     << "batch_size=" << batch_size << '\n'
     << "clip=" << clip << '\n'
     << "exact_max=" << encoding.exact_max << '\n';
  return ss.str();
}

const EpochMetrics& StageReport::last(const std::string& split) const {
  for (auto it = metrics.rbegin(); it != metrics.rend(); ++it) {
    if (it->split == split) return *it;
  }
  throw UsageError("no metrics recorded for split '" + split + "'");
}

std::vector<std::string> StageReport::eligible_attributes() const {
  std::vector<std::string> out;
  if (metrics.empty()) return out;
  const auto& m = last("test");
  for (std::size_t k = 0; k < attributes.size(); ++k) {
    if (m.balanced_accuracy[k] > 0.5) out.push_back(attributes[k]);
  }
  return out;
}

sm::Checkpoint StageReport::checkpoint() const {
  sm::Checkpoint ck;
  ck.params = params;
  ck.optimizer = optimizer;
  ck.metadata = {
      {"attributes", attributes},
      {"format", sketch::format_name(plan.encoding.format)},
      {"coords", sketch::coord_mode_name(plan.encoding.coords)},
      {"ordering", path_order::order_method_name(plan.encoding.ordering)},
      {"seed", plan.seed},
      {"exact_max", plan.encoding.exact_max},
      {"config_name", params.config.name()},
  };
  return ck;
}

EpochMetrics evaluate(const sm::ModelParams& params, const LabeledSet& set,
                      std::size_t batch_size) {
  EpochMetrics m;
  const std::size_t k_out = set.outputs;
  m.balanced_accuracy.assign(k_out, std::numeric_limits<double>::quiet_NaN());
  if (set.size() == 0) {
    m.loss = std::numeric_limits<double>::quiet_NaN();
    return m;
  }
  std::vector<double> probs;
  std::vector<double> targets;
  for (const auto& batch : make_batches(set, batch_size)) {
    const auto out = sm::forward(params, batch);
    probs.insert(probs.end(), out.probs.begin(), out.probs.end());
    targets.insert(targets.end(), batch.targets.begin(), batch.targets.end());
  }
  m.loss = sm::bce_loss(probs, targets);
  const std::size_t n = set.size();
  for (std::size_t k = 0; k < k_out; ++k) {
    std::vector<double> p(n), t(n);
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = probs[i * k_out + k];
      t[i] = targets[i * k_out + k];
    }
    try {
      m.balanced_accuracy[k] = sm::balanced_accuracy(p, t);
    } catch (const sm::UndefinedClass&) {
    }
  }
  return m;
}

StageReport run_stage(const ExperimentPlan& plan, const std::vector<sketch::Drawing>& drawings,
                      const AttributeTable& table, const std::optional<sm::Checkpoint>& init,
                      const EpochCallback& on_epoch) {
  plan.validate();
  StageReport report;
  report.plan = plan;
  const auto columns = resolve_columns(plan, table, report.attributes);
  const auto cfg = sm::parse_config_name(plan.config, columns.size());

  // Only drawings with an attribute row take part.
  std::vector<sketch::Drawing> labeled;
  std::vector<std::string> ids;
  for (const auto& d : drawings) {
    if (table.row(d.id())) {
      labeled.push_back(d);
      ids.push_back(d.id());
    }
  }
  if (std::set<std::string>(ids.begin(), ids.end()).size() != ids.size()) {
    throw DataError("duplicate drawing ids in the data");
  }
  const Split parts = split(ids, plan.split, plan.seed);
  std::map<std::string, std::size_t> where;
  for (std::size_t i = 0; i < labeled.size(); ++i) where[labeled[i].id()] = i;
  auto subset = [&](const std::vector<std::string>& which) {
    std::vector<sketch::Drawing> ds;
    for (const auto& id : which) ds.push_back(labeled[where.at(id)]);
    EncodingSpec enc = plan.encoding;
    enc.seed = plan.seed;
    return label(ds, encode_all(ds, enc), table, columns);
  };
  const LabeledSet train = subset(parts.train);
  const LabeledSet test = subset(parts.test);
  report.train_size = train.size();
  report.test_size = test.size();
  if (train.size() == 0) throw DataError("the training split is empty");

  if (init) {
    if (!(init->params.config == cfg)) {
      throw UsageError("initial checkpoint is " + init->params.config.name() + ", plan wants " +
                       cfg.name());
    }
    init->params.check_finite();
    report.params = init->params;
    report.optimizer = init->optimizer.value_or(sm::AdamState::zeros(report.params.values.size()));
  } else {
    report.params = sm::ModelParams::init(cfg, plan.seed);
    report.optimizer = sm::AdamState::zeros(report.params.values.size());
  }

  const auto batches = make_batches(train, plan.batch_size);
  const sm::AdamConfig adam{.lr = plan.lr};
  std::vector<std::size_t> order(batches.size());
  for (std::size_t epoch = 1; epoch <= plan.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    Rng rng(plan.seed ^ (0x5851f42d4c957f2dull * epoch));
    shuffle(order, rng);
    for (std::size_t b : order) {
      auto lg = sm::loss_and_gradient(report.params, batches[b]);
      if (!std::isfinite(lg.loss)) {
        throw NumericError("non-finite training loss in epoch " + std::to_string(epoch));
      }
      sm::clip_global_norm(lg.grad, plan.clip);
      sm::adam_step(report.params.values, lg.grad, report.optimizer, adam);
    }
    for (const auto* which : {&train, &test}) {
      EpochMetrics m = evaluate(report.params, *which);
      m.epoch = epoch;
      m.split = which == &train ? "train" : "test";
      if (which == &train && !std::isfinite(m.loss)) {
        throw NumericError("non-finite training loss after epoch " + std::to_string(epoch));
      }
      if (on_epoch) on_epoch(m);
      report.metrics.push_back(std::move(m));
    }
  }
  return report;
}

void write_metrics_csv(std::ostream& out, const StageReport& report) {
  out << "epoch,split,loss";
  for (const auto& a : report.attributes) out << ",ba_" << a;
  out << '\n';
  for (const auto& m : report.metrics) {
    out << m.epoch << ',' << m.split << ',' << fmt(m.loss);
    for (double ba : m.balanced_accuracy) out << ',' << fmt(ba);
    out << '\n';
  }
}

ComparisonReport compare_matrix(const std::vector<ExperimentPlan>& plans,
                                const std::vector<sketch::Drawing>& drawings,
                                const AttributeTable& table) {
  if (plans.size() < 2) throw UsageError("a comparison needs at least two plans");
  const ExperimentPlan& ref = plans.front();
  for (const auto& p : plans) {
    if (p.split.train != ref.split.train || p.split.test != ref.split.test || p.seed != ref.seed ||
        p.epochs != ref.epochs || p.attributes != ref.attributes ||
        p.encoding.coords != ref.encoding.coords) {
      throw UsageError("plan '" + p.label() + "' differs from '" + ref.label() +
                       "' in its data (split, seed, epochs, attributes or coords)");
    }
  }
  ComparisonReport rep;
  std::map<std::string, int> seen;
  for (const auto& p : plans) {
    std::string l = p.label();
    if (const int n = ++seen[l]; n > 1) l += "#" + std::to_string(n);
    rep.labels.push_back(l);
    rep.stages.push_back(run_stage(p, drawings, table));
  }
  rep.test_loss.assign(ref.epochs, std::vector<double>(plans.size()));
  for (std::size_t j = 0; j < plans.size(); ++j) {
    for (const auto& m : rep.stages[j].metrics) {
      if (m.split == "test") rep.test_loss[m.epoch - 1][j] = m.loss;
    }
  }
  rep.ranking.resize(plans.size());
  std::iota(rep.ranking.begin(), rep.ranking.end(), 0);
  if (ref.epochs > 0) {
    const auto& final_row = rep.test_loss.back();
    std::stable_sort(rep.ranking.begin(), rep.ranking.end(),
                     [&](std::size_t a, std::size_t b) { return final_row[a] < final_row[b]; });
  }
  return rep;
}

void write_comparison_csv(std::ostream& out, const ComparisonReport& report) {
  out << "epoch";
  for (const auto& l : report.labels) out << ',' << l;
  out << '\n';
  for (std::size_t e = 0; e < report.test_loss.size(); ++e) {
    out << e + 1;
    for (double v : report.test_loss[e]) out << ',' << fmt(v);
    out << '\n';
  }
}

void write_ranking(std::ostream& out, const ComparisonReport& report) {
  for (std::size_t r = 0; r < report.ranking.size(); ++r) {
    const std::size_t j = report.ranking[r];
    const double final_loss =
        report.test_loss.empty() ? std::numeric_limits<double>::quiet_NaN() : report.test_loss.back()[j];
    out << r + 1 << ' ' << report.labels[j] << ' ' << fmt(final_loss) << '\n';
  }
}

}  // namespace facells::train_eval
