// SPDX-License-Identifier: Apache-2.0
#include "facells/cli/dispatch.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "facells/error.hpp"
#include "facells/facells/compose.hpp"
#include "facells/facells/scores.hpp"
#include "facells/parallel.hpp"
#include "facells/path_order/path_order.hpp"
#include "facells/seq_model/checkpoint.hpp"
#include "facells/seq_model/gradcheck.hpp"
#include "facells/sketch/sketch_io.hpp"
#include "facells/train_eval/experiment.hpp"
#include "facells/train_eval/toy.hpp"
#include "facells/vectorizer/vectorize.hpp"

namespace facells::cli {

namespace fs = std::filesystem;
namespace sm = facells::seq_model;
namespace te = facells::train_eval;

namespace {

struct Global {
  std::uint64_t seed = 42;
  std::size_t threads = 0;
  int verbose = 0;
};

// key=value pairs collected for the STATUS line.
class Status {
 public:
  template <typename T>
  void set(const std::string& key, const T& value) {
    std::ostringstream ss;
    ss << std::setprecision(10) << value;
    fields_.emplace_back(key, ss.str());
  }
  std::string line() const {
    std::string s = "STATUS";
    for (const auto& [k, v] : fields_) s += " " + k + "=" + v;
    return s;
  }

 private:
  std::vector<std::pair<std::string, std::string>> fields_;
};

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
}

std::string slurp_stream(const std::function<void(std::ostream&)>& f) {
  std::ostringstream ss;
  f(ss);
  return ss.str();
}

te::AttributeTable load_table(const std::string& attrs_path,
                              const std::vector<sketch::Drawing>& drawings) {
  return attrs_path.empty() ? te::attributes_from_labels(drawings) : te::load_attributes(attrs_path);
}

// A trained model plus the encoding it was trained on.
struct LoadedModel {
  sm::Checkpoint checkpoint;
  te::EncodingSpec encoding;
  std::vector<std::string> attributes;

  std::size_t column(const std::string& name) const {
    for (std::size_t k = 0; k < attributes.size(); ++k) {
      if (attributes[k] == name) return k;
    }
    std::string known;
    for (const auto& a : attributes) known += " " + a;
    throw UsageError("the model has no output '" + name + "'; outputs:" + known);
  }
};

LoadedModel load_model(const std::string& path, const Global& g) {
  LoadedModel m{sm::load_checkpoint(path), {}, {}};
  m.checkpoint.params.check_finite();
  const auto& meta = m.checkpoint.metadata;
  m.encoding.seed = g.seed;
  try {
    if (meta.contains("format")) m.encoding.format = sketch::parse_format(meta.at("format"));
    if (meta.contains("coords")) m.encoding.coords = sketch::parse_coord_mode(meta.at("coords"));
    if (meta.contains("ordering")) {
      m.encoding.ordering = path_order::parse_order_method(meta.at("ordering"));
    }
    if (meta.contains("seed")) m.encoding.seed = meta.at("seed").get<std::uint64_t>();
    if (meta.contains("exact_max")) m.encoding.exact_max = meta.at("exact_max").get<std::size_t>();
    if (meta.contains("attributes")) {
      m.attributes = meta.at("attributes").get<std::vector<std::string>>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("checkpoint metadata: ") + e.what());
  }
  const std::size_t outputs = m.checkpoint.params.config.outputs;
  if (m.attributes.empty()) {
    for (std::size_t k = 0; k < outputs; ++k) m.attributes.push_back("out" + std::to_string(k));
  }
  if (m.attributes.size() != outputs) {
    throw DataError("checkpoint metadata names " + std::to_string(m.attributes.size()) +
                    " attributes for " + std::to_string(outputs) + " outputs");
  }
  return m;
}

// Drawings reordered the way the model saw them during training, with
// their per-point scores.
std::vector<scoring::ScoredDrawing> score_all(const LoadedModel& m,
                                              const std::vector<sketch::Drawing>& drawings) {
  const auto ordered = te::order_all(drawings, m.encoding);
  std::vector<std::optional<scoring::ScoredDrawing>> slots(ordered.size());
  parallel_for(ordered.size(), [&](std::size_t i) {
    const auto seq = sketch::encode(ordered[i], m.encoding.format, m.encoding.coords);
    slots[i] = scoring::ScoredDrawing{ordered[i], scoring::per_point_scores(
                                                      m.checkpoint.params, seq, ordered[i].id())};
  });
  std::vector<scoring::ScoredDrawing> out;
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss << std::setprecision(12) << v;
  return ss.str();
}

// ---- subcommands ---------------------------------------------------------

struct VectorizeArgs {
  std::vector<std::string> inputs;
  std::string out;
  std::string svg_dir;
  vectorizer::VectorizeConfig cfg;
};

void cmd_vectorize(const VectorizeArgs& a, const Global&, std::ostream&, Status& st) {
  a.cfg.validate();
  std::vector<sketch::Drawing> drawings;
  std::size_t strokes = 0;
  std::vector<fs::path> files;
  for (const auto& in : a.inputs) {
    if (fs::is_directory(in)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(in)) {
        if (e.is_regular_file() && e.path().extension() == ".pgm") found.push_back(e.path());
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.emplace_back(in);
    }
  }
  for (const auto& in : files) {
    const auto img = vectorizer::read_pgm(in);
    drawings.push_back(vectorizer::vectorize(img, a.cfg, in.stem().string()));
    strokes += drawings.back().strokes().size();
  }
  sketch::write_jsonl(a.out, drawings);
  if (!a.svg_dir.empty()) {
    for (const auto& d : drawings) write_text(fs::path(a.svg_dir) / (d.id() + ".svg"), sketch::to_svg(d));
  }
  st.set("drawings", drawings.size());
  st.set("strokes", strokes);
}

struct OrderArgs {
  std::string in, out, stats;
  std::string method = "min";
  std::size_t exact_max = path_order::kExactMaxStrokes;
};

void cmd_order(const OrderArgs& a, const Global& g, std::ostream& out, Status& st) {
  te::EncodingSpec enc;
  enc.ordering = path_order::parse_order_method(a.method);
  enc.seed = g.seed;
  enc.exact_max = a.exact_max;
  const auto drawings = sketch::read_jsonl(a.in);
  const auto ordered = te::order_all(drawings, enc);
  sketch::write_jsonl(a.out, ordered);
  double before = 0.0, after = 0.0;
  std::ostringstream csv;
  csv << "id,strokes,pen_up_before,pen_up_after\n";
  for (std::size_t i = 0; i < drawings.size(); ++i) {
    const double b = sketch::pen_up_length(drawings[i]);
    const double f = sketch::pen_up_length(ordered[i]);
    before += b;
    after += f;
    csv << drawings[i].id() << ',' << drawings[i].strokes().size() << ',' << fmt(b) << ','
        << fmt(f) << '\n';
  }
  if (a.stats.empty()) out << csv.str();
  else write_text(a.stats, csv.str());
  st.set("drawings", drawings.size());
  st.set("method", path_order::order_method_name(enc.ordering));
  st.set("pen_up_before", fmt(before));
  st.set("pen_up_after", fmt(after));
}

struct EncodeArgs {
  std::string in, out;
  std::string format = "absolute";
  std::string coords = "normalized";
};

void cmd_encode(const EncodeArgs& a, const Global&, std::ostream&, Status& st) {
  const auto format = sketch::parse_format(a.format);
  const auto coords = sketch::parse_coord_mode(a.coords);
  const auto drawings = sketch::read_jsonl(a.in);
  std::ostringstream ss;
  std::size_t points = 0;
  for (const auto& d : drawings) {
    const auto seq = sketch::encode(d, format, coords);
    points += seq.triples.size();
    ss << sketch::to_json(seq, d.id()).dump() << '\n';
  }
  write_text(a.out, ss.str());
  st.set("sequences", drawings.size());
  st.set("points", points);
}

struct ToyArgs {
  std::size_t n = 2000;
  std::string out, attrs;
};

void cmd_make_toy(const ToyArgs& a, const Global& g, std::ostream&, Status& st) {
  const auto drawings = te::make_toy_dataset(a.n, g.seed);
  sketch::write_jsonl(a.out, drawings);
  if (!a.attrs.empty()) {
    const auto table = te::attributes_from_labels(drawings);
    write_text(a.attrs, slurp_stream([&](std::ostream& o) { te::write_attributes(o, table); }));
  }
  std::size_t with_glasses = 0;
  for (const auto& d : drawings) with_glasses += d.labels().at("glasses") > 0;
  st.set("drawings", drawings.size());
  st.set("glasses", with_glasses);
}

struct TrainArgs {
  std::string plan, data, attrs, out, init;
};

void cmd_train(const TrainArgs& a, const Global& g, std::ostream& log, Status& st) {
  const auto plan = te::ExperimentPlan::load(a.plan, g.seed);
  std::optional<sm::Checkpoint> init;
  if (!a.init.empty()) init = sm::load_checkpoint(a.init);
  const auto drawings = sketch::read_jsonl(a.data);
  const auto table = load_table(a.attrs, drawings);
  auto progress = [&](const te::EpochMetrics& m) {
    if (g.verbose > 0) log << "epoch " << m.epoch << ' ' << m.split << " loss " << m.loss << '\n';
  };
  const auto report = te::run_stage(plan, drawings, table, init, progress);
  const fs::path dir(a.out);
  fs::create_directories(dir);
  write_text(dir / "metrics.csv",
             slurp_stream([&](std::ostream& o) { te::write_metrics_csv(o, report); }));
  sm::save_checkpoint(dir / "checkpoint.json", report.checkpoint());
  std::string eligible;
  for (const auto& e : report.eligible_attributes()) eligible += e + "\n";
  write_text(dir / "eligible_attributes.txt", eligible);
  write_text(dir / "plan.txt", plan.to_text());
  st.set("config", report.params.config.name());
  st.set("train", report.train_size);
  st.set("test", report.test_size);
  st.set("epochs", plan.epochs);
  if (!report.metrics.empty()) {
    st.set("train_loss", fmt(report.last("train").loss));
    st.set("test_loss", fmt(report.last("test").loss));
  }
  st.set("eligible", report.eligible_attributes().size());
}

struct EvalArgs {
  std::string checkpoint, data, attrs, out;
};

void cmd_eval(const EvalArgs& a, const Global& g, std::ostream& out, Status& st) {
  const auto m = load_model(a.checkpoint, g);
  const auto drawings = sketch::read_jsonl(a.data);
  const auto table = load_table(a.attrs, drawings);
  std::vector<std::size_t> columns;
  for (const auto& name : m.attributes) columns.push_back(table.column(name));
  std::vector<sketch::Drawing> labeled;
  for (const auto& d : drawings) {
    if (table.row(d.id())) labeled.push_back(d);
  }
  const auto set = te::label(labeled, te::encode_all(labeled, m.encoding), table, columns);
  const auto metrics = te::evaluate(m.checkpoint.params, set);
  std::ostringstream csv;
  csv << "attribute,balanced_accuracy\n";
  for (std::size_t k = 0; k < m.attributes.size(); ++k) {
    csv << m.attributes[k] << ',' << fmt(metrics.balanced_accuracy[k]) << '\n';
    out << m.attributes[k] << " balanced_accuracy " << fmt(metrics.balanced_accuracy[k]) << '\n';
  }
  if (!a.out.empty()) write_text(a.out, csv.str());
  st.set("drawings", set.size());
  st.set("loss", fmt(metrics.loss));
}

struct CompareArgs {
  std::vector<std::string> plans;
  std::string matrix, data, attrs, out;
};

void cmd_compare(const CompareArgs& a, const Global& g, std::ostream& out, Status& st) {
  std::vector<te::ExperimentPlan> plans;
  for (const auto& p : a.plans) plans.push_back(te::ExperimentPlan::load(p, g.seed));
  if (!a.matrix.empty()) {
    const auto base = te::ExperimentPlan::load(a.matrix, g.seed);
    for (auto format : {sketch::Format::absolute, sketch::Format::relative}) {
      for (auto ordering : {path_order::OrderMethod::min_length, path_order::OrderMethod::random}) {
        te::ExperimentPlan p = base;
        p.name.clear();
        p.encoding.format = format;
        p.encoding.ordering = ordering;
        plans.push_back(p);
      }
    }
  }
  const auto drawings = sketch::read_jsonl(a.data);
  const auto table = load_table(a.attrs, drawings);
  const auto rep = te::compare_matrix(plans, drawings, table);
  const fs::path dir(a.out);
  fs::create_directories(dir);
  write_text(dir / "comparison.csv",
             slurp_stream([&](std::ostream& o) { te::write_comparison_csv(o, rep); }));
  const std::string ranking = slurp_stream([&](std::ostream& o) { te::write_ranking(o, rep); });
  write_text(dir / "ranking.txt", ranking);
  out << ranking;
  st.set("plans", plans.size());
  st.set("epochs", rep.test_loss.size());
  st.set("best", rep.labels[rep.ranking.front()]);
}

struct ScoreArgs {
  std::string checkpoint, data, attribute, out, annotate;
  bool per_point = false;
  bool negate = false;
  double threshold = 0.0;
  double line_fraction = 0.5;
};

void cmd_score(const ScoreArgs& a, const Global& g, std::ostream&, Status& st) {
  const auto m = load_model(a.checkpoint, g);
  const std::size_t k = m.column(a.attribute);
  const auto scored = score_all(m, sketch::read_jsonl(a.data));
  std::ostringstream ss;
  for (const auto& s : scored) {
    auto j = scoring::to_json(s.scores, k);
    if (!a.per_point) j.erase("points");
    ss << j.dump() << '\n';
  }
  write_text(a.out, ss.str());
  std::size_t marked = 0;
  if (!a.annotate.empty()) {
    const scoring::FaCellSpec spec{a.attribute, k, 1, a.threshold,
                                   a.negate ? scoring::Polarity::negative : scoring::Polarity::positive};
    for (const auto& s : scored) {
      const auto ann = scoring::filter_lines(s.drawing, s.scores, spec, a.line_fraction);
      for (bool b : ann.stroke_marked) marked += b;
      write_text(fs::path(a.annotate) / (s.drawing.id() + ".svg"),
                 sketch::to_svg(ann.drawing, ann.stroke_marked));
    }
    st.set("marked_strokes", marked);
  }
  std::size_t positive = 0;
  for (const auto& s : scored) positive += s.scores.logits[k] > 0.0;
  st.set("drawings", scored.size());
  st.set("positive", positive);
}

struct FacellArgs {
  std::string checkpoint, data, attribute, out, png;
  std::size_t count = 1000;
  double threshold = 0.0;
  double opacity = 0.05;
  bool negate = false;
};

void cmd_facell(const FacellArgs& a, const Global& g, std::ostream&, Status& st) {
  const auto m = load_model(a.checkpoint, g);
  const scoring::FaCellSpec spec{a.attribute, m.column(a.attribute), a.count, a.threshold,
                                 a.negate ? scoring::Polarity::negative : scoring::Polarity::positive};
  if (!(a.opacity > 0.0 && a.opacity <= 1.0)) throw UsageError("--opacity must lie in (0, 1]");
  const auto scored = score_all(m, sketch::read_jsonl(a.data));
  const auto img = scoring::compose_facell(scored, spec, g.seed);
  write_text(a.out, scoring::facell_svg(img, a.opacity));
  if (!a.png.empty()) vectorizer::write_pgm(a.png, scoring::facell_raster(img, a.opacity));
  st.set("drawings", img.used_ids.size());
  st.set("points", img.points.size());
}

struct GradcheckArgs {
  std::size_t cells = 8;
  std::size_t batches = 20;
  double floor = sm::GradCheckOptions{}.floor;
  double tolerance = 1e-5;
};

void cmd_gradcheck(const GradcheckArgs& a, const Global& g, std::ostream& out, Status& st) {
  sm::GradCheckOptions opt;
  opt.batches = a.batches;
  opt.floor = a.floor;
  opt.seed = g.seed;
  double worst = 0.0;
  for (const auto& cfg : sm::gradcheck_configs(a.cells)) {
    const auto r = sm::gradient_check(cfg, opt);
    out << r.config << " max_rel_error " << r.max_rel_error << " worst_block " << r.worst_block
        << " max_abs_error " << r.max_abs_error << " checked " << r.checked << " redraws " << r.redraws << '\n';
    worst = std::max(worst, r.max_rel_error);
  }
  st.set("max_rel_error", worst);
  if (!(worst < a.tolerance)) {
    throw NumericError("gradient check failed: max relative error " + fmt(worst));
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sketch ordering, sequence models and per-point attribute images", "facells-kit"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  app.fallthrough();
  Global g;
  app.add_option("--seed", g.seed, "Seed for every random choice")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads (default: all cores)")
      ->check(CLI::PositiveNumber);
  app.add_flag("-v,--verbose", g.verbose, "Progress on stderr");

  VectorizeArgs va;
  auto* vec = app.add_subcommand("vectorize", "Trace PGM images into stroke drawings");
  vec->add_option("--input,--in", va.inputs, "PGM images or directories of them")
      ->required()
      ->check(CLI::ExistingPath);
  vec->add_option("--output,--out", va.out, "Output drawings (JSONL)")->required();
  vec->add_option("--svg-dir", va.svg_dir, "Also write one SVG per drawing");
  vec->add_option("--sigma", va.cfg.blur_sigma, "Gaussian blur sigma")->capture_default_str();
  vec->add_option("--low", va.cfg.canny_low, "Hysteresis low threshold")->capture_default_str();
  vec->add_option("--high", va.cfg.canny_high, "Hysteresis high threshold")->capture_default_str();
  vec->add_option("--min-points", va.cfg.min_stroke_points, "Shortest kept chain, in pixels")
      ->capture_default_str();
  vec->add_option("--epsilon", va.cfg.simplify_epsilon, "Simplification tolerance, in pixels")
      ->capture_default_str();

  OrderArgs oa;
  auto* ord = app.add_subcommand("order", "Reorder strokes to shorten pen-up travel");
  ord->add_option("--input,--in", oa.in, "Input drawings (JSONL)")->required();
  ord->add_option("--output,--out", oa.out, "Output drawings (JSONL)")->required();
  ord->add_option("--method", oa.method, "min | random | identity")->capture_default_str();
  ord->add_option("--exact-max", oa.exact_max, "Largest stroke count solved exactly")
      ->capture_default_str();
  ord->add_option("--stats", oa.stats, "Write the pen-up CSV here instead of stdout");

  EncodeArgs ea;
  auto* enc = app.add_subcommand("encode", "Write point-triple sequences");
  enc->add_option("--input,--in", ea.in, "Input drawings (JSONL)")->required();
  enc->add_option("--output,--out", ea.out, "Output sequences (JSONL)")->required();
  enc->add_option("--format", ea.format, "absolute | relative")->capture_default_str();
  enc->add_option("--coords", ea.coords, "normalized | raw")->capture_default_str();

  ToyArgs ta;
  auto* toy = app.add_subcommand("make-toy", "Generate synthetic labeled face sketches");
  toy->add_option("--n", ta.n, "Number of drawings")->capture_default_str();
  toy->add_option("--out", ta.out, "Output drawings (JSONL)")->required();
  toy->add_option("--attrs", ta.attrs, "Also write an attribute table");

  TrainArgs tra;
  auto* train = app.add_subcommand("train", "Train a model from a plan file");
  train->add_option("--plan", tra.plan, "Plan file (key=value)")->required();
  train->add_option("--data", tra.data, "Drawings (JSONL)")->required();
  train->add_option("--attrs", tra.attrs, "Attribute table (default: drawing labels)");
  train->add_option("--out", tra.out, "Output directory")->required();
  train->add_option("--init", tra.init, "Starting checkpoint");

  EvalArgs eva;
  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint");
  eval->add_option("--checkpoint", eva.checkpoint, "Checkpoint (JSON)")->required();
  eval->add_option("--data", eva.data, "Drawings (JSONL)")->required();
  eval->add_option("--attrs", eva.attrs, "Attribute table (default: drawing labels)");
  eval->add_option("--out", eva.out, "Per-attribute CSV");

  CompareArgs ca;
  auto* cmp = app.add_subcommand("compare", "Train several plans and align their test loss");
  cmp->add_option("--plan", ca.plans, "Plan file; repeat for each plan");
  cmp->add_option("--matrix", ca.matrix,
                  "Base plan expanded to {absolute,relative} x {sorted,unsorted}");
  cmp->add_option("--data", ca.data, "Drawings (JSONL)")->required();
  cmp->add_option("--attrs", ca.attrs, "Attribute table (default: drawing labels)");
  cmp->add_option("--out", ca.out, "Output directory")->required();

  ScoreArgs sa;
  auto* score = app.add_subcommand("score", "Per-drawing and per-point attribute scores");
  score->add_option("--checkpoint", sa.checkpoint, "Checkpoint (JSON)")->required();
  score->add_option("--data", sa.data, "Drawings (JSONL)")->required();
  score->add_option("--attribute", sa.attribute, "Output attribute")->required();
  score->add_option("--out", sa.out, "Scores (JSONL)")->required();
  score->add_flag("--per-point", sa.per_point, "Include the per-point scores");
  score->add_option("--annotate", sa.annotate, "Write SVGs with passing strokes highlighted");
  score->add_option("--threshold", sa.threshold, "Point threshold for --annotate")
      ->capture_default_str();
  score->add_option("--line-fraction", sa.line_fraction, "Passing share that marks a stroke")
      ->capture_default_str();
  score->add_flag("--negate", sa.negate, "Select points scoring below -threshold");

  FacellArgs fa;
  auto* facell = app.add_subcommand("facell", "Overlay the passing points of many drawings");
  facell->add_option("--checkpoint", fa.checkpoint, "Checkpoint (JSON)")->required();
  facell->add_option("--data", fa.data, "Drawings (JSONL)")->required();
  facell->add_option("--attribute", fa.attribute, "Output attribute")->required();
  facell->add_option("--count", fa.count, "Drawings to overlay")->capture_default_str();
  facell->add_option("--threshold", fa.threshold, "Point threshold (logit units)")
      ->capture_default_str();
  facell->add_flag("--negate", fa.negate, "Contrary attribute: negative predictions, low scores");
  facell->add_option("--opacity", fa.opacity, "Per-point opacity")->capture_default_str();
  facell->add_option("--out", fa.out, "Output SVG")->required();
  facell->add_option("--png", fa.png, "Also write a grayscale PGM raster");

  GradcheckArgs ga;
  auto* grad = app.add_subcommand("gradcheck", "Finite-difference check of the model gradients");
  grad->add_option("--cells", ga.cells, "Cells per LSTM direction")->capture_default_str();
  grad->add_option("--batches", ga.batches, "Random batches per config")->capture_default_str();
  grad->add_option("--floor", ga.floor, "Relative-error denominator floor")->capture_default_str();
  grad->add_option("--tolerance", ga.tolerance, "Largest accepted relative error")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err) == 0 ? kOk : kUsage;
    out << "STATUS command=" << (app.get_subcommands().empty() ? "none" : app.get_subcommands().front()->get_name())
        << " exit=" << code << '\n';
    return code;
  }

  if (g.threads > 0) set_worker_count(g.threads);
  Status st;
  int code = kOk;
  std::string command;
  try {
    if (vec->parsed()) command = "vectorize", cmd_vectorize(va, g, out, st);
    else if (ord->parsed()) command = "order", cmd_order(oa, g, out, st);
    else if (enc->parsed()) command = "encode", cmd_encode(ea, g, out, st);
    else if (toy->parsed()) command = "make-toy", cmd_make_toy(ta, g, out, st);
    else if (train->parsed()) command = "train", cmd_train(tra, g, err, st);
    else if (eval->parsed()) command = "eval", cmd_eval(eva, g, out, st);
    else if (cmp->parsed()) command = "compare", cmd_compare(ca, g, out, st);
    else if (score->parsed()) command = "score", cmd_score(sa, g, out, st);
    else if (facell->parsed()) command = "facell", cmd_facell(fa, g, out, st);
    else if (grad->parsed()) command = "gradcheck", cmd_gradcheck(ga, g, out, st);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    code = kUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    code = kData;
  } catch (const NumericError& e) {
    err << "error: " << e.what() << '\n';
    code = kNumeric;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    code = kData;
  }
  Status final_status;
  final_status.set("command", command);
  final_status.set("exit", code);
  out << final_status.line() << st.line().substr(6) << '\n';
  return code;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"facells-kit"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace facells::cli
