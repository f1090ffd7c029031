// SPDX-License-Identifier: Apache-2.0
#include "facells/seq_model/gradcheck.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "facells/error.hpp"
#include "facells/parallel.hpp"
#include "facells/seq_model/loss.hpp"

namespace facells::seq_model {
namespace {

// Sequential loss so that parallelism can go over parameters instead.
double serial_loss(const ModelParams& p, const SequenceBatch& batch) {
  const std::size_t K = p.config.outputs;
  std::vector<double> probs(batch.size() * K);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const SequenceForward fw = forward_sequence(p, batch.row(i), batch.lengths[i]);
    std::copy(fw.probs.begin(), fw.probs.end(), probs.begin() + static_cast<std::ptrdiff_t>(i * K));
  }
  return bce_loss(probs, batch.targets);
}

double closest_relu_input(const ModelParams& p, const SequenceBatch& batch) {
  double closest = INFINITY;
  for (std::size_t k = 0; k < p.config.dense.size(); ++k) {
    if (p.config.dense[k].activation != Activation::relu) continue;
    for (std::size_t i = 0; i < batch.size(); ++i) {
      const SequenceForward fw = forward_sequence(p, batch.row(i), batch.lengths[i]);
      for (double v : fw.dense_pre[k]) closest = std::min(closest, std::abs(v));
    }
  }
  return closest;
}

}  // namespace

double relative_error(double analytic, double numeric, double floor) {
  return std::abs(analytic - numeric) /
         std::max({std::abs(analytic), std::abs(numeric), floor});
}

SequenceBatch random_batch(Rng& rng, std::size_t size, std::size_t min_len, std::size_t max_len,
                           std::size_t outputs) {
  min_len = std::max<std::size_t>(min_len, 2);
  max_len = std::max(max_len, min_len);
  std::vector<sketch::EncodedSequence> seqs(size);
  for (auto& s : seqs) {
    const std::size_t len = min_len + uniform_index(rng, max_len - min_len + 1);
    // Split into strokes of at least two points.
    std::size_t t = 0;
    while (t < len) {
      const std::size_t remaining = len - t;
      std::size_t stroke = 2 + uniform_index(rng, 3);
      if (stroke + 2 > remaining) stroke = remaining;
      for (std::size_t k = 0; k < stroke; ++k) {
        const auto p = k == 0 ? sketch::PenState::begin
                              : (k + 1 == stroke ? sketch::PenState::end : sketch::PenState::cont);
        s.triples.push_back({uniform_real(rng, -1.0, 1.0), uniform_real(rng, -1.0, 1.0), p});
      }
      t += stroke;
    }
  }
  std::vector<double> targets(size * outputs);
  for (double& y : targets) y = static_cast<double>(uniform_index(rng, 2));
  return SequenceBatch::pack(seqs, std::move(targets), outputs);
}

GradCheckResult gradient_check(const ModelConfig& cfg, const GradCheckOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  GradCheckResult res;
  res.config = cfg.name();
  Rng rng(opt.seed);
  for (std::size_t b = 0; b < opt.batches; ++b) {
    ModelParams p;
    SequenceBatch batch;
    for (std::size_t attempt = 0;; ++attempt) {
      if (attempt == 1000) throw NumericError("gradient check: no kink-free draw found");
      p = ModelParams::init(cfg, rng());
      for (double& v : p.values) v += uniform_real(rng, -0.1, 0.1);
      batch = random_batch(rng, opt.batch_size, opt.min_len, opt.max_len, cfg.outputs);
      if (closest_relu_input(p, batch) >= opt.relu_margin) break;
      ++res.redraws;
    }
    const std::vector<double> analytic = backward(p, batch);

    const auto& blocks = p.layout.blocks();
    std::vector<double> rel(blocks.size(), 0.0), abs_err(blocks.size(), 0.0);
    parallel_for(blocks.size(), [&](std::size_t bi) {
      ModelParams local = p;
      const ParamBlock& blk = blocks[bi];
      for (std::size_t k = 0; k < blk.size(); ++k) {
        const std::size_t i = blk.offset + k;
        const double w = local.values[i];
        local.values[i] = w + opt.step;
        const double up = serial_loss(local, batch);
        local.values[i] = w - opt.step;
        const double down = serial_loss(local, batch);
        local.values[i] = w;
        const double numeric = (up - down) / (2.0 * opt.step);
        rel[bi] = std::max(rel[bi], relative_error(analytic[i], numeric, opt.floor));
        abs_err[bi] = std::max(abs_err[bi], std::abs(analytic[i] - numeric));
      }
    });
    for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
      if (rel[bi] > res.max_rel_error) {
        res.max_rel_error = rel[bi];
        res.worst_block = blocks[bi].name;
      }
      res.max_abs_error = std::max(res.max_abs_error, abs_err[bi]);
    }
    res.checked += p.values.size();
  }
  res.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

std::vector<ModelConfig> gradcheck_configs(std::size_t cells) {
  std::vector<ModelConfig> out;
  const std::string c = "(" + std::to_string(cells) + ")";
  for (const char* name : {"1bi-fs-d1", "1bi-ga-d1", "1bi-ga-d40", "3bi-ga-d1", "3bi-ga-d40"}) {
    std::string n(name);
    n.insert(3, c);
    out.push_back(parse_config_name(n));
  }
  return out;
}

}  // namespace facells::seq_model
