// SPDX-License-Identifier: Apache-2.0
#include "facells/seq_model/network.hpp"

#include <algorithm>
#include <cmath>

#include "facells/error.hpp"
#include "facells/parallel.hpp"
#include "facells/seq_model/loss.hpp"
#include "facells/simd/kernels.hpp"

namespace facells::seq_model {
namespace {

// Gradient buffers are reduced in this many fixed slices of the batch.
constexpr std::size_t kGradSlices = 8;

CellGrads cell_grads(const ModelParams& p, std::span<double> grad, std::size_t layer,
                     int direction) {
  const LstmSlots& s = p.layout.lstm(layer)[direction];
  const std::size_t H4 = 4 * s.cells;
  return {grad.subspan(s.w, H4 * s.in), grad.subspan(s.u, H4 * s.cells), grad.subspan(s.b, H4)};
}

// y = W x + b
std::vector<double> affine(const ModelParams& p, const DenseSlots& d, std::span<const double> x) {
  std::vector<double> y(p.values.begin() + static_cast<std::ptrdiff_t>(d.b),
                        p.values.begin() + static_cast<std::ptrdiff_t>(d.b + d.out));
  simd::gemv(p.block(d.w, d.out * d.in), d.out, d.in, x, y);
  return y;
}

}  // namespace

SequenceBatch SequenceBatch::pack(std::span<const sketch::EncodedSequence> seqs,
                                  std::vector<double> targets, std::size_t outputs,
                                  std::size_t pad_to) {
  SequenceBatch b;
  b.outputs = outputs;
  b.input_dim = 3;
  for (const auto& s : seqs) b.max_len = std::max(b.max_len, s.triples.size());
  b.max_len = std::max(b.max_len, pad_to);
  b.inputs.assign(seqs.size() * b.max_len * 3, 0.0);
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    const auto& tr = seqs[i].triples;
    b.lengths.push_back(tr.size());
    double* row = b.inputs.data() + i * b.max_len * 3;
    for (std::size_t t = 0; t < tr.size(); ++t) {
      row[3 * t] = tr[t].a;
      row[3 * t + 1] = tr[t].b;
      row[3 * t + 2] = static_cast<double>(static_cast<int>(tr[t].p));
    }
  }
  b.targets = std::move(targets);
  b.validate();
  return b;
}

void SequenceBatch::validate() const {
  if (inputs.size() != lengths.size() * max_len * input_dim) {
    throw DataError("sequence batch: input array does not match batch x max_len x input_dim");
  }
  if (!targets.empty() && targets.size() != lengths.size() * outputs) {
    throw DataError("sequence batch: target array does not match batch x outputs");
  }
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (lengths[i] == 0) {
      throw DataError("sequence batch: row " + std::to_string(i) + " has no valid steps");
    }
    if (lengths[i] > max_len) throw DataError("sequence batch: length exceeds max_len");
  }
}

CellWeights cell_weights(const ModelParams& p, std::size_t layer, int direction) {
  const LstmSlots& s = p.layout.lstm(layer)[direction];
  const std::size_t H4 = 4 * s.cells;
  return {p.block(s.w, H4 * s.in), p.block(s.u, H4 * s.cells), p.block(s.b, H4), s.in, s.cells};
}

SequenceForward forward_sequence(const ModelParams& p, std::span<const double> x,
                                 std::size_t steps) {
  const ModelConfig& cfg = p.config;
  if (steps == 0) throw DataError("cannot run the model on an empty sequence");
  if (x.size() < steps * cfg.input_dim) throw DataError("sequence shorter than its step count");
  SequenceForward fw;
  fw.steps = steps;
  std::span<const double> in = x.first(steps * cfg.input_dim);
  for (std::size_t l = 0; l < cfg.lstm_layers.size(); ++l) {
    const auto& spec = cfg.lstm_layers[l];
    const std::size_t H = spec.cells;
    const std::size_t width = spec.bidirectional ? 2 * H : H;
    std::array<DirectionTrace, 2> tr;
    tr[0] = run_direction(cell_weights(p, l, 0), in, steps, false);
    if (spec.bidirectional) tr[1] = run_direction(cell_weights(p, l, 1), in, steps, true);
    std::vector<double> out(steps * width);
    for (std::size_t t = 0; t < steps; ++t) {
      std::copy_n(tr[0].h.data() + t * H, H, out.data() + t * width);
      if (spec.bidirectional) std::copy_n(tr[1].h.data() + t * H, H, out.data() + t * width + H);
    }
    fw.traces.push_back(std::move(tr));
    fw.layer_outputs.push_back(std::move(out));
    in = fw.layer_outputs.back();
  }

  const auto& last = cfg.lstm_layers.back();
  const std::size_t H = last.cells;
  const std::size_t width = cfg.lstm_output_width();
  const std::vector<double>& top = fw.layer_outputs.back();
  fw.pooled.assign(width, 0.0);
  if (cfg.head == Head::ga) {
    for (std::size_t t = 0; t < steps; ++t) {
      for (std::size_t j = 0; j < width; ++j) fw.pooled[j] += top[t * width + j];
    }
    for (double& v : fw.pooled) v /= static_cast<double>(steps);
  } else {
    std::copy_n(top.data() + (steps - 1) * width, H, fw.pooled.data());
    if (last.bidirectional) std::copy_n(top.data() + H, H, fw.pooled.data() + H);
  }

  std::vector<double> v = fw.pooled;
  for (const DenseSlots& d : p.layout.dense()) {
    std::vector<double> pre = affine(p, d, v);
    std::vector<double> out = pre;
    if (d.activation == Activation::relu) {
      for (double& a : out) a = std::max(0.0, a);
    }
    fw.dense_pre.push_back(std::move(pre));
    fw.dense_out.push_back(out);
    v = std::move(out);
  }
  fw.logits = affine(p, p.layout.output(), v);
  fw.probs.resize(fw.logits.size());
  for (std::size_t k = 0; k < fw.logits.size(); ++k) {
    fw.probs[k] = 1.0 / (1.0 + std::exp(-fw.logits[k]));
  }
  return fw;
}

void backward_sequence(const ModelParams& p, std::span<const double> x, const SequenceForward& fw,
                       std::span<const double> dlogits, std::span<double> grad) {
  const ModelConfig& cfg = p.config;
  const std::size_t steps = fw.steps;

  // Dense stack, top down.
  const auto& dense = p.layout.dense();
  auto dense_input = [&](std::size_t k) -> const std::vector<double>& {
    return k == 0 ? fw.pooled : fw.dense_out[k - 1];
  };
  const DenseSlots& out = p.layout.output();
  const std::vector<double>& out_in = dense.empty() ? fw.pooled : fw.dense_out.back();
  simd::ger(grad.subspan(out.w, out.out * out.in), out.out, out.in, dlogits, out_in);
  simd::axpy(1.0, dlogits, grad.subspan(out.b, out.out));
  std::vector<double> dv(out.in, 0.0);
  simd::gemv_t(p.block(out.w, out.out * out.in), out.out, out.in, dlogits, dv);
  for (std::size_t k = dense.size(); k-- > 0;) {
    const DenseSlots& d = dense[k];
    if (d.activation == Activation::relu) {
      for (std::size_t j = 0; j < d.out; ++j) {
        if (!(fw.dense_pre[k][j] > 0.0)) dv[j] = 0.0;
      }
    }
    simd::ger(grad.subspan(d.w, d.out * d.in), d.out, d.in, dv, dense_input(k));
    simd::axpy(1.0, dv, grad.subspan(d.b, d.out));
    std::vector<double> dprev(d.in, 0.0);
    simd::gemv_t(p.block(d.w, d.out * d.in), d.out, d.in, dv, dprev);
    dv = std::move(dprev);
  }

  // Head: spread the pooled gradient over the top layer's per-step outputs.
  const auto& last = cfg.lstm_layers.back();
  const std::size_t width = cfg.lstm_output_width();
  std::vector<double> dtop(steps * width, 0.0);
  if (cfg.head == Head::ga) {
    const double inv = 1.0 / static_cast<double>(steps);
    for (std::size_t t = 0; t < steps; ++t) {
      for (std::size_t j = 0; j < width; ++j) dtop[t * width + j] = dv[j] * inv;
    }
  } else {
    const std::size_t H = last.cells;
    std::copy_n(dv.data(), H, dtop.data() + (steps - 1) * width);
    if (last.bidirectional) std::copy_n(dv.data() + H, H, dtop.data() + H);
  }

  // LSTM stack, top down.
  for (std::size_t l = cfg.lstm_layers.size(); l-- > 0;) {
    const auto& spec = cfg.lstm_layers[l];
    const std::size_t H = spec.cells;
    const std::size_t lw = spec.bidirectional ? 2 * H : H;
    std::span<const double> in =
        l == 0 ? x.first(steps * cfg.input_dim) : std::span<const double>(fw.layer_outputs[l - 1]);
    const std::size_t in_w = l == 0 ? cfg.input_dim : fw.layer_outputs[l - 1].size() / steps;
    std::vector<double> din(l == 0 ? 0 : steps * in_w, 0.0);
    const int dirs = spec.bidirectional ? 2 : 1;
    std::vector<double> dh(steps * H);
    for (int d = 0; d < dirs; ++d) {
      for (std::size_t t = 0; t < steps; ++t) {
        std::copy_n(dtop.data() + t * lw + d * H, H, dh.data() + t * H);
      }
      backprop_direction(cell_weights(p, l, d), fw.traces[l][d], in, dh,
                         cell_grads(p, grad, l, d), din);
    }
    dtop = std::move(din);
  }
}

BatchOutput forward(const ModelParams& p, const SequenceBatch& batch, bool keep_hidden) {
  batch.validate();
  const std::size_t B = batch.size(), K = p.config.outputs;
  BatchOutput out;
  out.logits.resize(B * K);
  out.probs.resize(B * K);
  if (keep_hidden) out.hidden.resize(B);
  parallel_for(B, [&](std::size_t i) {
    SequenceForward fw = forward_sequence(p, batch.row(i), batch.lengths[i]);
    std::copy(fw.logits.begin(), fw.logits.end(), out.logits.begin() + static_cast<std::ptrdiff_t>(i * K));
    std::copy(fw.probs.begin(), fw.probs.end(), out.probs.begin() + static_cast<std::ptrdiff_t>(i * K));
    if (keep_hidden) out.hidden[i] = std::move(fw.layer_outputs);
  });
  return out;
}

LossAndGradient loss_and_gradient(const ModelParams& p, const SequenceBatch& batch) {
  batch.validate();
  const std::size_t B = batch.size(), K = p.config.outputs;
  if (batch.outputs != K || batch.targets.size() != B * K) {
    throw DataError("batch targets do not match the model's output count");
  }
  LossAndGradient res;
  res.probs.resize(B * K);
  const std::size_t slices = std::min(kGradSlices, B);
  std::vector<std::vector<double>> partial(slices, std::vector<double>(p.values.size(), 0.0));
  const double scale = 1.0 / static_cast<double>(B * K);
  parallel_for(slices, [&](std::size_t s) {
    const std::size_t lo = s * B / slices, hi = (s + 1) * B / slices;
    std::vector<double> dlogits(K);
    for (std::size_t i = lo; i < hi; ++i) {
      SequenceForward fw = forward_sequence(p, batch.row(i), batch.lengths[i]);
      std::copy(fw.probs.begin(), fw.probs.end(), res.probs.begin() + static_cast<std::ptrdiff_t>(i * K));
      bce_logit_gradient(fw.probs, batch.target_row(i), scale, dlogits);
      backward_sequence(p, batch.row(i), fw, dlogits, partial[s]);
    }
  });
  res.grad = std::move(partial[0]);
  for (std::size_t s = 1; s < slices; ++s) simd::axpy(1.0, partial[s], res.grad);
  res.loss = bce_loss(res.probs, batch.targets);
  return res;
}

std::vector<double> backward(const ModelParams& p, const SequenceBatch& batch) {
  return loss_and_gradient(p, batch).grad;
}

double batch_loss(const ModelParams& p, const SequenceBatch& batch) {
  return bce_loss(forward(p, batch).probs, batch.targets);
}

}  // namespace facells::seq_model
