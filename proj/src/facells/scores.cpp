// SPDX-License-Identifier: Apache-2.0
#include "facells/facells/scores.hpp"

#include "facells/error.hpp"
#include "facells/seq_model/network.hpp"

namespace facells::scoring {

namespace sm = facells::seq_model;

namespace {

std::vector<double> sequence_inputs(const sketch::EncodedSequence& seq) {
  std::vector<double> x;
  x.reserve(seq.triples.size() * 3);
  for (const auto& t : seq.triples) {
    x.push_back(t.a);
    x.push_back(t.b);
    x.push_back(static_cast<double>(t.p));
  }
  return x;
}

// out = W v + b for one dense slot.
std::vector<double> affine(const sm::ModelParams& p, const sm::DenseSlots& d,
                           std::span<const double> v) {
  std::vector<double> out(d.out);
  for (std::size_t r = 0; r < d.out; ++r) {
    double acc = p.values[d.b + r];
    const double* w = p.values.data() + d.w + r * d.in;
    for (std::size_t c = 0; c < d.in; ++c) acc += w[c] * v[c];
    out[r] = acc;
  }
  return out;
}

}  // namespace

std::vector<double> PointScores::column(std::size_t k) const {
  std::vector<double> out(steps);
  for (std::size_t t = 0; t < steps; ++t) out[t] = at(t, k);
  return out;
}

PointScores per_point_scores(const sm::ModelParams& model, const sketch::EncodedSequence& seq,
                             const std::string& id) {
  const auto& cfg = model.config;
  if (cfg.head != sm::Head::ga) {
    throw UsageError("per-point scores need a ga head; " + cfg.name() + " reads the final state");
  }
  for (const auto& d : cfg.dense) {
    if (d.activation != sm::Activation::none) {
      throw UsageError("per-point scores need an affine head; " + cfg.name() +
                       " has a ReLU dense layer, so the time average cannot be moved past it");
    }
  }
  if (seq.triples.empty()) throw DataError("cannot score an empty sequence");
  const auto x = sequence_inputs(seq);
  const auto fw = sm::forward_sequence(model, x, seq.triples.size());

  PointScores s;
  s.id = id;
  s.steps = fw.steps;
  s.outputs = cfg.outputs;
  s.logits = fw.logits;
  s.points.reserve(s.steps * s.outputs);
  const std::size_t width = cfg.lstm_output_width();
  const auto& top = fw.layer_outputs.back();
  for (std::size_t t = 0; t < s.steps; ++t) {
    std::vector<double> v(top.begin() + static_cast<std::ptrdiff_t>(t * width),
                          top.begin() + static_cast<std::ptrdiff_t>((t + 1) * width));
    for (const auto& d : model.layout.dense()) v = affine(model, d, v);
    v = affine(model, model.layout.output(), v);
    s.points.insert(s.points.end(), v.begin(), v.end());
  }
  return s;
}

CellTrace cell_trace(const sm::ModelParams& model, const sketch::EncodedSequence& seq,
                     std::size_t layer, std::size_t cell) {
  const auto& layers = model.config.lstm_layers;
  if (layer >= layers.size()) {
    throw UsageError("layer " + std::to_string(layer) + " out of range; the model has " +
                     std::to_string(layers.size()));
  }
  if (cell >= layers[layer].cells) {
    throw UsageError("cell " + std::to_string(cell) + " out of range; layer " +
                     std::to_string(layer) + " has " + std::to_string(layers[layer].cells));
  }
  if (seq.triples.empty()) throw DataError("cannot trace an empty sequence");
  const auto x = sequence_inputs(seq);
  const auto fw = sm::forward_sequence(model, x, seq.triples.size());
  CellTrace out;
  const auto& tr = fw.traces[layer];
  for (std::size_t t = 0; t < fw.steps; ++t) out.forward.push_back(tr[0].h_at(t)[cell]);
  if (layers[layer].bidirectional) {
    for (std::size_t t = 0; t < fw.steps; ++t) out.backward.push_back(tr[1].h_at(t)[cell]);
  }
  return out;
}

nlohmann::json to_json(const PointScores& s, std::size_t k) {
  if (k >= s.outputs) throw UsageError("score column out of range");
  return {{"id", s.id}, {"logit", s.logits[k]}, {"points", s.column(k)}};
}

}  // namespace facells::scoring
