// SPDX-License-Identifier: Apache-2.0
#include "facells/train_eval/dataset.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

#include "facells/error.hpp"
#include "facells/parallel.hpp"

namespace facells::train_eval {

std::uint64_t drawing_seed(std::uint64_t seed, const std::string& id) {
  // FNV-1a over the id, then a splitmix64 finalizer.
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : id) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::uint64_t z = h ^ (seed + 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::vector<sketch::Drawing> order_all(const std::vector<sketch::Drawing>& drawings,
                                       const EncodingSpec& spec) {
  std::vector<std::optional<sketch::Drawing>> slots(drawings.size());
  parallel_for(drawings.size(), [&](std::size_t i) {
    slots[i] = path_order::reorder(drawings[i], spec.ordering,
                                   drawing_seed(spec.seed, drawings[i].id()), spec.exact_max);
  });
  std::vector<sketch::Drawing> out;
  out.reserve(drawings.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

std::vector<sketch::EncodedSequence> encode_all(const std::vector<sketch::Drawing>& drawings,
                                                const EncodingSpec& spec) {
  std::vector<sketch::EncodedSequence> out(drawings.size());
  parallel_for(drawings.size(), [&](std::size_t i) {
    const auto ordered = path_order::reorder(drawings[i], spec.ordering,
                                             drawing_seed(spec.seed, drawings[i].id()),
                                             spec.exact_max);
    out[i] = sketch::encode(ordered, spec.format, spec.coords);
  });
  return out;
}

LabeledSet label(const std::vector<sketch::Drawing>& drawings,
                 const std::vector<sketch::EncodedSequence>& sequences, const AttributeTable& table,
                 const std::vector<std::size_t>& columns) {
  if (drawings.size() != sequences.size()) throw DataError("drawings and sequences differ in count");
  LabeledSet set;
  set.outputs = columns.size();
  for (std::size_t i = 0; i < drawings.size(); ++i) {
    const auto row = table.row(drawings[i].id());
    if (!row) throw DataError("no attribute row for drawing '" + drawings[i].id() + "'");
    set.ids.push_back(drawings[i].id());
    set.sequences.push_back(sequences[i]);
    for (std::size_t c : columns) set.targets.push_back(table.target(*row, c));
  }
  return set;
}

std::vector<seq_model::SequenceBatch> make_batches(const LabeledSet& set, std::size_t batch_size) {
  if (batch_size == 0) throw UsageError("batch size must be positive");
  std::vector<std::size_t> idx(set.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return set.sequences[a].triples.size() < set.sequences[b].triples.size();
  });
  std::vector<seq_model::SequenceBatch> batches;
  for (std::size_t start = 0; start < idx.size(); start += batch_size) {
    const std::size_t end = std::min(idx.size(), start + batch_size);
    std::vector<sketch::EncodedSequence> seqs;
    std::vector<double> targets;
    for (std::size_t k = start; k < end; ++k) {
      seqs.push_back(set.sequences[idx[k]]);
      for (std::size_t o = 0; o < set.outputs; ++o) {
        targets.push_back(set.targets[idx[k] * set.outputs + o]);
      }
    }
    batches.push_back(seq_model::SequenceBatch::pack(seqs, std::move(targets), set.outputs));
  }
  return batches;
}

}  // namespace facells::train_eval
