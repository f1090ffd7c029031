// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "facells/path_order/path_order.hpp"
#include "facells/seq_model/network.hpp"
#include "facells/sketch/encoding.hpp"
#include "facells/train_eval/attributes.hpp"

namespace facells::train_eval {

/// How drawings become model inputs.
struct EncodingSpec {
  sketch::Format format = sketch::Format::absolute;
  sketch::CoordMode coords = sketch::CoordMode::normalized;
  path_order::OrderMethod ordering = path_order::OrderMethod::min_length;
  std::uint64_t seed = 42;
  std::size_t exact_max = path_order::kExactMaxStrokes;
};

/// Per-drawing seed derived from the run seed and the drawing id, so that a
/// drawing is ordered the same way wherever it sits in the input.
std::uint64_t drawing_seed(std::uint64_t seed, const std::string& id);

/// Reorders every drawing per spec.ordering. Parallel per drawing.
std::vector<sketch::Drawing> order_all(const std::vector<sketch::Drawing>& drawings,
                                       const EncodingSpec& spec);
/// Reorders and encodes every drawing. Parallel per drawing.
std::vector<sketch::EncodedSequence> encode_all(const std::vector<sketch::Drawing>& drawings,
                                                const EncodingSpec& spec);

/// Encoded sequences with their targets (row-major, size x outputs).
struct LabeledSet {
  std::vector<std::string> ids;
  std::vector<sketch::EncodedSequence> sequences;
  std::vector<double> targets;
  std::size_t outputs = 0;

  std::size_t size() const { return ids.size(); }
};

/// Targets for `columns` of `table`, looked up by drawing id. Throws
/// DataError when a drawing has no row.
LabeledSet label(const std::vector<sketch::Drawing>& drawings,
                 const std::vector<sketch::EncodedSequence>& sequences, const AttributeTable& table,
                 const std::vector<std::size_t>& columns);

/// Splits `set` into packed batches of at most batch_size sequences.
/// Sequences are grouped by length (stable sort) to limit padding.
std::vector<seq_model::SequenceBatch> make_batches(const LabeledSet& set, std::size_t batch_size);

}  // namespace facells::train_eval
