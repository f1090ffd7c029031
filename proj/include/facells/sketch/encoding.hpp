// SPDX-License-Identifier: Apache-2.0
#pragma once

// Flat point-triple encodings of a drawing. Each point becomes (a, b, p) where
// p marks the beginning (+1), continuation (0) or end (-1) of its stroke, so
// every well-formed sequence matches (+1 0* -1)+.
//
//   absolute: (a, b) is the point itself.
//   relative: (a, b) is the offset from the previous point of the flattened
//             sequence (across stroke boundaries); the first point is taken
//             relative to the canvas center.
//
// Coordinates are either raw canvas units or normalized: canvas center at the
// origin, scaled by 2 / max(width, height) into [-1, 1].

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "facells/error.hpp"
#include "facells/sketch/drawing.hpp"

namespace facells::sketch {

enum class PenState : std::int8_t { begin = 1, cont = 0, end = -1 };
enum class Format { absolute, relative };
enum class CoordMode { raw, normalized };

struct Triple {
  double a = 0.0;
  double b = 0.0;
  PenState p = PenState::cont;

  friend bool operator==(const Triple&, const Triple&) = default;
};

struct EncodedSequence {
  Format format = Format::absolute;
  CoordMode coords = CoordMode::normalized;
  std::vector<Triple> triples;
};

/// Grammar violation in an encoded sequence; index() is the offending triple
/// (== size() when the sequence ends inside a stroke).
class MalformedSequence : public DataError {
 public:
  MalformedSequence(std::size_t index, const std::string& what)
      : DataError("malformed sequence at index " + std::to_string(index) + ": " + what),
        index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

EncodedSequence encode_absolute(const Drawing& d, CoordMode mode);
EncodedSequence encode_relative(const Drawing& d, CoordMode mode);
EncodedSequence encode(const Drawing& d, Format format, CoordMode mode);

/// Inverse of encode_*. Throws MalformedSequence on a pen-state violation.
Drawing decode(const EncodedSequence& s, double width, double height, std::string id = {});

/// Runs the pen-state automaton; returns the first offending index, or
/// nullopt when the sequence is accepted. An empty sequence is accepted.
std::optional<std::size_t> pen_grammar_violation(std::span<const Triple> triples);

std::string format_name(Format f);
std::string coord_mode_name(CoordMode m);
/// Throws UsageError on unknown names.
Format parse_format(const std::string& s);
CoordMode parse_coord_mode(const std::string& s);

}  // namespace facells::sketch
