#pragma once

#include <iosfwd>
#include <variant>

#include "tcprio/neural_model.hpp"
#include "tcprio/tree_model.hpp"

namespace tcprio {

/// Versioned text dump of a model. Numbers use shortest round-trip
/// formatting, so save followed by load reproduces every parameter exactly.
///
///   tcprio-model 1
///   neural | tree
///   ...
using ModelCheckpoint = std::variant<NeuralModel, TreeModel>;

void save_checkpoint(std::ostream& out, const NeuralModel& model);
void save_checkpoint(std::ostream& out, const TreeModel& model);

/// Throws ParseError on malformed input or an unsupported version.
ModelCheckpoint load_checkpoint(std::istream& in);

}  // namespace tcprio
