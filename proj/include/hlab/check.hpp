#pragma once

#include <optional>
#include <string>

#include "hlab/forcing.hpp"
#include "hlab/trees.hpp"

namespace hlab {

/// Witness checker that relies only on the trees module and the oracle:
/// every Y_i is dense above s_i to the density depth, and every tuple of the
/// product is colored with the witness color. Returns the first problem found.
std::optional<std::string> validate_grid_witness(const ColoringOracle& oracle, const GridWitness& w);

}  // namespace hlab
