#include "hlab/check.hpp"

namespace hlab {

std::optional<std::string> validate_grid_witness(const ColoringOracle& oracle, const GridWitness& w) {
  const std::size_t d = oracle.dim();
  if (w.sets.size() != d || w.roots.size() != d) return "witness arity does not match the oracle";
  for (std::size_t i = 0; i < d; ++i) {
    const BranchSet& Y = w.sets[i];
    if (Y.empty()) return "Y_" + std::to_string(i) + " is empty";
    if (Y.shape().k != oracle.branching()) return "Y_" + std::to_string(i) + " lives in a tree of the wrong branching";
    if (Y.shape().depth < oracle.depth() || Y.shape().depth < w.density_depth) {
      return "Y_" + std::to_string(i) + " is shallower than the oracle or density depth";
    }
    if (w.roots[i].size() > w.density_depth) return "root s_" + std::to_string(i) + " lies above the density depth";
    if (!is_dense_above(Y, w.roots[i], w.density_depth)) {
      return "Y_" + std::to_string(i) + " is not dense above s_" + std::to_string(i) + " = " +
             word_to_string(w.roots[i]);
    }
  }
  std::vector<std::size_t> pos(d, 0);
  while (true) {
    NodeTuple t;
    for (std::size_t i = 0; i < d; ++i) t.push_back(w.sets[i].branches()[pos[i]]);
    if (oracle(t) != w.color) {
      std::string s;
      for (const auto& y : t) s += " " + word_to_string(y);
      return "tuple" + s + " has color " + std::to_string(oracle(t)) + ", not " + std::to_string(w.color);
    }
    std::size_t i = d;
    while (i > 0 && pos[i - 1] + 1 == w.sets[i - 1].size()) {
      pos[i - 1] = 0;
      --i;
    }
    if (i == 0) break;
    ++pos[i - 1];
  }
  return std::nullopt;
}

}  // namespace hlab
