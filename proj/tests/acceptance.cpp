#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hlab/antiramsey.hpp"
#include "hlab/check.hpp"
#include "hlab/deltasys.hpp"
#include "hlab/errors.hpp"
#include "hlab/forcing.hpp"
#include "hlab/hl.hpp"
#include "hlab/ordset.hpp"
#include "hlab/ph.hpp"
#include "hlab/rng.hpp"
#include "hlab/serialize.hpp"
#include "hlab/trees.hpp"

using namespace hlab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Fail : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void expect(bool ok, const std::string& what) {
  if (!ok) throw Fail(what);
}

// Edge colorings of [m]^2 as bitmasks over the pairs in lexicographic order.
bool has_mono_triangle(std::size_t m, std::uint64_t mask) {
  std::map<std::pair<std::size_t, std::size_t>, int> color;
  std::size_t e = 0;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) color[{a, b}] = (mask >> e++) & 1;
  }
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      for (std::size_t c = b + 1; c < m; ++c) {
        if (color[{a, b}] == color[{a, c}] && color[{a, b}] == color[{b, c}]) return true;
      }
    }
  }
  return false;
}

std::string criterion1() {
  const RamseyResult r1 = ramsey_m_star(1, 1);
  const RamseyResult r2 = ramsey_m_star(1, 2);
  expect(r1.m_star == 3, "ramsey_m_star(1,1) = " + std::to_string(r1.m_star));
  expect(r2.m_star == 6, "ramsey_m_star(1,2) = " + std::to_string(r2.m_star));
  expect(is_good_coloring(5, 1, r2.edges, r2.witness), "witness coloring of [5]^2 has a monochromatic triple");

  // Independent recount: the witness, read as a bitmask, has no monochromatic triangle.
  std::uint64_t mask = 0;
  for (std::size_t e = 0; e < r2.edges.size(); ++e) {
    const auto& edge = r2.edges[e];
    expect(edge.size() == 2 && edge.max() < 5, "witness edge outside [5]^2");
    std::size_t pos = 0;
    for (std::size_t a = 0; a < 5; ++a) {
      for (std::size_t b = a + 1; b < 5; ++b, ++pos) {
        if (edge == OrdSet{a, b} && r2.witness[e] == 1) mask |= std::uint64_t{1} << pos;
      }
    }
  }
  expect(r2.edges.size() == 10, "witness does not list all 10 pairs");
  expect(!has_mono_triangle(5, mask), "witness has a monochromatic triangle by recount");
  for (std::uint64_t m6 = 0; m6 < (1u << 15); ++m6) {
    expect(has_mono_triangle(6, m6), "a 2-coloring of [6]^2 avoids monochromatic triangles");
  }
  return "m*(1,1) = 3, m*(1,2) = 6, witness on [5]^2 checked, all 32768 colorings of [6]^2 checked";
}

std::string criterion2() {
  std::uint64_t pairs = 0;
  for (std::size_t n = 1; n <= 3; ++n) {
    std::vector<Arena> arenas{Arena::identity(8, n)};
    for (std::uint64_t seed : {1u, 2u, 3u}) arenas.push_back(Arena::seeded(8, n, seed));
    for (const Arena& ar : arenas) {
      const DifferenceReport rep = difference_check(ar);
      expect(rep.violations == 0, "difference lemma violated at n=" + std::to_string(n));
      expect(rep.max_mismatches == 0, "eligible pair with different maxima at n=" + std::to_string(n));
      expect(rep.pairs > 0, "no eligible pairs at n=" + std::to_string(n));
      pairs += rep.pairs;
    }
  }
  return std::to_string(pairs) + " eligible pairs, 0 violations";
}

std::string criterion3() {
  const Arena ar = Arena::identity(10, 1);
  const auto six = subsets_of_size(OrdSet::range(0, 10), 6);
  std::size_t least = SIZE_MAX, checked = 0;
  for (const auto& a : six) {
    for (const auto& b : six) {
      const std::vector<OrdSet> As{a, b};
      const auto rep = verify_product_bound(ar, As, 1, m_seq(1, 1));
      expect(rep.holds, "k=1 bound fails on " + to_string(a) + " x " + to_string(b));
      least = std::min(least, rep.census.size());
      ++checked;
    }
  }
  expect(least >= 2, "census below 2");

  const Arena big = Arena::identity(24, 1);
  Rng rng(2024);
  std::size_t least2 = SIZE_MAX;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<OrdSet> As;
    for (int i = 0; i < 2; ++i) {
      std::vector<Ord> all;
      for (Ord x = 0; x < 24; ++x) all.push_back(x);
      rng.shuffle(all);
      all.resize(12);
      As.push_back(OrdSet::from_unsorted(all));
    }
    const auto rep = verify_product_bound(big, As, 2, m_seq(1, 2));
    expect(rep.holds, "k=2 bound fails on " + to_string(As[0]) + " x " + to_string(As[1]));
    least2 = std::min(least2, rep.census.size());
  }
  expect(least2 >= 3, "census below 3");
  return std::to_string(checked) + " exhaustive products (least census " + std::to_string(least) +
         "), 1000 seeded products (least census " + std::to_string(least2) + ")";
}

Family structured(std::size_t n, std::size_t H, Rng& rng) {
  std::vector<std::size_t> positions;
  for (std::size_t p = 0; p < n; ++p) {
    if (rng.below(2)) positions.push_back(p);
  }
  const bool with_root = rng.below(2);
  return Family::build(n, OrdSet::range(0, H), [&](const OrdSet& b) {
    std::vector<Ord> v;
    if (with_root) v.push_back(0);
    for (std::size_t p : positions) v.push_back(1 + 2 * index(b, p));
    if (rng.below(100) < 15) v.push_back(1 + 2 * H + rng.below(3));
    return OrdSet::from_unsorted(v);
  });
}

std::string criterion4() {
  const Family id = Family::build(2, OrdSet::range(0, 8), [](const OrdSet& b) { return b; });
  const UniformVerdict vid = verify_uniform(id);
  expect(vid.certified() && vid.cert.rho == 2, "identity family not certified with rho 2");
  for (const auto& [m, r] : vid.cert.r) expect(r && *r == m, "identity certificate has r_m != m");

  const Family mins = Family::build(2, OrdSet::range(0, 8), [](const OrdSet& b) { return OrdSet{b.min()}; });
  const UniformVerdict vmin = verify_uniform(mins);
  expect(vmin.certified() && vmin.cert.rho == 1, "min-singleton family not certified with rho 1");
  for (const auto& [m, r] : vmin.cert.r) {
    expect(r && *r == (m.contains(0) ? OrdSet{0} : OrdSet{}), "min-singleton certificate entry wrong");
  }

  const PlantedInstance inst = make_planted(200, 12, 200, 1);
  const SetColoring g = [&](const OrdSet& b) { return inst.g.at(b); };
  const auto t0 = std::chrono::steady_clock::now();
  const ExtractResult ex = extract_uniform(inst.fam, 6, g);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  expect(ex.status == ExtractStatus::found && ex.H.size() >= 6, "planted instance not recovered");
  expect(secs < 120, "planted extraction too slow");
  const UniformVerdict vp = verify_uniform(inst.fam.restrict(ex.H));
  expect(vp.certified(), "recovered subfamily lacks a full certificate");
  const UniformCertificate back = certificate_from_json(Json::parse(dump(to_json(vp.cert))));
  expect(back == vp.cert, "certificate does not survive a JSON round trip");
  expect(verify_uniform(inst.fam.restrict(ex.H)).cert == back, "reloaded certificate differs from a fresh check");

  Rng rng(99);
  std::size_t compared = 0, found = 0;
  for (int trial = 0; trial < 80; ++trial) {
    const std::size_t n = 1 + rng.below(2);
    const std::size_t H = 5 + rng.below(4);
    const Family fam = structured(n, H, rng);
    std::map<OrdSet, std::size_t> colors;
    for (const auto& [b, u] : fam.sets()) colors[b] = rng.below(5) == 0 ? 1 : 0;
    const SetColoring col = [&](const OrdSet& b) { return colors.at(b); };
    for (std::size_t h = n; h <= H; ++h) {
      const ExtractResult fast = extract_uniform(fam, h, col);
      const ExtractResult slow = extract_uniform_exhaustive(fam, h, col);
      expect(fast.status == slow.status, "extraction status differs from exhaustive search");
      if (fast.status == ExtractStatus::found) {
        expect(fast.H == slow.H, "extraction result differs from exhaustive search");
        ++found;
      }
      ++compared;
    }
  }
  return "identity and min-singleton certified, planted H' = " + to_string(ex.H) + " in " +
         std::to_string(secs).substr(0, 4) + " s, " + std::to_string(compared) + " small instances (" +
         std::to_string(found) + " found) match exhaustive search";
}

bool dense_by_scan(const BranchSet& Y, const Word& t, std::size_t D) {
  for (std::size_t h = t.size(); h <= D; ++h) {
    for (const Word& u : extensions(t, Y.shape().k, h)) {
      bool met = false;
      for (const Word& y : Y.branches()) met = met || is_prefix(u, y);
      if (!met) return false;
    }
  }
  return true;
}

bool product_colored(const ColoringOracle& oracle, const GridWitness& g) {
  std::vector<std::size_t> pos(g.sets.size(), 0);
  while (true) {
    NodeTuple t;
    for (std::size_t i = 0; i < pos.size(); ++i) t.push_back(g.sets[i].branches()[pos[i]]);
    if (oracle(t) != g.color) return false;
    std::size_t i = pos.size();
    while (i > 0 && ++pos[i - 1] == g.sets[i - 1].size()) pos[--i] = 0;
    if (i == 0) return true;
  }
}

std::string criterion5() {
  double slowest = 0;
  std::size_t runs = 0;
  for (std::size_t d : {1u, 2u}) {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      const auto oracle = ColoringOracle::seeded(d, 2, 2, 2, seed);
      PipelineConfig cfg;
      cfg.density_depth = 3;
      cfg.branches = 8;
      const auto t0 = std::chrono::steady_clock::now();
      const PipelineResult r = run_pipeline(oracle, cfg);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      slowest = std::max(slowest, secs);
      const std::string tag = "d=" + std::to_string(d) + " seed " + std::to_string(seed);
      expect(secs < 30, tag + " took " + std::to_string(secs) + " s");
      expect(!validate_grid_witness(oracle, r.witness).has_value(), tag + ": validator rejects the witness");
      const GridWitness& g = r.witness;
      expect(g.sets.size() == d && g.roots.size() == d && g.density_depth == 3, tag + ": witness shape");
      for (std::size_t i = 0; i < d; ++i) {
        expect(g.sets[i].size() == 8, tag + ": |Y_i| != 8");
        expect(dense_by_scan(g.sets[i], g.roots[i], 3), tag + ": Y_i not dense above s_i");
      }
      expect(product_colored(oracle, g), tag + ": product not monochromatic");
      ++runs;
    }
  }
  return std::to_string(runs) + "/100 witnesses validated, slowest run " + std::to_string(slowest).substr(0, 5) + " s";
}

std::string criterion6() {
  std::size_t done = 0, skipped = 0;
  std::uint64_t seed = 0;
  while (done < 100) {
    const auto F = CofinalFn::random_strict(2, 48, 64, 4, seed);
    if (!F) {
      ++skipped;
      ++seed;
      expect(skipped < 1000, "too many skipped seeds");
      continue;
    }
    for (const Arena& ar : {Arena::identity(64, 1), Arena::seeded(64, 1, seed)}) {
      const Refutation r = refute(*F, ar);
      const std::string tag = "seed " + std::to_string(seed);
      expect(r.refuted, tag + ": not refuted");
      expect(check_refutation(*F, ar, r), tag + ": refutation fails re-verification");
      const TupleColor v0 = c_full(ar, fstar(*F, r.sigma0));
      const TupleColor v1 = c_full(ar, fstar(*F, r.sigma1));
      expect(v0 != v1 && v0 == r.value0 && v1 == r.value1, tag + ": recomputed values disagree");
    }
    ++done;
    ++seed;
  }
  return "100/100 refuted on identity and seeded arenas, " + std::to_string(skipped) + " seeds skipped";
}

std::string criterion7() {
  const SidewaysScan s = sideways_containment_scan(2, 4, 3, 2);
  expect(s.violations == 0, "containment violated: " + s.counterexample.value_or(""));
  expect(s.checked > 0, "scan checked nothing");

  const auto shapes = uniform_shapes(2, 2, 4);
  const auto firsts = BranchSet::full(shapes[0]).branches();
  Rng rng(77);
  std::size_t grids = 0;
  for (int trial = 0; trial < 40; ++trial) {
    std::map<Word, Color> table;
    for (const Word& x : firsts) table[x] = rng.below(2);
    const BranchColoring jmap = [table](const BranchTuple& x) { return table.at(x[0]); };
    const BranchColoring c = sideways_build(jmap, 1, 2, 4);
    GridSearchOptions opt;
    opt.density_depth = 3;
    const auto r = search_grid(c, shapes, opt);
    if (r.status != SearchStatus::found) continue;
    ++grids;
    for (const Word& x : r.witness->sets[0].branches()) {
      expect(table.at(x) < r.witness->roots[1].size(), "sampled grid breaks containment");
    }
  }
  expect(grids > 0, "no sampled grid found");
  return std::to_string(s.checked) + " monochromatic rows scanned, " + std::to_string(grids) +
         " sampled grids checked, 0 violations";
}

std::string criterion8() {
  std::size_t full = 0;
  auto run = [&](const LevelColoring& gamma, std::size_t density, const std::string& tag) {
    GridSearchOptions opt;
    opt.density_depth = density;
    opt.size_cap = 256;
    const auto grid = search_grid(surrogate_coloring(gamma), gamma.shapes(), opt);
    expect(grid.status == SearchStatus::found, tag + ": no grid");
    const HLDerivation d = derive_strong_subtrees(gamma, *grid.witness, 2);
    expect(d.full && d.witness.levels.size() == 2, tag + ": " + d.reason);
    expect(verify_hl_witness(gamma, d.witness), tag + ": witness fails verification");
    return d;
  };
  for (std::size_t d : {1u, 2u}) {
    for (Color c : {0u, 1u}) {
      run(LevelColoring::constant(d, 2, 8, c), 1, "constant");
      ++full;
    }
    for (std::size_t offset : {0u, 1u}) {
      const auto gamma = LevelColoring::level_parity(d, 2, 8, offset);
      const HLDerivation h = run(gamma, 8, "level-parity");
      const Color j = (*search_grid(surrogate_coloring(gamma), gamma.shapes(), [] {
                        GridSearchOptions o;
                        o.density_depth = 8;
                        o.size_cap = 256;
                        return o;
                      }()).witness).color;
      for (Ord m : h.witness.levels) expect((m + offset) % 2 == j, "level-parity witness uses a wrong level");
      ++full;
    }
  }
  const std::vector<std::vector<Word>> roots{{word_from_string("1")},
                                             {word_from_string("0")},
                                             {word_from_string("01")},
                                             {word_from_string("10")},
                                             {word_from_string("1"), word_from_string("0")},
                                             {word_from_string("0"), word_from_string("1")},
                                             {word_from_string("1"), word_from_string("1")},
                                             {word_from_string("01"), word_from_string("1")},
                                             {word_from_string("0"), word_from_string("11")},
                                             {word_from_string(""), word_from_string("1")},
                                             {word_from_string("11"), word_from_string("00")},
                                             {word_from_string("0"), word_from_string("")}};
  for (std::size_t x = 0; x < roots.size(); ++x) {
    const auto gamma = LevelColoring::planted(roots[x].size(), 2, 8, 2, roots[x], x % 2, 100 + x);
    const std::string tag = "planted " + std::to_string(x);
    // The planted grid: every branch through each planted root.
    GridWitness grid{x % 2, roots[x], {}, 8};
    const auto shapes = gamma.shapes();
    for (std::size_t i = 0; i < roots[x].size(); ++i) grid.sets.push_back(BranchSet::through(shapes[i], roots[x][i]));
    expect(!validate_grid(surrogate_coloring(gamma), roots[x].size(), grid).has_value(), tag + ": planted grid invalid");
    const HLDerivation d = derive_strong_subtrees(gamma, grid, 2);
    expect(d.full && d.witness.levels.size() == 2, tag + ": " + d.reason);
    expect(verify_hl_witness(gamma, d.witness), tag + ": witness fails verification");
    ++full;
  }

  const auto adv = LevelColoring::adversarial(1, 2, 8);
  const auto grid = search_grid(surrogate_coloring(adv), adv.shapes(), GridSearchOptions{});
  expect(grid.status == SearchStatus::found, "adversarial: no grid");
  const HLDerivation bad = derive_strong_subtrees(adv, *grid.witness, 2);
  expect(!bad.full && bad.failed_stage && !bad.reason.empty(), "adversarial instance not reported partial");
  return std::to_string(full) + "/20 full witnesses verified, adversarial instance partial at height " +
         std::to_string(bad.height) + " (" + bad.reason + ")";
}

std::string criterion9() {
  const DdfBridgeReport r = ddf_bridge_scan(2, 2, 2, 2, 2, 2);
  expect(r.failures == 0, "bridge fails: " + r.counterexample.value_or(""));
  expect(r.ddf > 0 && r.families > 0, "no DDF relation at N = D = 2");
  const DdfBridgeReport s = ddf_bridge_sample(2, 2, 3, 2, 2, 2, 200, 9);
  expect(s.failures == 0, "sampled bridge fails: " + s.counterexample.value_or(""));
  expect(s.ddf == 200, "sampled relations are not all DDF");
  return std::to_string(r.relations) + " relations (" + std::to_string(r.ddf) + " DDF, " + std::to_string(r.families) +
         " cone families), plus 200 sampled N=3 relations, 0 failures";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string criterion10() {
  const std::vector<std::string> runs{
      "ramsey --n 1 --k 2",
      "difference-check --n 3 --mode seeded --seed 2",
      "product-bound --k 2 --M 24 --size 12 --universe 24 --trials 200 --seed 4",
      "ph-refute --fn random-strict --seed 11",
      "delta-verify --family min-singleton",
      "delta-extract --seed 1",
      "force-pipeline --d 2 --seed 13",
      "hl-derive --coloring planted --d 2 --root 1 --density 2 --seed 5",
      "grid-search --coloring seeded --d 2 --seed 8",
      "sideways-build",
      "ddf-check --N 3 --samples 20 --seed 6"};
  const fs::path base = fs::temp_directory_path() / ("hlab_acceptance_" + std::to_string(::getpid()));
  std::size_t files = 0;
  for (const auto& r : runs) {
    std::string digest[2];
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path dir = base / std::to_string(rep);
      fs::remove_all(dir);
      fs::create_directories(dir);
      const std::string cmd = std::string("'") + HLAB_CLI_PATH + "' " + r + " --threads " + (rep ? "4" : "1") +
                              " --out '" + dir.string() + "' > /dev/null 2>&1";
      const int status = std::system(cmd.c_str());
      expect(WIFEXITED(status) && WEXITSTATUS(status) == 0, "'" + r + "' did not exit 0");
      for (const auto& entry : fs::directory_iterator(dir)) {
        digest[rep] += entry.path().filename().string() + "\n" + slurp(entry.path());
        files += rep;
      }
    }
    expect(!digest[0].empty() && digest[0] == digest[1], "'" + r + "' artifacts differ between runs");
  }
  fs::remove_all(base);

  PipelineConfig one, four;
  four.threads = 4;
  const auto oracle = ColoringOracle::seeded(2, 2, 2, 2, 21);
  expect(dump(to_json(run_pipeline(oracle, one))) == dump(to_json(run_pipeline(oracle, four))),
         "in-process pipeline result depends on the thread count");
  return std::to_string(runs.size()) + " commands rerun, " + std::to_string(files) + " artifacts byte-identical";
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit;
    std::function<std::string()> run;
  };
  const std::vector<Criterion> all{{1, "Ramsey oracle", 60, criterion1},
                                   {2, "difference lemma", 60, criterion2},
                                   {3, "product bound", 120, criterion3},
                                   {4, "Delta-systems", 180, criterion4},
                                   {5, "forcing pipeline soundness", 3000, criterion5},
                                   {6, "PH refutation", 60, criterion6},
                                   {7, "sideways containment", 120, criterion7},
                                   {8, "HL derivation", 60, criterion8},
                                   {9, "DDF/FPG bridge", 120, criterion9},
                                   {10, "determinism", 600, criterion10}};
  int failed = 0;
  for (const auto& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    try {
      detail = c.run();
    } catch (const std::exception& e) {
      ok = false;
      detail = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (ok && secs >= c.limit) {
      ok = false;
      detail = "took " + std::to_string(secs) + " s, limit " + std::to_string(c.limit) + " s";
    }
    char line[64];
    std::snprintf(line, sizeof line, "%s criterion %2d (%.1f s): ", ok ? "PASS" : "FAIL", c.id, secs);
    std::cout << line << c.name << ": " << detail << std::endl;
    failed += ok ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
