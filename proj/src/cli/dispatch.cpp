#include <filesystem>
#include <sstream>

#include "hlab/check.hpp"
#include "hlab/cli.hpp"
#include "hlab/errors.hpp"
#include "hlab/rng.hpp"
#include "hlab/serialize.hpp"

namespace hlab::cli {

namespace {

struct Outcome {
  int status = kExitOk;
  Json result = Json::object();
  std::vector<std::string> csv_header;
  std::vector<std::string> csv_row;
  std::string summary;
};

std::string csv_line(const std::vector<std::string>& cells) {
  std::string s;
  for (std::size_t i = 0; i < cells.size(); ++i) s += (i ? "," : "") + cells[i];
  return s + "\n";
}

template <typename... T>
std::vector<std::string> row(const T&... xs) {
  std::vector<std::string> out;
  auto put = [&](const auto& x) {
    std::ostringstream os;
    os << x;
    out.push_back(os.str());
  };
  (put(xs), ...);
  return out;
}

/// Accepts either a bare artifact or a full command document.
Json load_artifact(const std::string& path) {
  Json j = parse_json_file(path);
  return j.contains("result") ? j.at("result") : j;
}

const Json& field(const Json& j, const std::string& key) {
  if (!j.is_object() || !j.contains(key)) throw PreconditionError("input has no '" + key + "' field");
  return j.at(key);
}

Arena make_arena(const RunConfig& cfg) {
  const auto& mode = cfg.text("mode");
  if (mode != "identity" && mode != "seeded") throw UsageError("mode must be identity or seeded");
  return Arena({cfg.nat("M"), cfg.nat("n"), mode == "identity" ? ArenaMode::identity : ArenaMode::seeded,
                cfg.nat("seed")});
}

Outcome cmd_ramsey(const RunConfig& cfg) {
  Outcome o;
  const auto n = cfg.nat("n"), k = cfg.nat("k");
  o.csv_header = {"n", "k", "m_star", "m_k", "nodes"};
  try {
    const RamseyResult r = ramsey_m_star(n, k, cfg.nat("budget"));
    const std::size_t mk = m_seq(n, k, cfg.nat("budget"));
    if (cfg.flag("verify") && !is_good_coloring(r.m_star - 1, n, r.edges, r.witness)) {
      throw InternalError("Ramsey witness is not a good coloring");
    }
    o.result = to_json(r);
    o.result["m_k"] = mk;
    o.csv_row = row(n, k, r.m_star, mk, r.nodes);
    o.summary = std::to_string(r.m_star);
  } catch (const RamseyBudgetExceeded& e) {
    o.status = kExitBudget;
    o.result = Json{{"budget_exhausted", true}, {"lower", e.lower}, {"upper", e.upper}, {"nodes", e.nodes}};
    o.csv_row = row(n, k, "", "", e.nodes);
    o.summary = "budget exhausted: m* > " + std::to_string(e.lower - 1);
  }
  return o;
}

Outcome cmd_difference(const RunConfig& cfg) {
  Outcome o;
  const Arena arena = make_arena(cfg);
  const DifferenceReport r = difference_check(arena);
  o.result = Json{{"arena", to_json(arena.descriptor())},
                  {"sets", r.sets},
                  {"pairs", r.pairs},
                  {"violations", r.violations},
                  {"max_mismatches", r.max_mismatches}};
  if (r.counterexample) {
    o.result["counterexample"] = Json{to_json(r.counterexample->first), to_json(r.counterexample->second)};
  }
  o.csv_header = {"n", "M", "mode", "seed", "sets", "pairs", "violations"};
  o.csv_row = row(cfg.nat("n"), cfg.nat("M"), cfg.text("mode"), cfg.nat("seed"), r.sets, r.pairs, r.violations);
  o.status = r.violations == 0 && r.max_mismatches == 0 ? kExitOk : kExitFailure;
  o.summary = std::to_string(r.pairs) + " eligible pairs, " + std::to_string(r.violations) + " violations";
  return o;
}

Outcome cmd_product_bound(const RunConfig& cfg) {
  Outcome o;
  const Arena arena = make_arena(cfg);
  const std::size_t n = arena.dim(), k = cfg.nat("k"), size = cfg.nat("size"), U = cfg.nat("universe");
  if (U > arena.size()) throw UsageError("universe must not exceed the arena size M");
  if (size > U) throw UsageError("size must not exceed the universe");
  std::uint64_t checked = 0, violations = 0;
  std::size_t min_colors = SIZE_MAX;
  std::vector<OrdSet> min_sets, bad_sets;
  auto check = [&](const std::vector<OrdSet>& As) {
    ++checked;
    const ProductBoundReport r = verify_product_bound(arena, As, k, size);
    if (r.census.size() < min_colors) {
      min_colors = r.census.size();
      min_sets = As;
    }
    if (!r.holds) {
      ++violations;
      if (bad_sets.empty()) bad_sets = As;
    }
  };
  if (cfg.nat("trials") == 0) {
    const auto all = subsets_of_size(OrdSet::range(0, U), size);
    std::vector<std::size_t> pos(n + 1, 0);
    while (!all.empty()) {
      std::vector<OrdSet> As;
      for (std::size_t p : pos) As.push_back(all[p]);
      check(As);
      std::size_t i = pos.size();
      while (i > 0 && pos[i - 1] + 1 == all.size()) {
        pos[i - 1] = 0;
        --i;
      }
      if (i == 0) break;
      ++pos[i - 1];
    }
  } else {
    Rng rng = Rng::derived(cfg.nat("seed"), 0x7062);
    for (std::uint64_t t = 0; t < cfg.nat("trials"); ++t) {
      std::vector<OrdSet> As;
      for (std::size_t i = 0; i <= n; ++i) {
        std::vector<Ord> v(U);
        for (std::size_t x = 0; x < U; ++x) v[x] = x;
        rng.shuffle(v);
        v.resize(size);
        As.push_back(OrdSet::from_unsorted(v));
      }
      check(As);
    }
  }
  Json mins = Json::array();
  for (const auto& A : min_sets) mins.push_back(to_json(A));
  o.result = Json{{"arena", to_json(arena.descriptor())}, {"k", k},         {"size", size},
                  {"universe", U},                        {"checked", checked}, {"violations", violations},
                  {"min_colors", min_colors},              {"min_sets", mins}};
  if (!min_sets.empty()) {
    std::istringstream census(census_csv(verify_product_bound(arena, min_sets, k, size).census));
    Json lines = Json::array();
    for (std::string line; std::getline(census, line);) lines.push_back(line);
    o.result["min_census_csv"] = lines;
  }
  if (!bad_sets.empty()) {
    Json bad = Json::array();
    for (const auto& A : bad_sets) bad.push_back(to_json(A));
    o.result["first_violation"] = bad;
  }
  o.csv_header = {"n", "k", "size", "universe", "checked", "violations", "min_colors"};
  o.csv_row = row(n, k, size, U, checked, violations, min_colors);
  o.status = violations == 0 ? kExitOk : kExitFailure;
  o.summary = std::to_string(checked) + " products, least census " + std::to_string(min_colors) + ", " +
              std::to_string(violations) + " violations";
  return o;
}

Outcome cmd_ph(const RunConfig& cfg) {
  Outcome o;
  const Arena arena = make_arena(cfg);
  const std::size_t n = arena.dim();
  const auto& fn = cfg.text("fn");
  std::optional<CofinalFn> F;
  if (fn == "max-plus-length") {
    F = CofinalFn::max_plus_length(n + 1, cfg.nat("domain"), arena.size());
  } else if (fn == "random-strict") {
    F = CofinalFn::random_strict(n + 1, cfg.nat("domain"), arena.size(), cfg.nat("gmax"), cfg.nat("seed"));
  } else {
    throw UsageError("fn must be max-plus-length or random-strict");
  }
  o.csv_header = {"fn", "seed", "M", "n", "refuted", "i_star"};
  if (!F) {
    o.status = kExitFailure;
    o.result = Json{{"fn", fn}, {"generated", false}, {"reason", "values overflow the arena for this seed"}};
    o.csv_row = row(fn, cfg.nat("seed"), arena.size(), n, "false", "");
    o.summary = "no strict function for this seed";
    return o;
  }
  const Refutation r = refute(*F, arena, cfg.nat("seed"));
  bool ok = r.refuted;
  if (cfg.flag("verify")) ok = ok && check_refutation(*F, arena, r);
  o.result = Json{{"fn", F->name()}, {"arena", to_json(arena.descriptor())}, {"refutation", to_json(r)}};
  o.csv_row = row(fn, cfg.nat("seed"), arena.size(), n, ok ? "true" : "false",
                  r.i_star ? std::to_string(*r.i_star) : std::string());
  o.status = ok ? kExitOk : kExitFailure;
  o.summary = ok ? "refuted: c(F*(sigma0)) != c(F*(sigma1))" : "no refutation";
  return o;
}

Family family_for(const RunConfig& cfg) {
  if (!cfg.text("input").empty()) return family_from_json(field(parse_json_file(cfg.text("input")), "family"));
  const auto& kind = cfg.text("family");
  const OrdSet H = OrdSet::range(0, cfg.nat("H"));
  if (kind == "identity") return Family::build(cfg.nat("n"), H, [](const OrdSet& b) { return b; });
  if (kind == "min-singleton") {
    return Family::build(cfg.nat("n"), H, [](const OrdSet& b) { return b.empty() ? OrdSet{} : OrdSet{b.min()}; });
  }
  throw UsageError("family must be identity or min-singleton");
}

Outcome cmd_delta_verify(const RunConfig& cfg) {
  Outcome o;
  const Family fam = family_for(cfg);
  const UniformVerdict v = verify_uniform(fam);
  if (cfg.flag("verify") && certificate_from_json(to_json(v.cert)) != v.cert) {
    throw InternalError("certificate JSON round trip changed the certificate");
  }
  Json und = Json::array();
  for (const auto& m : v.cert.undetermined()) und.push_back(to_json(m));
  o.result = Json{{"certified", v.certified()},
                  {"certificate", to_json(v.cert)},
                  {"undetermined", und},
                  {"violation", v.violation ? to_json(*v.violation) : Json()}};
  o.csv_header = {"n", "H", "rho", "certified", "undetermined"};
  o.csv_row = row(fam.dim(), fam.index_set().size(), v.cert.rho, v.certified() ? "true" : "false", und.size());
  o.status = v.certified() ? kExitOk : kExitFailure;
  o.summary = v.certified()       ? "certified, rho = " + std::to_string(v.cert.rho)
              : v.violation       ? "violation (" + v.violation->kind + ") at " + to_string(v.violation->a) + ", " +
                                  to_string(v.violation->b)
                                  : std::to_string(und.size()) + " undetermined patterns";
  return o;
}

Outcome cmd_delta_extract(const RunConfig& cfg) {
  Outcome o;
  std::optional<Family> fam;
  std::map<OrdSet, std::size_t> g;
  Json source;
  if (!cfg.text("input").empty()) {
    const Json in = parse_json_file(cfg.text("input"));
    fam = family_from_json(field(in, "family"));
    if (in.contains("g")) {
      for (const auto& e : field(in, "g")) g.emplace(ordset_from_json(field(e, "b")), field(e, "g").get<std::size_t>());
    }
    source = Json{{"input", cfg.text("input")}};
  } else {
    PlantedInstance inst = make_planted(cfg.nat("total"), cfg.nat("planted"), cfg.nat("noise"), cfg.nat("seed"));
    fam = std::move(inst.fam);
    g = std::move(inst.g);
    source = Json{{"planted", to_json(inst.planted)}};
  }
  const std::size_t h = cfg.nat("h");
  o.csv_header = {"H", "h", "status", "found_size", "nodes"};
  ExtractResult ex;
  if (h > fam->index_set().size()) {
    ex.status = ExtractStatus::none;
  } else {
    ex = extract_uniform(*fam, h, [&](const OrdSet& b) { return g.count(b) ? g.at(b) : 0; }, cfg.nat("budget"));
  }
  Json result{{"source", source}, {"extraction", to_json(ex)}};
  if (ex.status == ExtractStatus::found) {
    const Family sub = fam->restrict(ex.H);
    const UniformVerdict v = verify_uniform(sub);
    if (!v.certified()) throw InternalError("extracted subfamily failed verification");
    if (cfg.flag("verify") && verify_uniform(family_from_json(to_json(sub))).cert != v.cert) {
      throw InternalError("family JSON round trip changed the certificate");
    }
    result["certificate"] = to_json(v.cert);
  } else if (h > fam->index_set().size()) {
    result["reason"] = "index set has fewer than h elements";
  }
  o.result = result;
  const char* st = ex.status == ExtractStatus::found ? "found" : ex.status == ExtractStatus::budget ? "budget" : "none";
  o.csv_row = row(fam->index_set().size(), h, st, ex.H.size(), ex.nodes);
  o.status = ex.status == ExtractStatus::found ? kExitOk : ex.status == ExtractStatus::budget ? kExitBudget : kExitFailure;
  o.summary = ex.status == ExtractStatus::found ? "H' = " + to_string(ex.H) : std::string("extraction ") + st;
  return o;
}

ColoringOracle oracle_for(const RunConfig& cfg) {
  if (!cfg.text("oracle-file").empty()) return oracle_from_json(parse_json_file(cfg.text("oracle-file")));
  const auto d = cfg.nat("d"), k = cfg.nat("k"), depth = cfg.nat("depth-oracle");
  const auto& kind = cfg.text("oracle");
  if (kind == "seeded") return ColoringOracle::seeded(d, k, depth, cfg.nat("colors"), cfg.nat("seed"));
  if (kind == "constant") return ColoringOracle::constant(d, k, depth, 0);
  if (kind == "first-letter") return ColoringOracle::first_letter(d, k, depth);
  throw UsageError("oracle must be seeded, constant or first-letter");
}

Outcome cmd_pipeline(const RunConfig& cfg, const std::string& out_dir) {
  Outcome o;
  const ColoringOracle oracle = oracle_for(cfg);
  o.csv_header = {"d", "k", "oracle_depth", "density", "branches", "seed", "status", "theta", "color"};
  if (!cfg.text("check").empty()) {
    const GridWitness w = grid_from_json(field(load_artifact(cfg.text("check")), "witness"));
    const auto err = validate_grid_witness(oracle, w);
    o.result = Json{{"checked", cfg.text("check")}, {"valid", !err}, {"problem", err ? Json(*err) : Json()}};
    o.csv_row = row(oracle.dim(), oracle.branching(), oracle.depth(), w.density_depth, "", cfg.nat("seed"),
                    err ? "invalid" : "valid", "", w.color);
    o.status = err ? kExitFailure : kExitOk;
    o.summary = err ? "invalid witness: " + *err : "witness valid";
    return o;
  }
  PipelineConfig pc;
  pc.density_depth = cfg.nat("density");
  pc.branches = cfg.nat("branches");
  pc.buffer = cfg.nat("buffer");
  pc.theta0 = cfg.nat("theta0");
  pc.theta_cap = cfg.nat("theta-cap");
  pc.tree_depth = cfg.nat("tree-depth");
  pc.extract_budget = cfg.nat("budget");
  pc.threads = cfg.nat("threads");
  try {
    const PipelineResult r = run_pipeline(oracle, pc);
    if (cfg.flag("verify")) {
      if (auto err = validate_grid_witness(oracle, grid_from_json(to_json(r.witness)))) {
        throw InternalError("witness failed re-validation after JSON round trip: " + *err);
      }
    }
    o.result = to_json(r);
    o.result["oracle"] = to_json(oracle);
    write_text((std::filesystem::path(out_dir) / "force-pipeline.witness.json").string(),
               dump(Json{{"witness", to_json(r.witness)}}));
    o.csv_row = row(oracle.dim(), oracle.branching(), oracle.depth(), pc.density_depth, pc.branches, cfg.nat("seed"),
                    "ok", r.theta, r.witness.color);
    o.summary = "witness of color " + std::to_string(r.witness.color) + " validated (theta " +
                std::to_string(r.theta) + ")";
  } catch (const PipelineFailure& e) {
    o.status = kExitFailure;
    o.result = Json{{"failure", e.what()}, {"transcript", e.transcript}};
    o.csv_row = row(oracle.dim(), oracle.branching(), oracle.depth(), pc.density_depth, pc.branches, cfg.nat("seed"),
                    "failed", "", "");
    o.summary = std::string("pipeline failed: ") + e.what();
  }
  return o;
}

LevelColoring coloring_for(const RunConfig& cfg) {
  if (!cfg.text("coloring-file").empty()) return level_coloring_from_json(parse_json_file(cfg.text("coloring-file")));
  const auto d = cfg.nat("d"), k = cfg.nat("k"), N = cfg.nat("N");
  const auto& kind = cfg.text("coloring");
  if (kind == "constant") return LevelColoring::constant(d, k, N, cfg.nat("color"));
  if (kind == "level-parity") return LevelColoring::level_parity(d, k, N, cfg.nat("offset"));
  if (kind == "seeded") return LevelColoring::seeded(d, k, N, cfg.nat("r"), cfg.nat("seed"));
  if (kind == "planted") {
    return LevelColoring::planted(d, k, N, cfg.nat("r"), std::vector<Word>(d, word_from_string(cfg.text("root"))),
                                  cfg.nat("color"), cfg.nat("seed"));
  }
  if (kind == "adversarial") return LevelColoring::adversarial(d, k, N);
  throw UsageError("unknown coloring '" + kind + "'");
}

GridSearchOptions grid_options(const RunConfig& cfg) {
  GridSearchOptions opt;
  opt.density_depth = cfg.nat("density");
  opt.budget = cfg.nat("budget");
  if (cfg.params.count("min-size")) opt.min_size = cfg.nat("min-size");
  if (cfg.params.count("cap")) opt.size_cap = cfg.nat("cap");
  return opt;
}

const char* search_status(SearchStatus s) {
  return s == SearchStatus::found ? "found" : s == SearchStatus::budget ? "budget" : "none";
}

Outcome cmd_grid_search(const RunConfig& cfg) {
  Outcome o;
  const LevelColoring gamma = coloring_for(cfg);
  const BranchColoring color = surrogate_coloring(gamma);
  o.csv_header = {"kind", "d", "k", "N", "density", "status", "color", "nodes"};
  if (!cfg.text("check").empty()) {
    const GridWitness w = grid_from_json(field(load_artifact(cfg.text("check")), "witness"));
    const auto err = validate_grid(color, gamma.dim(), w);
    o.result = Json{{"checked", cfg.text("check")}, {"valid", !err}, {"problem", err ? Json(*err) : Json()}};
    o.csv_row = row(gamma.kind(), gamma.dim(), gamma.branching(), gamma.depth(), w.density_depth,
                    err ? "invalid" : "valid", w.color, 0);
    o.status = err ? kExitFailure : kExitOk;
    o.summary = err ? "invalid witness: " + *err : "witness valid";
    return o;
  }
  const GridSearchResult r = search_grid(color, gamma.shapes(), grid_options(cfg));
  if (r.witness) {
    if (auto err = validate_grid(color, gamma.dim(), *r.witness)) throw InternalError("search returned " + *err);
  }
  o.result = Json{{"coloring", to_json(gamma)},
                  {"status", search_status(r.status)},
                  {"nodes", r.nodes},
                  {"witness", r.witness ? to_json(*r.witness) : Json()}};
  o.csv_row = row(gamma.kind(), gamma.dim(), gamma.branching(), gamma.depth(), cfg.nat("density"),
                  search_status(r.status), r.witness ? std::to_string(r.witness->color) : "", r.nodes);
  o.status = r.status == SearchStatus::found ? kExitOk : r.status == SearchStatus::budget ? kExitBudget : kExitFailure;
  o.summary = r.witness ? "grid of color " + std::to_string(r.witness->color) + " found" :
                          std::string("no grid (") + search_status(r.status) + ")";
  return o;
}

Outcome cmd_hl(const RunConfig& cfg) {
  Outcome o;
  const LevelColoring gamma = coloring_for(cfg);
  o.csv_header = {"kind", "d", "k", "N", "h", "full", "height", "levels"};
  if (!cfg.text("check").empty()) {
    const HLWitness w = hl_witness_from_json(field(field(load_artifact(cfg.text("check")), "derivation"), "witness"));
    const bool ok = verify_hl_witness(gamma, w);
    o.result = Json{{"checked", cfg.text("check")}, {"valid", ok}};
    o.csv_row = row(gamma.kind(), gamma.dim(), gamma.branching(), gamma.depth(), w.levels.size(),
                    ok ? "valid" : "invalid", w.levels.size(), to_string(w.levels));
    o.status = ok ? kExitOk : kExitFailure;
    o.summary = ok ? "strong subtree witness valid" : "strong subtree witness invalid";
    return o;
  }
  GridWitness grid;
  const BranchColoring color = surrogate_coloring(gamma);
  if (!cfg.text("grid-file").empty()) {
    grid = grid_from_json(field(load_artifact(cfg.text("grid-file")), "witness"));
    if (auto err = validate_grid(color, gamma.dim(), grid)) throw PreconditionError("grid witness invalid: " + *err);
  } else {
    const GridSearchResult r = search_grid(color, gamma.shapes(), grid_options(cfg));
    if (!r.witness) {
      o.status = r.status == SearchStatus::budget ? kExitBudget : kExitFailure;
      o.result = Json{{"coloring", to_json(gamma)}, {"grid_search", search_status(r.status)}};
      o.csv_row = row(gamma.kind(), gamma.dim(), gamma.branching(), gamma.depth(), cfg.nat("h"), "false", 0, "");
      o.summary = "no monochromatic grid to start from";
      return o;
    }
    grid = *r.witness;
  }
  const HLDerivation der = derive_strong_subtrees(gamma, grid, cfg.nat("h"));
  o.result = Json{{"coloring", to_json(gamma)}, {"grid", to_json(grid)}, {"derivation", to_json(der)}};
  o.csv_row = row(gamma.kind(), gamma.dim(), gamma.branching(), gamma.depth(), cfg.nat("h"),
                  der.full ? "true" : "false", der.height, to_string(der.witness.levels));
  o.status = der.full ? kExitOk : kExitFailure;
  o.summary = der.full ? "full witness on levels " + to_string(der.witness.levels)
                       : "partial witness of height " + std::to_string(der.height) + ": " + der.reason;
  return o;
}

Outcome cmd_sideways(const RunConfig& cfg) {
  Outcome o;
  const std::size_t k = cfg.nat("k"), N = cfg.nat("N"), D = cfg.nat("density"), J = cfg.nat("J");
  const TreeShape shape{k, N, 0};
  shape.validate();
  // A seeded jmap, to show the built coloring itself.
  const auto branches = extensions({}, k, N);
  std::map<Word, Color> jtable;
  Rng rng = Rng::derived(cfg.nat("seed"), 0x736a);
  for (const auto& x : branches) jtable[x] = J ? rng.below(J) : 0;
  const BranchColoring built = sideways_build([&](const BranchTuple& x) { return jtable.at(x[0]); }, 1, J, N);
  Json table = Json::array();
  for (const auto& x0 : branches) {
    std::string colors;
    for (const auto& x1 : branches) colors += std::to_string(built({x0, x1}));
    table.push_back(Json{{"x0", word_to_string(x0)}, {"j", jtable.at(x0)}, {"colors", colors}});
  }
  const SidewaysScan scan = sideways_containment_scan(k, N, D, J);
  o.result = Json{{"coloring", table},
                  {"containment",
                   Json{{"checked", scan.checked},
                        {"violations", scan.violations},
                        {"counterexample", scan.counterexample ? Json(*scan.counterexample) : Json()}}}};
  o.csv_header = {"k", "N", "density", "J", "checked", "violations"};
  o.csv_row = row(k, N, D, J, scan.checked, scan.violations);
  o.status = scan.violations == 0 ? kExitOk : kExitFailure;
  o.summary = std::to_string(scan.checked) + " monochromatic rows checked, " + std::to_string(scan.violations) +
              " violations";
  return o;
}

Outcome cmd_ddf(const RunConfig& cfg) {
  Outcome o;
  const DdfBridgeReport r =
      cfg.nat("samples") == 0
          ? ddf_bridge_scan(cfg.nat("d"), cfg.nat("k"), cfg.nat("N"), cfg.nat("density"), cfg.nat("mcap"),
                            cfg.nat("fam-cap"))
          : ddf_bridge_sample(cfg.nat("d"), cfg.nat("k"), cfg.nat("N"), cfg.nat("density"), cfg.nat("mcap"),
                              cfg.nat("fam-cap"), cfg.nat("samples"), cfg.nat("seed"));
  o.result = Json{{"relations", r.relations},
                  {"ddf", r.ddf},
                  {"families", r.families},
                  {"failures", r.failures},
                  {"counterexample", r.counterexample ? Json(*r.counterexample) : Json()}};
  o.csv_header = {"d", "k", "N", "density", "mcap", "samples", "relations", "ddf", "families", "failures"};
  o.csv_row = row(cfg.nat("d"), cfg.nat("k"), cfg.nat("N"), cfg.nat("density"), cfg.nat("mcap"), cfg.nat("samples"),
                  r.relations, r.ddf,
                  r.families, r.failures);
  o.status = r.failures == 0 ? kExitOk : kExitFailure;
  o.summary = std::to_string(r.ddf) + " DDF relations, " + std::to_string(r.families) + " cone families, " +
              std::to_string(r.failures) + " failures";
  return o;
}

}  // namespace

int dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    Outcome o;
    const auto& c = cfg.command;
    if (c == "ramsey") o = cmd_ramsey(cfg);
    else if (c == "difference-check") o = cmd_difference(cfg);
    else if (c == "product-bound") o = cmd_product_bound(cfg);
    else if (c == "ph-refute") o = cmd_ph(cfg);
    else if (c == "delta-verify") o = cmd_delta_verify(cfg);
    else if (c == "delta-extract") o = cmd_delta_extract(cfg);
    else if (c == "force-pipeline") o = cmd_pipeline(cfg, cfg.out_dir);
    else if (c == "hl-derive") o = cmd_hl(cfg);
    else if (c == "grid-search") o = cmd_grid_search(cfg);
    else if (c == "sideways-build") o = cmd_sideways(cfg);
    else if (c == "ddf-check") o = cmd_ddf(cfg);
    else throw UsageError("unknown subcommand '" + c + "'");

    Json params = Json::object();
    for (const auto& [key, value] : cfg.params) {
      if (key != "out" && key != "threads") params[key] = value;
    }
    const Json doc{{"command", c}, {"config", params}, {"exit_status", o.status}, {"result", o.result}};
    const std::filesystem::path dir(cfg.out_dir);
    write_text((dir / (c + ".json")).string(), dump(doc));
    write_text((dir / (c + ".csv")).string(), csv_line(o.csv_header) + csv_line(o.csv_row));
    out << o.summary << "\n";
    return o.status;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const PreconditionError& e) {
    err << "invalid parameters: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Json::exception& e) {
    err << "malformed input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const BudgetExceeded& e) {
    err << "budget exhausted: " << e.what() << "\n";
    return kExitBudget;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty() || args[0] == "--help" || args[0] == "-h" || args[0] == "help") {
    (args.empty() ? err : out) << usage();
    return args.empty() ? kExitUsage : kExitOk;
  }
  RunConfig cfg;
  try {
    cfg = parse_config(args);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n" << "run 'hlab --help' for the list of subcommands and keys\n";
    return kExitUsage;
  }
  return dispatch(cfg, out, err);
}

}  // namespace hlab::cli
