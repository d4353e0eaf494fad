#include "hlab/serialize.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hlab/errors.hpp"

namespace hlab {

namespace {

template <typename F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw PreconditionError(std::string("malformed ") + what + ": " + e.what());
  }
}

Json tuple_json(const NodeTuple& t) { return words_json(t); }

const char* status_name(ExtractStatus s) {
  return s == ExtractStatus::found ? "found" : s == ExtractStatus::budget ? "budget" : "none";
}

}  // namespace

Json to_json(const OrdSet& a) { return Json(a.elems()); }

Json words_json(const std::vector<Word>& ws) {
  Json out = Json::array();
  for (const auto& w : ws) out.push_back(word_to_string(w));
  return out;
}

Json to_json(const TreeShape& s) { return Json{{"k", s.k}, {"depth", s.depth}, {"coord", s.coord}}; }

Json to_json(const BranchSet& Y) { return Json{{"shape", to_json(Y.shape())}, {"branches", words_json(Y.branches())}}; }

Json to_json(const GridWitness& w) {
  Json sets = Json::array();
  for (const auto& Y : w.sets) sets.push_back(to_json(Y));
  return Json{{"color", w.color}, {"density_depth", w.density_depth}, {"roots", words_json(w.roots)}, {"sets", sets}};
}

Json to_json(const StrongSubtreeWitness& w) {
  Json nodes = Json::array();
  for (const auto& level : w.nodes) nodes.push_back(words_json(level));
  return Json{{"levels", to_json(w.levels)}, {"nodes", nodes}};
}

Json to_json(const HLWitness& w) {
  Json subs = Json::array();
  for (const auto& s : w.subtrees) subs.push_back(to_json(s));
  return Json{{"levels", to_json(w.levels)}, {"subtrees", subs}};
}

Json to_json(const HLDerivation& r) {
  return Json{{"full", r.full},
              {"height", r.height},
              {"failed_stage", r.failed_stage ? Json(*r.failed_stage) : Json()},
              {"reason", r.reason},
              {"witness", to_json(r.witness)}};
}

Json to_json(const Family& fam) {
  Json sets = Json::array();
  for (const auto& [b, u] : fam.sets()) sets.push_back(Json{{"b", to_json(b)}, {"u", to_json(u)}});
  return Json{{"n", fam.dim()}, {"H", to_json(fam.index_set())}, {"sets", sets}};
}

Json to_json(const UniformCertificate& c) {
  Json r = Json::array();
  for (const auto& [m, rm] : c.r) r.push_back(Json{{"m", to_json(m)}, {"r", rm ? to_json(*rm) : Json()}});
  return Json{{"rho", c.rho}, {"r", r}};
}

Json to_json(const DeltaViolation& v) {
  return Json{{"kind", v.kind}, {"a", to_json(v.a)}, {"b", to_json(v.b)}, {"detail", v.detail}};
}

Json to_json(const ExtractResult& r) {
  return Json{{"status", status_name(r.status)},
              {"H", to_json(r.H)},
              {"rho", r.rho ? Json(*r.rho) : Json()},
              {"color", r.color ? Json(*r.color) : Json()},
              {"best_partial", to_json(r.best_partial)},
              {"nodes", r.nodes}};
}

Json to_json(const ArenaDescriptor& a) {
  return Json{{"M", a.M}, {"n", a.n}, {"mode", a.mode == ArenaMode::identity ? "identity" : "seeded"}, {"seed", a.seed}};
}

Json to_json(const TupleColor& c) { return Json{{"slot", c.slot}, {"value", c.value}}; }

Json to_json(const Refutation& r) {
  auto sigma = [](const SigmaSeq& s) {
    Json out = Json::array();
    for (const auto& t : s) out.push_back(Json(t));
    return out;
  };
  return Json{{"refuted", r.refuted},
              {"probe", sigma(r.probe)},
              {"probe_value", to_json(r.probe_value)},
              {"i_star", r.i_star ? Json(*r.i_star) : Json()},
              {"alpha_star", r.alpha_star ? Json(*r.alpha_star) : Json()},
              {"sigma0", sigma(r.sigma0)},
              {"sigma1", sigma(r.sigma1)},
              {"value0", to_json(r.value0)},
              {"value1", to_json(r.value1)},
              {"samples", r.samples},
              {"transcript", r.transcript}};
}

Json to_json(const RamseyResult& r) {
  Json edges = Json::array();
  for (std::size_t x = 0; x < r.edges.size(); ++x) {
    edges.push_back(Json{{"edge", to_json(r.edges[x])}, {"color", r.witness[x]}});
  }
  return Json{{"m_star", r.m_star}, {"nodes", r.nodes}, {"witness", edges}};
}

Json to_json(const Condition& p) {
  Json out = Json::array();
  for (const auto& [alpha, t] : p) out.push_back(Json{{"alpha", alpha}, {"nodes", tuple_json(t)}});
  return out;
}

Json to_json(const PipelineResult& r) {
  Json chain = Json::array();
  for (const auto& q : r.chain) chain.push_back(to_json(q));
  return Json{{"witness", to_json(r.witness)},
              {"theta", r.theta},
              {"H", to_json(r.H)},
              {"certificate", to_json(r.cert)},
              {"delta", to_json(r.delta)},
              {"A", r.A},
              {"tags", words_json(r.tags)},
              {"root_condition", to_json(r.root_condition)},
              {"chain", chain},
              {"transcript", r.transcript}};
}

Json to_json(const ColoringOracle& o) {
  return Json{{"d", o.dim()},   {"k", o.branching()}, {"depth", o.depth()}, {"colors", o.colors()},
              {"kind", o.kind()}, {"seed", o.seed()},   {"table", o.table()}};
}

Json to_json(const LevelColoring& g) {
  Json out{{"kind", g.kind()}, {"d", g.dim()}, {"k", g.branching()}, {"N", g.depth()}, {"r", g.colors()}};
  if (g.kind() == "constant" || g.kind() == "planted") out["color"] = g.planted_color();
  if (g.kind() == "level-parity") out["offset"] = g.offset();
  if (g.kind() == "seeded" || g.kind() == "planted") out["seed"] = g.seed();
  if (g.kind() == "planted") out["roots"] = words_json(g.roots());
  if (g.kind() == "table") out["tables"] = g.tables();
  return out;
}

OrdSet ordset_from_json(const Json& j) {
  return guarded("ordinal set", [&] { return OrdSet(j.get<std::vector<Ord>>()); });
}

std::vector<Word> words_from_json(const Json& j) {
  return guarded("word list", [&] {
    std::vector<Word> out;
    for (const auto& s : j) out.push_back(word_from_string(s.get<std::string>()));
    return out;
  });
}

TreeShape shape_from_json(const Json& j) {
  return guarded("tree shape", [&] {
    TreeShape s{j.at("k").get<std::size_t>(), j.at("depth").get<std::size_t>(), j.value("coord", std::size_t{0})};
    s.validate();
    return s;
  });
}

BranchSet branch_set_from_json(const Json& j) {
  return guarded("branch set", [&] { return BranchSet(shape_from_json(j.at("shape")), words_from_json(j.at("branches"))); });
}

GridWitness grid_from_json(const Json& j) {
  return guarded("grid witness", [&] {
    GridWitness w;
    w.color = j.at("color").get<Color>();
    w.density_depth = j.at("density_depth").get<std::size_t>();
    w.roots = words_from_json(j.at("roots"));
    for (const auto& s : j.at("sets")) w.sets.push_back(branch_set_from_json(s));
    return w;
  });
}

HLWitness hl_witness_from_json(const Json& j) {
  return guarded("strong subtree witness", [&] {
    HLWitness w;
    w.levels = ordset_from_json(j.at("levels"));
    for (const auto& s : j.at("subtrees")) {
      StrongSubtreeWitness sub;
      sub.levels = ordset_from_json(s.at("levels"));
      for (const auto& level : s.at("nodes")) sub.nodes.push_back(words_from_json(level));
      w.subtrees.push_back(std::move(sub));
    }
    return w;
  });
}

Family family_from_json(const Json& j) {
  return guarded("family", [&] {
    std::map<OrdSet, OrdSet> u;
    for (const auto& e : j.at("sets")) u.emplace(ordset_from_json(e.at("b")), ordset_from_json(e.at("u")));
    return Family(j.at("n").get<std::size_t>(), ordset_from_json(j.at("H")), std::move(u));
  });
}

UniformCertificate certificate_from_json(const Json& j) {
  return guarded("certificate", [&] {
    UniformCertificate c;
    c.rho = j.at("rho").get<std::size_t>();
    for (const auto& e : j.at("r")) {
      const Json& r = e.at("r");
      c.r.emplace(ordset_from_json(e.at("m")), r.is_null() ? std::nullopt : std::optional<OrdSet>(ordset_from_json(r)));
    }
    return c;
  });
}

ArenaDescriptor arena_from_json(const Json& j) {
  return guarded("arena descriptor", [&] {
    ArenaDescriptor a;
    a.M = j.at("M").get<std::size_t>();
    a.n = j.at("n").get<std::size_t>();
    const auto mode = j.at("mode").get<std::string>();
    if (mode != "identity" && mode != "seeded") throw PreconditionError("unknown arena mode " + mode);
    a.mode = mode == "identity" ? ArenaMode::identity : ArenaMode::seeded;
    a.seed = j.value("seed", std::uint64_t{0});
    return a;
  });
}

Condition condition_from_json(const Json& j) {
  return guarded("condition", [&] {
    Condition p;
    for (const auto& e : j) p.emplace(e.at("alpha").get<Ord>(), words_from_json(e.at("nodes")));
    return p;
  });
}

ColoringOracle oracle_from_json(const Json& j) {
  return guarded("oracle", [&] {
    const auto d = j.at("d").get<std::size_t>();
    const auto k = j.at("k").get<std::size_t>();
    const auto depth = j.at("depth").get<std::size_t>();
    const auto kind = j.value("kind", std::string("table"));
    if (j.contains("table")) {
      return ColoringOracle(d, k, depth, j.at("colors").get<std::size_t>(), j.at("table").get<std::vector<Color>>(),
                            kind, j.value("seed", std::uint64_t{0}));
    }
    if (kind == "constant") return ColoringOracle::constant(d, k, depth, j.value("color", Color{0}));
    if (kind == "first-letter") return ColoringOracle::first_letter(d, k, depth);
    if (kind == "seeded") {
      return ColoringOracle::seeded(d, k, depth, j.at("colors").get<std::size_t>(), j.at("seed").get<std::uint64_t>());
    }
    throw PreconditionError("unknown oracle kind " + kind);
  });
}

LevelColoring level_coloring_from_json(const Json& j) {
  return guarded("level coloring", [&] {
    const auto kind = j.at("kind").get<std::string>();
    const auto d = j.at("d").get<std::size_t>();
    const auto k = j.at("k").get<std::size_t>();
    const auto N = j.at("N").get<std::size_t>();
    if (kind == "constant") return LevelColoring::constant(d, k, N, j.at("color").get<Color>());
    if (kind == "level-parity") return LevelColoring::level_parity(d, k, N, j.value("offset", std::size_t{0}));
    if (kind == "seeded") {
      return LevelColoring::seeded(d, k, N, j.at("r").get<std::size_t>(), j.at("seed").get<std::uint64_t>());
    }
    if (kind == "planted") {
      return LevelColoring::planted(d, k, N, j.at("r").get<std::size_t>(), words_from_json(j.at("roots")),
                                    j.at("color").get<Color>(), j.at("seed").get<std::uint64_t>());
    }
    if (kind == "adversarial") return LevelColoring::adversarial(d, k, N);
    if (kind == "table") {
      return LevelColoring::table(d, k, N, j.at("r").get<std::size_t>(),
                                  j.at("tables").get<std::vector<std::vector<Color>>>());
    }
    throw PreconditionError("unknown level coloring kind " + kind);
  });
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json parse_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw PreconditionError("malformed JSON in " + path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace hlab
