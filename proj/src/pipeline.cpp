#include <algorithm>
#include <thread>
#include <tuple>

#include "hlab/check.hpp"
#include "hlab/errors.hpp"
#include "hlab/forcing.hpp"

namespace hlab {

namespace {

std::map<OrdSet, DecidedColor> decide_all(const Condition& p, const ColoringOracle& oracle,
                                          std::size_t theta, std::size_t threads) {
  const auto sets = subsets_of_size(OrdSet::range(0, theta), oracle.dim());
  std::vector<DecidedColor> out(sets.size());
  const std::size_t workers = std::max<std::size_t>(1, std::min(threads, sets.size()));
  auto work = [&](std::size_t w) {
    for (std::size_t x = w; x < sets.size(); x += workers) out[x] = decide_color(p, sets[x], oracle, theta);
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  std::map<OrdSet, DecidedColor> by_set;
  for (std::size_t x = 0; x < sets.size(); ++x) by_set.emplace(sets[x], std::move(out[x]));
  return by_set;
}

OrdSet positions_in(const OrdSet& a, const OrdSet& u) {
  std::vector<Ord> out;
  for (Ord x : a) out.push_back(*u.position(x));
  return OrdSet(std::move(out));
}

/// Every tuple choosing one element from each list, lexicographically.
std::vector<std::vector<Ord>> product_of(const std::vector<std::vector<Ord>>& lists) {
  std::vector<std::vector<Ord>> out{{}};
  for (const auto& l : lists) {
    std::vector<std::vector<Ord>> next;
    for (const auto& t : out) {
      for (Ord x : l) {
        auto u = t;
        u.push_back(x);
        next.push_back(std::move(u));
      }
    }
    out = std::move(next);
  }
  return out;
}

std::string stage_name(std::size_t i, std::size_t k) {
  return "(" + std::to_string(i) + "," + std::to_string(k) + ")";
}

}  // namespace

PipelineResult run_pipeline(const ColoringOracle& oracle, const PipelineConfig& cfg) {
  const std::size_t d = oracle.dim();
  const std::size_t K = cfg.branches;
  if (K < 1 || cfg.buffer < 1) throw PreconditionError("branch count and buffer must be positive");
  if (cfg.density_depth > cfg.tree_depth || oracle.depth() > cfg.tree_depth) {
    throw PreconditionError("tree depth must cover the oracle and density depths");
  }
  if (cfg.theta0 < 1) throw PreconditionError("initial theta must be positive");
  const auto shapes = uniform_shapes(d, oracle.branching(), cfg.tree_depth);
  validate_condition(cfg.start, shapes);

  PipelineResult res;
  auto& log = res.transcript;
  const std::size_t Kb = K * cfg.buffer;
  const std::size_t h = d * (Kb + 1);

  // Decide colors on [theta]^d and extract a uniform Delta-system, growing theta.
  std::map<OrdSet, DecidedColor> decided;
  ExtractResult ex;
  for (std::size_t theta = cfg.theta0;; theta *= 2) {
    if (theta > cfg.theta_cap) {
      throw PipelineFailure("Delta-system extraction failed up to theta cap " + std::to_string(cfg.theta_cap),
                            log);
    }
    if (theta < h) {
      log.push_back("theta " + std::to_string(theta) + " below h = " + std::to_string(h));
      continue;
    }
    decided = decide_all(cfg.start, oracle, theta, cfg.threads);
    std::map<OrdSet, OrdSet> u;
    std::map<std::tuple<CollapsedCondition, Color, OrdSet>, std::size_t> interned;
    std::map<OrdSet, std::size_t> type;
    for (const auto& [a, dc] : decided) {
      OrdSet ua = domain_of(dc.q);
      auto key = std::make_tuple(collapse(dc.q), dc.j, positions_in(a, ua));
      auto it = interned.emplace(std::move(key), interned.size()).first;
      type.emplace(a, it->second);
      u.emplace(a, std::move(ua));
    }
    Family fam(d, OrdSet::range(0, theta), std::move(u));
    ex = extract_uniform(fam, h, [&](const OrdSet& b) { return type.at(b); }, cfg.extract_budget);
    log.push_back("theta " + std::to_string(theta) + ": " + std::to_string(interned.size()) +
                  " types, extraction " +
                  (ex.status == ExtractStatus::found ? "found" : ex.status == ExtractStatus::budget ? "budget" : "none") +
                  " after " + std::to_string(ex.nodes) + " nodes");
    if (ex.status == ExtractStatus::found) {
      res.theta = theta;
      res.H = ex.H;
      UniformVerdict v = verify_uniform(fam.restrict(ex.H));
      if (!v.certified()) throw InternalError("extracted family failed verification");
      res.cert = v.cert;
      derive_subfamily(fam.restrict(ex.H), res.cert, 0);
      break;
    }
  }

  // Constant data on [H]^d.
  const auto& hv = res.H.elems();
  const OrdSet b0(std::vector<Ord>(hv.begin(), hv.begin() + static_cast<std::ptrdiff_t>(d)));
  const DecidedColor& first = decided.at(b0);
  const Color jstar = first.j;
  std::vector<Word> s(d);
  for (std::size_t i = 0; i < d; ++i) s[i] = first.q.at(b0.elems()[i])[i];
  const OrdSet u_root = slice(domain_of(first.q), *res.cert.r.at(OrdSet{}));
  res.root_condition = restrict_to(first.q, u_root);
  for_each_subset(res.H, d, [&](const OrdSet& b) {
    const DecidedColor& dc = decided.at(b);
    if (restrict_to(dc.q, slice(domain_of(dc.q), *res.cert.r.at(OrdSet{}))) != res.root_condition) {
      throw InternalError("root condition depends on the choice of b");
    }
    for (std::size_t i = 0; i < d; ++i) {
      if (dc.q.at(b.elems()[i])[i] != s[i]) throw InternalError("s_i depends on the choice of b");
    }
    return true;
  });
  if (!leq(res.root_condition, cfg.start)) throw InternalError("root condition does not extend the start");
  {
    std::string line = "j* = " + std::to_string(jstar) + ", s =";
    for (const auto& w : s) line += " " + word_to_string(w);
    log.push_back(line + ", q_root = " + to_string(res.root_condition));
  }

  res.tags = shortlex_words(oracle.branching(), K);
  for (std::size_t i = 0; i < d; ++i) {
    if (s[i].size() > cfg.density_depth) {
      throw PipelineFailure("s_" + std::to_string(i) + " lies above the density depth", log);
    }
    std::size_t need = 0, level = 1;
    for (std::size_t m = s[i].size(); m <= cfg.density_depth; ++m) {
      need += level;
      level *= oracle.branching();
    }
    if (K < need) {
      throw PipelineFailure("K = " + std::to_string(K) + " tags cannot reach density depth " +
                                std::to_string(cfg.density_depth) + " above s_" + std::to_string(i),
                            log);
    }
  }

  // delta and the gaps H_i below each delta_i.
  std::vector<Ord> delta(d);
  std::vector<std::vector<Ord>> Hi(d);
  for (std::size_t i = 0; i < d; ++i) {
    const std::size_t base = i * (Kb + 1);
    Hi[i].assign(hv.begin() + static_cast<std::ptrdiff_t>(base),
                 hv.begin() + static_cast<std::ptrdiff_t>(base + Kb));
    delta[i] = hv[base + Kb];
  }
  res.delta = OrdSet(delta);
  const DecidedColor& qd = decided.at(res.delta);

  Condition running = res.root_condition;
  res.chain.push_back(running);
  running = meet_step(
      {"q_delta", [&](const Condition& c) { return *join(c, qd.q); },
       [&](const Condition& c) { return leq(c, qd.q); }},
      running);
  res.chain.push_back(running);
  res.A.assign(d, {});
  for (std::size_t i = 0; i < d; ++i) res.A[i].push_back(delta[i]);

  auto q_of = [&](const std::vector<Ord>& a) -> const Condition& {
    return decided.at(OrdSet(a)).q;
  };

  for (std::size_t k = 1; k < K; ++k) {
    for (std::size_t i = 0; i < d; ++i) {
      std::vector<std::vector<Ord>> lists(d);
      for (std::size_t j = 0; j < d; ++j) {
        const std::size_t take = j < i ? k + 1 : k;
        lists[j].assign(res.A[j].begin(), res.A[j].begin() + static_cast<std::ptrdiff_t>(take));
      }
      Condition r;
      for (const auto& a : product_of(lists)) {
        const Condition& qa = q_of(a);
        auto joined = join(r, qa);
        if (!joined) throw InternalError("r" + stage_name(i, k) + " is not a condition");
        r = std::move(*joined);
        if (!leq(running, qa)) throw InternalError("recursion hypothesis fails at stage " + stage_name(i, k));
      }
      if (!leq(running, r)) throw InternalError("running condition does not extend r" + stage_name(i, k));

      std::vector<std::vector<Ord>> before(lists.begin(), lists.begin() + static_cast<std::ptrdiff_t>(i));
      std::vector<std::vector<Ord>> after(lists.begin() + static_cast<std::ptrdiff_t>(i) + 1, lists.end());
      const auto B0 = product_of(before);
      const auto B1 = product_of(after);
      std::optional<Ord> chosen;
      Condition qss;
      for (Ord alpha : Hi[i]) {
        if (std::find(res.A[i].begin(), res.A[i].end(), alpha) != res.A[i].end()) continue;
        Condition qs;
        for (const auto& x0 : B0) {
          for (const auto& x1 : B1) {
            std::vector<Ord> a = x0;
            a.push_back(alpha);
            a.insert(a.end(), x1.begin(), x1.end());
            auto joined = join(qs, q_of(a));
            if (!joined) throw InternalError("q*_alpha is not a condition at stage " + stage_name(i, k));
            qs = std::move(*joined);
          }
        }
        if (qs.at(alpha)[i] != s[i]) throw InternalError("q*_alpha(alpha)(i) differs from s_i");
        Condition cand = qs;
        Word tagged = s[i];
        tagged.insert(tagged.end(), res.tags[k].begin(), res.tags[k].end());
        cand.at(alpha)[i] = tagged;
        for (const auto& [eta, t] : cand) {
          for (std::size_t j = 0; j < d; ++j) {
            if ((eta != alpha || j != i) && t[j] != qs.at(eta)[j]) {
              throw InternalError("q**_alpha differs from q*_alpha off (alpha, i)");
            }
          }
        }
        if (tagged.size() > cfg.tree_depth) {
          throw PipelineFailure("tree depth " + std::to_string(cfg.tree_depth) + " too small for tag " +
                                    word_to_string(res.tags[k]),
                                log);
        }
        if (compatible(running, cand)) {
          chosen = alpha;
          qss = std::move(cand);
          break;
        }
      }
      if (!chosen) {
        throw PipelineFailure("no alpha in H_" + std::to_string(i) + " meets the dense set at stage " +
                                  stage_name(i, k),
                              log);
      }
      running = meet_step({"E" + stage_name(i, k), [&](const Condition& c) { return *join(c, qss); },
                           [&](const Condition& c) { return leq(c, qss); }},
                          running);
      res.chain.push_back(running);
      res.A[i].push_back(*chosen);
      log.push_back("stage " + stage_name(i, k) + ": alpha = " + std::to_string(*chosen) + ", tag " +
                    word_to_string(res.tags[k]));
    }
  }

  // Generic branches at distinct indices are distinct: meet the dense sets
  // separating comparable nodes within each column.
  for (std::size_t i = 0; i < d; ++i) {
    while (true) {
      std::optional<std::pair<Ord, Ord>> pair;
      for (std::size_t x = 0; x < res.A[i].size() && !pair; ++x) {
        for (std::size_t y = x + 1; y < res.A[i].size() && !pair; ++y) {
          if (comparable(running.at(res.A[i][x])[i], running.at(res.A[i][y])[i])) {
            pair = std::make_pair(res.A[i][x], res.A[i][y]);
          }
        }
      }
      if (!pair) break;
      const Ord ax = pair->first, ay = pair->second;
      Condition next = running;
      Word& u = next.at(ax)[i];
      Word& v = next.at(ay)[i];
      if (u.size() < v.size()) {
        u.push_back(v[u.size()] == 0 ? 1 : 0);
      } else if (v.size() < u.size()) {
        v.push_back(u[v.size()] == 0 ? 1 : 0);
      } else {
        u.push_back(0);
        v.push_back(1);
      }
      if (u.size() > cfg.tree_depth || v.size() > cfg.tree_depth) {
        throw PipelineFailure("tree depth too small to separate the branches", log);
      }
      running = meet_step({"separate " + std::to_string(ax) + "," + std::to_string(ay),
                           [&](const Condition&) { return next; },
                           [&](const Condition& c) { return !comparable(c.at(ax)[i], c.at(ay)[i]); }},
                          running);
      res.chain.push_back(running);
    }
  }

  for (const auto& a : product_of(res.A)) {
    if (!leq(running, q_of(a))) throw InternalError("final condition misses some q_a");
  }

  res.witness.color = jstar;
  res.witness.roots = s;
  res.witness.density_depth = cfg.density_depth;
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<Word> ys;
    for (Ord alpha : res.A[i]) ys.push_back(leftmost_completion(running.at(alpha)[i], cfg.tree_depth));
    res.witness.sets.emplace_back(shapes[i], std::move(ys));
    if (res.witness.sets[i].size() != K) throw InternalError("Y_i has repeated branches");
  }
  if (auto err = validate_grid_witness(oracle, res.witness)) {
    throw InternalError("pipeline witness rejected by the validator: " + *err);
  }
  log.push_back("witness validated");
  return res;
}

}  // namespace hlab
