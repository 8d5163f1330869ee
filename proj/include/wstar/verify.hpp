#pragma once

// Verification suites shared by the command-line tool and the acceptance
// runner. Each suite returns a list of named checks; nothing here depends on
// wall-clock time, so identical configurations give identical reports.

#include "wstar/derived_sets.hpp"
#include "wstar/generators.hpp"
#include "wstar/labeling.hpp"
#include "wstar/shape.hpp"
#include "wstar/truncation.hpp"

#include <json.hpp>

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace wstar {

struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct SuiteReport {
    std::string suite;
    nlohmann::ordered_json config = nlohmann::ordered_json::object();
    std::vector<Check> checks;

    void add(std::string name, bool pass, std::string detail = {}) {
        checks.push_back({std::move(name), pass, std::move(detail)});
    }

    std::size_t passed() const {
        std::size_t n = 0;
        for (const auto& c : checks) n += c.pass;
        return n;
    }
    bool pass() const { return !checks.empty() && passed() == checks.size(); }

    nlohmann::ordered_json json() const {
        nlohmann::ordered_json j;
        j["suite"] = suite;
        j["config"] = config;
        auto arr = nlohmann::ordered_json::array();
        for (const auto& c : checks)
            arr.push_back({{"name", c.name}, {"status", c.pass ? "pass" : "fail"}, {"detail", c.detail}});
        j["checks"] = std::move(arr);
        j["summary"] = {{"checks", checks.size()},
                        {"passed", passed()},
                        {"failed", checks.size() - passed()},
                        {"status", pass() ? "pass" : "fail"}};
        return j;
    }
};

struct GridCell {
    Ordinal alpha;
    Ordinal beta;
};

struct SuiteConfig {
    std::vector<Ordinal> alphas;  // corpus for symbolic checks
    std::vector<GridCell> grid;   // (alpha, beta) cells for witness/separation/limit
    std::size_t max_n = 6;
    std::vector<std::size_t> branches{2, 3, 4};
    std::size_t depth = 5;
    std::size_t label_bound = 200;
    std::uint64_t coords = 64;
    std::uint64_t terms = 256;
    std::uint64_t seed = 1;
    std::size_t targets = 20;
    std::size_t count = 50;
    std::size_t samples = 1000;
    std::vector<Rational> omegas{Rational(0), Rational(1, 2), Rational(9, 10)};
    std::uint64_t max_m = 100;
    Rational eps{1, 100};
    std::uint64_t horizon = 256;
    std::optional<nlohmann::json> generator;

    static std::vector<Ordinal> default_alphas() {
        std::vector<Ordinal> out;
        for (const char* s : {"1", "2", "3", "w", "w+1", "w*2", "w^2"}) out.push_back(parse_ordinal(s));
        return out;
    }

    static std::vector<GridCell> default_grid() {
        std::vector<GridCell> out;
        for (std::uint64_t a = 1; a <= 4; ++a)
            for (std::uint64_t b = 0; b < a; ++b) out.push_back({Ordinal::finite(a), Ordinal::finite(b)});
        out.push_back({parse_ordinal("w+1"), Ordinal::omega()});
        return out;
    }

    nlohmann::ordered_json json() const {
        nlohmann::ordered_json j;
        auto alist = nlohmann::ordered_json::array();
        for (const auto& a : alphas) alist.push_back(to_text(a));
        auto glist = nlohmann::ordered_json::array();
        for (const auto& c : grid) glist.push_back(to_text(c.alpha) + ":" + to_text(c.beta));
        auto blist = nlohmann::ordered_json::array();
        for (auto b : branches) blist.push_back(b);
        auto olist = nlohmann::ordered_json::array();
        for (const auto& o : omegas) olist.push_back(to_text(o));
        j["alphas"] = alist;
        j["grid"] = glist;
        j["max_n"] = max_n;
        j["branches"] = blist;
        j["depth"] = depth;
        j["label_bound"] = label_bound;
        j["coords"] = coords;
        j["terms"] = terms;
        j["seed"] = seed;
        j["targets"] = targets;
        j["count"] = count;
        j["samples"] = samples;
        j["omegas"] = olist;
        j["max_m"] = max_m;
        j["eps"] = to_text(eps);
        j["horizon"] = horizon;
        if (generator) j["generator"] = *generator;
        return j;
    }
};

// --- forest suites ---------------------------------------------------------------

/// (F_n)^k = F_{n-k} on truncations of depth n.
inline SuiteReport verify_der_lemma_finite(const SuiteConfig& cfg) {
    SuiteReport r;
    r.suite = "der-lemma";
    for (auto b : cfg.branches)
        for (std::size_t n = 0; n <= cfg.max_n; ++n) {
            const std::size_t d = std::max<std::size_t>(n, 1);
            FiniteForest cur = truncate(Forest::of(Ordinal::finite(n)), d, b);
            bool ok = true;
            std::string bad;
            for (std::size_t k = 0; k <= n; ++k) {
                if (k > 0) cur = brute_derive_once(cur);
                if (!iso_check(cur, truncate(Forest::of(Ordinal::finite(n - k)), d, b))) {
                    ok = false;
                    bad = "k=" + std::to_string(k) + " not isomorphic";
                    break;
                }
            }
            r.add("der1 n=" + std::to_string(n) + " b=" + std::to_string(b), ok,
                  ok ? "brute^k(trunc F_" + std::to_string(n) + ") ~ trunc F_{n-k} for k=0.." + std::to_string(n) : bad);
        }
    return r;
}

namespace detail {

/// Removal step of every truncation vertex under repeated brute derivation;
/// nullopt if it is never removed within `limit` steps.
inline std::map<VertexAddr, std::optional<std::uint64_t>> brute_removal_steps(const FiniteForest& t, std::uint64_t limit,
                                                                              std::vector<FiniteForest>* stages) {
    std::map<VertexAddr, std::optional<std::uint64_t>> out;
    for (const auto& v : t.vertices) out[v.addr] = std::nullopt;
    FiniteForest cur = t;
    if (stages) stages->push_back(cur);
    for (std::uint64_t s = 1; s <= limit; ++s) {
        FiniteForest next = brute_derive_once(cur);
        if (next.size() == cur.size()) break;
        std::set<VertexAddr> alive;
        for (const auto& v : next.vertices) alive.insert(v.addr);
        for (const auto& v : cur.vertices)
            if (!alive.count(v.addr)) out[v.addr] = s;
        cur = std::move(next);
        if (stages) stages->push_back(cur);
    }
    return out;
}

/// The brute step predicted by the symbolic removal stage: the parent's order
/// mapped through finite_stage, provided the parent's whole truncated subtree
/// lies within the depth bound.
inline std::optional<std::uint64_t> predicted_step(const Forest& f, const FiniteForest& t, const FiniteVertex& v) {
    auto stage = removal_stage(f, v.addr);
    if (!stage) return std::nullopt;
    const std::uint64_t step = finite_stage(*stage, t.branch);
    if (v.depth - 1 + step > t.depth) return std::nullopt;
    return step;
}

inline bool same_forest_shape(const ForestShape& a, const ForestShape& b) { return compare(a, b) == 0; }

}  // namespace detail

/// (F_{a+1})^a = F_1, (F_{a+1})^{a+1} = F_0, F_w^w is w isolated vertices,
/// the one-step operator agrees with the closed form, limit stages are
/// intersections, and symbolic removal stages match brute force.
inline SuiteReport verify_der_lemma_symbolic(const SuiteConfig& cfg) {
    SuiteReport r;
    r.suite = "der-lemma";
    const ForestShape f1 = shape_of(Ordinal::finite(1));
    const ForestShape f0 = shape_of(Ordinal{});
    for (const auto& a : cfg.alphas) {
        const std::string an = to_text(a);
        const Forest next = Forest::of(successor(a));
        const std::string sn = to_text(successor(a));
        r.add("der2 (F_{" + sn + "})^{" + an + "} = F_1", detail::same_forest_shape(derived_forest(next, a), f1),
              forest_text(derived_forest(next, a)));
        r.add("der2 (F_{" + sn + "})^{" + sn + "} = F_0",
              detail::same_forest_shape(derived_forest(next, successor(a)), f0),
              forest_text(derived_forest(next, successor(a))));

        // The derivation step applied to the closed form at stage g gives stage g+1.
        std::vector<Ordinal> stages{Ordinal{}, Ordinal::finite(1), Ordinal::finite(2)};
        if (!a.is_finite()) {
            stages.push_back(Ordinal::omega());
            stages.push_back(parse_ordinal("w+1"));
        }
        if (a.kind() == OrdinalKind::limit) stages.push_back(a);
        bool step_ok = true;
        std::string step_bad;
        for (const auto& forest : {Forest::of(a), next})
            for (const auto& g : stages) {
                if (!(g <= successor(a))) continue;
                if (!detail::same_forest_shape(derive_shape(derived_forest(forest, g)), derived_forest(forest, successor(g)))) {
                    step_ok = false;
                    step_bad = forest.name() + " at stage " + to_text(g);
                }
            }
        r.add("der step operator matches closed form, alpha=" + an, step_ok, step_ok ? "stages checked: " + std::to_string(stages.size()) : step_bad);

        // Iterating the step operator from F_{a+1}: finite stages.
        ForestShape it = shape_of(next);
        bool iter_ok = true;
        for (std::uint64_t k = 1; k <= 4; ++k) {
            it = derive_shape(it);
            if (!detail::same_forest_shape(it, derived_forest(next, Ordinal::finite(k)))) iter_ok = false;
        }
        r.add("der iterate 4 steps on F_{" + sn + "}", iter_ok, forest_text(it));

        // Brute agreement on a truncation, and limit stages as intersections.
        const std::size_t b = 3;
        const std::size_t d = a.is_finite() ? static_cast<std::size_t>(*successor(a).as_finite()) : cfg.depth;
        for (const auto& forest : {Forest::of(a), next}) {
            FiniteForest t = truncate(forest, d, b);
            auto brute = detail::brute_removal_steps(t, 64, nullptr);
            std::size_t compared = 0, mismatched = 0;
            std::string first_bad;
            for (const auto& v : t.vertices) {
                // nullopt on both sides: initial, or the parent's subtree is cut.
                auto want = detail::predicted_step(forest, t, v);
                ++compared;
                if (brute[v.addr] != want) {
                    ++mismatched;
                    if (first_bad.empty()) first_bad = v.addr.text();
                }
            }
            r.add("brute agreement " + forest.name() + " d=" + std::to_string(d) + " b=" + std::to_string(b),
                  mismatched == 0 && compared > 0,
                  std::to_string(compared) + " vertices compared" +
                      (mismatched ? ", first mismatch " + first_bad : std::string()));

            std::size_t limit_queries = 0;
            bool limit_ok = true;
            for (const auto& lam : {Ordinal::omega(), parse_ordinal("w*2"), parse_ordinal("w^2")})
                for (const auto& v : t.vertices) {
                    bool all = true;
                    for (std::uint64_t n = 1; n <= 12; ++n) all = all && in_derived(forest, fundamental(lam, n), v.addr);
                    // Removal stages are successors or 0, so 12 terms decide the intersection for these corpora.
                    const bool direct = in_derived(forest, lam, v.addr);
                    ++limit_queries;
                    if (direct != all) {
                        auto st = removal_stage(forest, v.addr);
                        const bool beyond = st && !(*st <= fundamental(lam, 12)) && *st <= lam;
                        if (!beyond) limit_ok = false;
                    }
                }
            r.add("limit stages are intersections " + forest.name(), limit_ok,
                  std::to_string(limit_queries) + " membership queries");
        }
    }
    const ForestShape fw = derived_forest(Forest::of(Ordinal::omega()), Ordinal::omega());
    ForestShape isolated;
    isolated.entries.push_back({Shape::leaf(), Multiplicity::infinite()});
    r.add("F_w^w is w isolated vertices", detail::same_forest_shape(fw, isolated), forest_text(fw));

    // Spot memberships from the forest module's examples.
    const Forest f3 = Forest::of(Ordinal::finite(3));
    r.add("in_derived(3, 2, root)", in_derived(f3, Ordinal::finite(2), VertexAddr::parse("R")));
    r.add("not in_derived(3, 2, depth-2 vertex)", !in_derived(f3, Ordinal::finite(2), VertexAddr::parse("R.1.R.1.R")));
    const Forest fw1 = Forest::of(parse_ordinal("w+1"));
    bool children_terminal = true;
    for (const auto& c : fw1.up_neighbors(VertexAddr::parse("R"), 6))
        children_terminal = children_terminal && terminal_in_derived(fw1, Ordinal::omega(), c);
    r.add("(F_{w+1})^w keeps the root and its children are terminal",
          in_derived(fw1, Ordinal::omega(), VertexAddr::parse("R")) && children_terminal);
    return r;
}

inline SuiteReport verify_der_lemma(const SuiteConfig& cfg) {
    SuiteReport r = verify_der_lemma_finite(cfg);
    for (auto& c : verify_der_lemma_symbolic(cfg).checks) r.checks.push_back(std::move(c));
    r.config = cfg.json();
    return r;
}

/// In every derived truncation: up-degree is 0 or b, and a vertex with b
/// terminal children has only terminal children. Symbolically: a node with
/// infinitely many leaf children has nothing else.
inline SuiteReport verify_upterm(const SuiteConfig& cfg) {
    SuiteReport r;
    r.suite = "upterm";
    r.config = cfg.json();
    std::size_t forests = 0, vertices = 0, violations = 0;
    std::string first_bad;
    auto scan = [&](const FiniteForest& t) {
        ++forests;
        for (std::size_t v = 0; v < t.size(); ++v) {
            ++vertices;
            const auto& ch = t.vertices[v].children;
            std::size_t term = 0;
            for (auto c : ch) term += t.is_terminal(c);
            const bool degree_ok = ch.empty() || ch.size() == t.branch;
            const bool upterm_ok = term < t.branch || term == ch.size();
            if (!degree_ok || !upterm_ok) {
                ++violations;
                if (first_bad.empty()) first_bad = t.alpha + ":" + t.vertices[v].addr.text();
            }
        }
    };
    for (auto b : cfg.branches)
        for (std::size_t n = 0; n <= cfg.max_n; ++n) {
            std::vector<FiniteForest> stages;
            detail::brute_removal_steps(truncate(Forest::of(Ordinal::finite(n)), std::max<std::size_t>(n, 1), b), 64, &stages);
            for (const auto& s : stages) scan(s);
        }
    for (const auto& a : cfg.alphas)
        for (const auto& forest : {Forest::of(a), Forest::of(successor(a))}) {
            const std::size_t d = a.is_finite() ? static_cast<std::size_t>(*successor(a).as_finite()) : cfg.depth;
            std::vector<FiniteForest> stages;
            detail::brute_removal_steps(truncate(forest, d, 3), 64, &stages);
            for (const auto& s : stages) scan(s);
        }
    r.add("truncations: full terminal families are whole families", violations == 0,
          std::to_string(forests) + " derived truncations, " + std::to_string(vertices) + " vertices" +
              (violations ? ", first violation " + first_bad : std::string()));

    std::size_t shapes = 0;
    bool sym_ok = true;
    std::string sym_bad;
    for (const auto& a : cfg.alphas)
        for (const auto& forest : {Forest::of(a), Forest::of(successor(a))}) {
            std::vector<Ordinal> stages{Ordinal{}, Ordinal::finite(1), Ordinal::finite(2), Ordinal::finite(3)};
            if (!a.is_finite()) stages.insert(stages.end(), {Ordinal::omega(), parse_ordinal("w+1"), a});
            for (const auto& g : stages) {
                ForestShape fs = derived_forest(forest, g);
                for (const auto& e : fs.entries) {
                    ++shapes;
                    if (!all_terminal_when_infinitely_many(e.child, 8)) {
                        sym_ok = false;
                        sym_bad = forest.name() + "^" + to_text(g);
                    }
                }
                if (fs.tail)
                    for (std::uint64_t n = fs.tail->first(); n < fs.tail->first() + 4; ++n) {
                        ++shapes;
                        if (!all_terminal_when_infinitely_many(fs.tail->component(n), 8)) {
                            sym_ok = false;
                            sym_bad = forest.name() + "^" + to_text(g);
                        }
                    }
            }
        }
    r.add("symbolic: infinitely many leaf children leave no other children", sym_ok,
          std::to_string(shapes) + " derived shapes" + (sym_ok ? std::string() : ", first violation " + sym_bad));

    bool degree_ok = true;
    for (const auto& a : cfg.alphas) {
        std::function<bool(const Shape&, int)> omega_only = [&](const Shape& s, int depth) {
            if (s.is_leaf() || depth == 0) return true;
            for (const auto& e : s.children().entries)
                if (!e.multiplicity.omega && !e.child.is_leaf()) return false;
            bool ok = true;
            for (const auto& e : s.children().entries) ok = ok && omega_only(e.child, depth - 1);
            return ok;
        };
        for (const auto& e : shape_of(successor(a)).entries) degree_ok = degree_ok && omega_only(e.child, 6);
    }
    r.add("up-degree is 0 or w in F_{alpha+1} shapes", degree_ok);
    return r;
}

// --- vector suites ---------------------------------------------------------------

/// The forest whose difference set X^{b+1} \ W_b supplies the targets of a
/// cell: F_alpha itself, or w copies of it when F_alpha has fewer targets.
inline Forest cell_forest(const GridCell& c) {
    const Forest f = Forest::of(c.alpha);
    if (f.is_tree() && successor(c.beta) == c.alpha) return Forest::copies(c.alpha);
    return f;
}

inline std::string cell_name(const GridCell& c) { return "(" + to_text(c.alpha) + "," + to_text(c.beta) + ")"; }

inline std::vector<VertexAddr> cell_targets(const LabelMap& lm, const Ordinal& beta, std::size_t want) {
    std::vector<VertexAddr> out;
    for (std::size_t scan = 256; scan <= (std::size_t{1} << 18); scan *= 4) {
        out = difference_vertices(lm, beta, scan, want);
        if (out.size() >= want) break;
    }
    return out;
}

/// Every target y in X^{b+1} \ W_b is the coordinatewise limit of a bounded
/// sequence in X^b, with bound ||y||_1 + label(v(y)).
inline SuiteReport verify_witness(const SuiteConfig& cfg) {
    SuiteReport r;
    r.suite = "witness";
    r.config = cfg.json();
    for (const auto& cell : cfg.grid) {
        const Forest f = cell_forest(cell);
        LabelMap lm(f);
        auto targets = cell_targets(lm, cell.beta, cfg.targets);
        std::size_t ok = 0;
        std::string bad;
        std::uint64_t settled = 0;
        for (const auto& u : targets) {
            VecSequence s = witness_sequence(lm, cell.beta, u);
            const RationalVec y = vertex_vector(lm, u);
            const bool bound_ok = s.declared_bound == l1_norm(y) + Rational(lm.label(u));
            auto rep = check_coordwise_convergence(s, cfg.coords, cfg.terms);
            const bool terms_ok = in_X_beta(lm, cell.beta, s.generator(1)) && in_X_beta(lm, cell.beta, s.generator(7));
            if (rep.pass && bound_ok && terms_ok) {
                ++ok;
                settled = std::max(settled, rep.settled_from);
            } else if (bad.empty()) {
                bad = u.text() + ": " + (rep.pass ? (bound_ok ? "terms outside X^beta" : "bound mismatch") : rep.detail);
            }
        }
        const bool pass = ok == targets.size() && targets.size() >= cfg.targets;
        r.add("witness " + cell_name(cell) + " in " + f.name(), pass,
              std::to_string(ok) + "/" + std::to_string(targets.size()) + " targets converge (M=" +
                  std::to_string(cfg.coords) + ", T=" + std::to_string(cfg.terms) +
                  ", exact from i<=" + std::to_string(settled) + ")" + (bad.empty() ? std::string() : "; " + bad));
    }
    return r;
}

/// z_m - z~ is positive on y and nonpositive on W_beta up to the label bound
/// plus the first extensions of y.
inline SuiteReport verify_separation(const SuiteConfig& cfg) {
    SuiteReport r;
    r.suite = "separation";
    r.config = cfg.json();
    for (const auto& cell : cfg.grid) {
        const Forest f = cell_forest(cell);
        LabelMap lm(f);
        auto targets = cell_targets(lm, cell.beta, cfg.targets);
        std::vector<RationalVec> base;
        for (const auto& p : emit_W(lm, cell.beta, cfg.label_bound)) base.push_back(p.vec);
        std::size_t ok = 0, evaluated = 0, e_total = 0;
        Rational min_margin = -1;
        std::string bad;
        for (const auto& u : targets) {
            auto cert = separation_certificate(lm, cell.beta, u);
            std::vector<RationalVec> cands = base;
            const Ordinal order = f.resolve(u).order;
            for (std::uint64_t i = 1; i <= 6; ++i) {
                VertexAddr c = Forest::child(u, order, i);
                cands.push_back(vertex_vector(lm, c));
                auto info = f.resolve(c);
                if (!info.is_terminal())
                    for (std::uint64_t j = 1; j <= 2; ++j) cands.push_back(vertex_vector(lm, Forest::child(c, info.order, j)));
            }
            auto rep = check_separation(cert, cands);
            evaluated += cands.size();
            e_total += rep.extensions;
            if (min_margin < 0 || cert.margin < min_margin) min_margin = cert.margin;
            if (rep.pass) {
                ++ok;
            } else if (bad.empty()) {
                bad = u.text() + ": " + rep.detail;
            }
        }
        const bool pass = ok == targets.size() && targets.size() >= cfg.targets;
        r.add("separation " + cell_name(cell) + " in " + f.name(), pass,
              std::to_string(ok) + "/" + std::to_string(targets.size()) + " certificates, min margin " +
                  to_text(min_margin) + ", " + std::to_string(evaluated) + " candidate evaluations (" +
                  std::to_string(e_total) + " extensions), label bound " + std::to_string(cfg.label_bound) +
                  (bad.empty() ? std::string() : "; " + bad));
    }
    return r;
}

/// No support of y in X^{b+1} \ W_b contains the support of an element of W_b.
inline SuiteReport verify_nosubvec(const SuiteConfig& cfg) {
    SuiteReport r;
    r.suite = "nosubvec";
    r.config = cfg.json();
    const std::size_t top = std::min<std::size_t>(cfg.max_n, 4);
    auto run = [&](const Forest& f, const Ordinal& beta, std::size_t d) {
        LabelMap lm(f);
        FiniteForest t = truncate(f, d, 3);
        auto v = subvec_violations(lm, t, beta);
        std::size_t ys = 0;
        for (const auto& x : t.vertices) ys += is_difference_vertex(f, beta, x.addr);
        r.add("nosubvec " + f.name() + " beta=" + to_text(beta), v.empty(),
              std::to_string(ys) + " difference vectors over " + std::to_string(t.size()) + " vertices" +
                  (v.empty() ? std::string() : ", " + v.front().y_vertex.text() + " contains " + v.front().z_vertex.text()));
    };
    for (std::size_t n = 1; n <= top; ++n)
        for (std::size_t b = 0; b < n; ++b) {
            run(Forest::of(Ordinal::finite(n)), Ordinal::finite(b), n);
            run(Forest::copies(Ordinal::finite(n)), Ordinal::finite(b), n);
        }
    run(Forest::of(parse_ordinal("w+1")), Ordinal::omega(), 3);
    run(Forest::copies(parse_ordinal("w+1")), Ordinal::omega(), 3);
    return r;
}

inline Check check_generator_limit(const CoeffGenerator& g, const SuiteConfig& cfg, const std::string& name) {
    auto decl = check_declarations(g, cfg.terms);
    if (!decl.pass) return {name, false, decl.detail};
    const Rational total = declared_total(g);
    if (total != 1) return {name, false, "declared masses sum to " + to_text(total)};
    auto lim = limit_of_generator(g, cfg.coords, cfg.terms);
    if (lim.convergence && !lim.convergence->pass) return {name, false, "rows: " + lim.convergence->detail};
    auto oracle = oracle_limit(g, cfg.coords, cfg.terms);
    if (!oracle) return {name, false, "rows are still moving on coordinates <= " + std::to_string(cfg.coords)};
    const RationalVec mine = restrict_coords(lim.limit, cfg.coords);
    if (mine != *oracle) return {name, false, "limit " + mine.text() + " but oracle " + oracle->text()};
    return {name, true,
            "limit " + lim.limit.text() + "; |I|=" + std::to_string(lim.decomposition.initial.size()) +
                ", |D|=" + std::to_string(lim.decomposition.groups.size()) + ", masses sum to 1"};
}

inline SuiteReport verify_limit(const SuiteConfig& cfg) {
    SuiteReport r;
    r.suite = "limit";
    r.config = cfg.json();
    if (cfg.generator) {
        CoeffGenerator g = generator_from_json(*cfg.generator);
        r.checks.push_back(check_generator_limit(g, cfg, "generator " + g.kind() + " over " + g.forest().name()));
        return r;
    }
    std::vector<std::pair<Forest, Ordinal>> domains;
    for (const auto& c : cfg.grid) domains.push_back({cell_forest(c), c.beta});
    domains.push_back({Forest::copies(Ordinal::finite(1)), Ordinal{}});
    std::mt19937_64 rng(cfg.seed);
    std::size_t made = 0, ok = 0;
    std::vector<std::string> failures;
    for (std::size_t k = 0; made < cfg.count; ++k) {
        const auto& [f, beta] = domains[k % domains.size()];
        const std::uint64_t seed = rng();
        CoeffGenerator g = random_generator(f, beta, seed);
        ++made;
        Check c = check_generator_limit(g, cfg, "");
        if (c.pass) ++ok;
        else if (failures.size() < 3) failures.push_back(f.name() + "/" + to_text(beta) + " seed " + std::to_string(seed) + ": " + c.detail);
    }
    std::string detail = std::to_string(ok) + "/" + std::to_string(made) + " random generators match the oracle on coordinates 1.." +
                         std::to_string(cfg.coords);
    for (const auto& s : failures) detail += "; " + s;
    r.add("limit formula on random generators", ok == made && made >= 1, detail);

    // Named constructions.
    const Forest f2 = Forest::of(Ordinal::finite(2));
    r.checks.push_back(check_generator_limit(custom_generator(f2, Ordinal{}, {{GeneratorComponent::Kind::fixed, VertexAddr::parse("R.1.R.1"), 1, 0}}),
                                             cfg, "single element with weight 1 has limit x"));
    r.checks.push_back(check_generator_limit(witness_generator(f2, Ordinal{}, VertexAddr::parse("R.1.R")), cfg,
                                             "mass drifting to one group has limit y"));
    r.checks.push_back(check_generator_limit(
        custom_generator(f2, Ordinal{}, {{GeneratorComponent::Kind::fixed, VertexAddr::parse("R.1.R.1"), Rational(1, 2), 0},
                                          {GeneratorComponent::Kind::drift, VertexAddr::parse("R.1.R"), Rational(1, 2), 1}}),
        cfg, "half fixed, half drifting in the same group"));
    return r;
}

inline SuiteReport verify_mass(const SuiteConfig& cfg) {
    SuiteReport r;
    r.suite = "mass";
    r.config = cfg.json();
    auto describe = [](const MassReport& m) { return m.detail; };
    if (cfg.generator) {
        CoeffGenerator g = generator_from_json(*cfg.generator);
        auto m = mass_conservation_check(g, cfg.horizon, cfg.max_m, cfg.eps);
        r.add("mass " + g.kind() + " over " + g.forest().name(), m.pass, describe(m));
        return r;
    }
    const Forest f = Forest::copies(Ordinal::finite(1));
    for (const auto& om : cfg.omegas) {
        auto g = escaping_generator(f, Ordinal{}, om);
        auto m = mass_conservation_check(g, cfg.horizon, cfg.max_m, cfg.eps);
        std::string worst;
        if (!m.growth.empty()) {
            const auto& last = m.growth.back();
            worst = "; M=" + std::to_string(last.M) + ": min norm " + to_text(last.min_norm) + " > " + to_text(last.threshold) +
                    (last.from ? " from i=" + std::to_string(*last.from) : std::string(" nowhere"));
        }
        r.add("escaping mass, omega=" + to_text(om), m.pass && m.growth_detected, describe(m) + worst);
    }
    auto w = witness_generator(Forest::of(Ordinal::finite(1)), Ordinal{}, VertexAddr::parse("R"));
    auto mw = mass_conservation_check(w, cfg.horizon, cfg.max_m, cfg.eps);
    r.add("witness generator conserves mass", mw.pass && mw.total == 1, describe(mw));

    // Declared masses of 9/10 on rows that are in fact bounded: a contradiction.
    auto bad = custom_generator(Forest::of(Ordinal::finite(1)), Ordinal{}, {{GeneratorComponent::Kind::fixed, VertexAddr::parse("R.1"), 1, 0}});
    bad.declared_p[VertexAddr::parse("R.1")] = Rational(9, 10);
    bad.declared_s[VertexAddr::parse("R")] = Rational(9, 10);
    auto mb = mass_conservation_check(bad, cfg.horizon, cfg.max_m, cfg.eps);
    r.add("bounded rows with declared mass 9/10 are flagged", !mb.pass && !mb.growth_detected, describe(mb));
    return r;
}

inline SuiteReport verify_closedness(const SuiteConfig& cfg) {
    SuiteReport r;
    r.suite = "closedness";
    r.config = cfg.json();
    std::vector<Ordinal> alphas;
    for (const auto& a : cfg.alphas)
        if (a.kind() == OrdinalKind::successor) alphas.push_back(a);
    if (alphas.empty()) alphas = {Ordinal::finite(1), Ordinal::finite(2), Ordinal::finite(3), parse_ordinal("w+1")};
    for (const auto& a : alphas) {
        const Forest f = Forest::of(a);
        auto c = closedness_check(f, std::max<std::size_t>(cfg.count / 2, 1), cfg.seed);
        r.add("closedness F_" + to_text(a), c.pass, c.detail);

        LabelMap lm(f);
        RationalVec rv = r_vector(lm);
        const Natural k = lm.label(f.initial_vertex());
        const Ordinal tau = predecessor(a);
        auto s = witness_sequence(lm, tau, f.initial_vertex());
        auto rep = check_coordwise_convergence(s, cfg.coords, cfg.terms);
        r.add("r = k e_k is a witness limit in X^" + to_text(tau) + ", alpha=" + to_text(a),
              rv == RationalVec::unit(k, Rational(k)) && rep.pass && in_X_beta(lm, a, rv),
              "r = " + rv.text() + "; " + rep.detail);
    }
    return r;
}

/// Round trips: labels, shortened vectors, ordinal text.
inline SuiteReport verify_roundtrip(const SuiteConfig& cfg) {
    SuiteReport r;
    r.suite = "roundtrip";
    r.config = cfg.json();
    std::vector<Ordinal> corpus;
    for (const char* s : {"1", "2", "3", "w", "w+1", "w^2+1"}) corpus.push_back(parse_ordinal(s));
    for (const auto& a : corpus) {
        const Forest f = Forest::of(a);
        LabelMap lm(f);
        auto verts = lm.first_vertices(cfg.samples);
        std::size_t ok = 0;
        bool monotone = true;
        std::set<Natural> seen;
        for (std::size_t i = 0; i < verts.size(); ++i) {
            const Natural n = lm.label(verts[i]);
            auto back = lm.unlabel(n);
            if (back && *back == verts[i] && n == Natural(i + 1) && seen.insert(n).second) ++ok;
            auto chain = lm.path_labels(verts[i]);
            for (std::size_t j = 1; j < chain.size(); ++j) monotone = monotone && chain[j - 1] < chain[j];
        }
        r.add("unlabel(label(a)) = a on F_" + to_text(a), ok == verts.size() && verts.size() >= cfg.samples && monotone,
              std::to_string(ok) + "/" + std::to_string(verts.size()) + " addresses, chains increasing: " +
                  (monotone ? "yes" : "no"));

        std::size_t emitted = 0, members = 0;
        std::vector<Ordinal> betas{Ordinal{}, Ordinal::finite(1), Ordinal::finite(2)};
        if (!a.is_finite()) betas.push_back(Ordinal::omega());
        for (const auto& beta : betas) {
            for (const auto& v : verts) {
                if (!f.is_terminal(v)) continue;
                const RationalVec w = shortened_vector(lm, beta, v);
                ++emitted;
                members += in_X_beta(lm, beta, w);
            }
        }
        r.add("in_X_beta(shortened_vector) on F_" + to_text(a), emitted > 0 && members == emitted,
              std::to_string(members) + "/" + std::to_string(emitted) + " shortened vectors recognized");
    }

    std::mt19937_64 rng(cfg.seed);
    std::function<Ordinal(int)> random_ordinal = [&](int depth) {
        Ordinal o;
        const int terms = static_cast<int>(rng() % 4);
        std::vector<Ordinal> exps;
        for (int i = 0; i < terms; ++i)
            exps.push_back(depth > 0 && rng() % 3 == 0 ? random_ordinal(depth - 1) : Ordinal::finite(rng() % 5));
        std::sort(exps.begin(), exps.end(), [](const Ordinal& x, const Ordinal& y) { return x > y; });
        for (const auto& e : exps) o = o + Ordinal::omega_power(e, 1 + rng() % 7);
        return o;
    };
    std::size_t ok = 0;
    for (std::size_t i = 0; i < cfg.samples; ++i) {
        Ordinal o = random_ordinal(2);
        ok += parse_ordinal(to_text(o)) == o;
    }
    r.add("parse(to_text(a)) = a", ok == cfg.samples, std::to_string(ok) + "/" + std::to_string(cfg.samples) + " ordinals");
    return r;
}

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"der-lemma", "upterm", "nosubvec", "witness", "separation",
                                                "limit",     "mass",   "closedness", "roundtrip"};
    return names;
}

inline SuiteReport run_suite(const std::string& name, const SuiteConfig& cfg) {
    if (name == "der-lemma") return verify_der_lemma(cfg);
    if (name == "upterm") return verify_upterm(cfg);
    if (name == "nosubvec") return verify_nosubvec(cfg);
    if (name == "witness") return verify_witness(cfg);
    if (name == "separation") return verify_separation(cfg);
    if (name == "limit") return verify_limit(cfg);
    if (name == "mass") return verify_mass(cfg);
    if (name == "closedness") return verify_closedness(cfg);
    if (name == "roundtrip") return verify_roundtrip(cfg);
    throw std::invalid_argument("unknown suite '" + name + "'");
}

}  // namespace wstar
