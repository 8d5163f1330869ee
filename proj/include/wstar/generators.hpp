#pragma once

// Convex coefficient generators over W_beta and the checks built on them.
//
// Row i of a generator is a finitely supported convex weight vector
// x -> a_{x,i} on elements x = z*(v) of W_beta, each named by its vertex v.
// A generator is a sum of components:
//   fixed  weight w on one element for every row,
//   drift  weight w on z*(child_{i+offset}(u)), so the mass settles on the
//          group of u without staying on any single element,
//   escape weight w on z*(e_i) for escape vertices e_i whose groups are all
//          different, so the mass leaves every finite set of groups.
// Generators declare the limits p_x and s_y; nothing here infers them.

#include "wstar/derived_sets.hpp"
#include "wstar/dualvec.hpp"
#include "wstar/forest.hpp"
#include "wstar/labeling.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace wstar {

struct GeneratorComponent {
    enum class Kind { fixed, drift, escape };

    Kind kind = Kind::fixed;
    VertexAddr vertex;  // the element (fixed) or the group vertex u (drift)
    Rational weight;
    std::uint64_t offset = 0;  // drift only
};

inline const char* to_string(GeneratorComponent::Kind k) {
    switch (k) {
        case GeneratorComponent::Kind::fixed: return "fixed";
        case GeneratorComponent::Kind::drift: return "drift";
        case GeneratorComponent::Kind::escape: return "escape";
    }
    return "?";
}

using Weights = std::map<VertexAddr, Rational>;

class CoeffGenerator {
public:
    CoeffGenerator(std::string kind, Forest forest, Ordinal beta, std::vector<GeneratorComponent> components)
        : kind_(std::move(kind)), labels_(std::move(forest)), beta_(std::move(beta)), components_(std::move(components)) {
        Rational total = 0;
        for (const auto& c : components_) {
            if (c.weight <= 0) throw std::domain_error("generator component weights must be positive");
            total += c.weight;
            validate(c);
        }
        if (total != 1) throw std::domain_error("generator rows must sum to 1, components sum to " + to_text(total));
    }

    const std::string& kind() const noexcept { return kind_; }
    const Forest& forest() const noexcept { return labels_.forest(); }
    const LabelMap& labels() const noexcept { return labels_; }
    const Ordinal& beta() const noexcept { return beta_; }
    const std::vector<GeneratorComponent>& components() const noexcept { return components_; }

    Weights declared_p;
    Weights declared_s;  // keyed by the vertex of the group vector y
    std::optional<Rational> declared_bound;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();

    /// e_i: start at component i (or at the i-th child of the root of a tree)
    /// and follow first up-neighbors until the order drops to beta or below.
    VertexAddr escape_vertex(std::uint64_t i) const {
        const Forest& f = forest();
        VertexAddr a;
        if (f.is_tree()) {
            a = f.initial_vertex();
            Ordinal t = f.order();
            if (t.is_zero()) throw std::domain_error("escape component on F_0");
            a = Forest::child(a, t, i);
        } else {
            a = f.initial_vertex(i);
        }
        while (true) {
            Ordinal t = f.resolve(a).order;
            if (t <= beta_) return a;
            a = Forest::child(a, t, 1);
        }
    }

    /// x -> a_{x,i}, i >= 1.
    Weights row(std::uint64_t i) const {
        Weights w;
        for (const auto& c : components_) {
            VertexAddr x;
            switch (c.kind) {
                case GeneratorComponent::Kind::fixed: x = c.vertex; break;
                case GeneratorComponent::Kind::drift:
                    x = Forest::child(c.vertex, forest().resolve(c.vertex).order, i + c.offset);
                    break;
                case GeneratorComponent::Kind::escape: x = escape_vertex(i); break;
            }
            w[x] += c.weight;
        }
        return w;
    }

    RationalVec row_vector(std::uint64_t i) const {
        RationalVec v;
        for (const auto& [x, a] : row(i)) v += a * vertex_vector(labels_, x);
        return v;
    }

    /// The group of x: v(y(x)) is the down-neighbor of v(x); nullopt for x in I.
    std::optional<VertexAddr> group_of(const VertexAddr& x) const { return forest().down_neighbor(x); }

private:
    void validate(const GeneratorComponent& c) const {
        const Forest& f = forest();
        switch (c.kind) {
            case GeneratorComponent::Kind::fixed:
                if (!is_w_vertex(f, beta_, c.vertex))
                    throw std::domain_error("fixed component '" + c.vertex.text() + "' is not an element of W_" +
                                            to_text(beta_));
                break;
            case GeneratorComponent::Kind::drift: {
                auto info = f.resolve(c.vertex);
                if (info.is_terminal() || !(info.order <= successor(beta_)))
                    throw std::domain_error("drift component '" + c.vertex.text() +
                                            "' needs up-neighbors that are elements of W_" + to_text(beta_));
                break;
            }
            case GeneratorComponent::Kind::escape:
                if (group_of(escape_vertex(1)) == group_of(escape_vertex(2)) && group_of(escape_vertex(1)))
                    throw std::domain_error("escape component does not leave its group in " + f.name());
                break;
        }
    }

    std::string kind_;
    LabelMap labels_;
    Ordinal beta_;
    std::vector<GeneratorComponent> components_;
};

// --- construction ----------------------------------------------------------------

namespace detail {

inline void declare_components(CoeffGenerator& g) {
    g.declared_p.clear();
    g.declared_s.clear();
    for (const auto& c : g.components()) {
        if (c.kind == GeneratorComponent::Kind::fixed) {
            g.declared_p[c.vertex] += c.weight;
            if (auto y = g.group_of(c.vertex)) g.declared_s[*y] += c.weight;
        } else if (c.kind == GeneratorComponent::Kind::drift) {
            g.declared_s[c.vertex] += c.weight;
        }
    }
}

inline std::optional<Rational> component_bound(const CoeffGenerator& g) {
    Rational b = 0;
    for (const auto& c : g.components()) {
        if (c.kind == GeneratorComponent::Kind::escape) return std::nullopt;
        Rational n = l1_norm(vertex_vector(g.labels(), c.vertex));
        if (c.kind == GeneratorComponent::Kind::drift) n += Rational(g.labels().label(c.vertex));
        b += c.weight * n;
    }
    return b;
}

inline nlohmann::ordered_json components_json(const std::vector<GeneratorComponent>& cs) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& c : cs) {
        nlohmann::ordered_json o;
        o["type"] = to_string(c.kind);
        if (c.kind != GeneratorComponent::Kind::escape) o["vertex"] = c.vertex.text();
        o["weight"] = to_text(c.weight);
        if (c.kind == GeneratorComponent::Kind::drift) o["offset"] = c.offset;
        arr.push_back(std::move(o));
    }
    return arr;
}

}  // namespace detail

/// Rows x_i = z*(child_i(u)) with all mass drifting to the group of u.
inline CoeffGenerator witness_generator(const Forest& f, const Ordinal& beta, const VertexAddr& u) {
    CoeffGenerator g("witness", f, beta, {{GeneratorComponent::Kind::drift, u, 1, 0}});
    detail::declare_components(g);
    g.declared_bound = detail::component_bound(g);
    g.params = {{"vertex", u.text()}};
    return g;
}

/// Declared masses sum to `omega`; the remaining 1 - omega escapes.
inline CoeffGenerator escaping_generator(const Forest& f, const Ordinal& beta, const Rational& omega,
                                         std::optional<VertexAddr> anchor = std::nullopt) {
    if (omega < 0 || omega >= 1) throw std::domain_error("escaping generator needs 0 <= omega < 1");
    std::vector<GeneratorComponent> cs;
    if (omega > 0) {
        if (!anchor) {
            LabelMap lm(f);
            for (const auto& v : lm.first_vertices(64))
                if (is_w_vertex(f, beta, v)) {
                    anchor = v;
                    break;
                }
            if (!anchor) throw std::domain_error("escaping generator: no anchor element found");
        }
        cs.push_back({GeneratorComponent::Kind::fixed, *anchor, omega, 0});
    }
    cs.push_back({GeneratorComponent::Kind::escape, {}, 1 - omega, 0});
    CoeffGenerator g("escaping", f, beta, std::move(cs));
    detail::declare_components(g);
    g.params = {{"omega", to_text(omega)}};
    if (anchor) g.params["anchor"] = anchor->text();
    return g;
}

inline CoeffGenerator custom_generator(const Forest& f, const Ordinal& beta, std::vector<GeneratorComponent> cs) {
    CoeffGenerator g("custom", f, beta, std::move(cs));
    detail::declare_components(g);
    g.declared_bound = detail::component_bound(g);
    g.params = {{"components", detail::components_json(g.components())}};
    return g;
}

/// A random bounded generator over W_beta built from the first `scan` labels.
inline CoeffGenerator random_generator(const Forest& f, const Ordinal& beta, std::uint64_t seed, std::size_t scan = 200) {
    LabelMap lm(f);
    std::vector<VertexAddr> elements, drifters;
    for (const auto& v : lm.first_vertices(scan)) {
        auto info = f.resolve(v);
        if (info.order <= beta) elements.push_back(v);
        if (!info.is_terminal() && info.order <= successor(beta)) drifters.push_back(v);
    }
    if (elements.empty()) throw std::domain_error("random_generator: W_" + to_text(beta) + " has no small elements");
    std::mt19937_64 rng(seed);
    auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
    const std::size_t parts = 1 + pick(4);
    std::vector<GeneratorComponent> cs;
    std::vector<std::uint64_t> raw;
    for (std::size_t k = 0; k < parts; ++k) {
        GeneratorComponent c;
        if (!drifters.empty() && pick(2) == 0) {
            c.kind = GeneratorComponent::Kind::drift;
            c.vertex = drifters[pick(drifters.size())];
            c.offset = pick(6);
        } else {
            c.kind = GeneratorComponent::Kind::fixed;
            c.vertex = elements[pick(elements.size())];
        }
        cs.push_back(c);
        raw.push_back(1 + pick(9));
    }
    std::uint64_t total = 0;
    for (auto r : raw) total += r;
    for (std::size_t k = 0; k < cs.size(); ++k) cs[k].weight = Rational(raw[k], total);
    return custom_generator(f, beta, std::move(cs));
}

// --- JSON --------------------------------------------------------------------------

inline nlohmann::ordered_json to_json(const CoeffGenerator& g) {
    nlohmann::ordered_json j;
    j["kind"] = g.kind();
    j["alpha"] = g.forest().name();
    j["beta"] = to_text(g.beta());
    j["params"] = g.params;
    nlohmann::ordered_json p = nlohmann::ordered_json::object(), s = nlohmann::ordered_json::object();
    for (const auto& [x, v] : g.declared_p) p[x.text()] = to_text(v);
    for (const auto& [y, v] : g.declared_s) s[y.text()] = to_text(v);
    j["declared"] = {{"p", p}, {"s", s}};
    if (g.declared_bound) j["declared"]["bound"] = to_text(*g.declared_bound);
    return j;
}

namespace detail {

inline Rational json_rational(const nlohmann::json& v) {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long long>());
    throw std::invalid_argument("expected a \"num/den\" string");
}

inline Weights json_weights(const nlohmann::json& obj) {
    Weights w;
    if (obj.is_null()) return w;
    for (const auto& [k, v] : obj.items()) w[VertexAddr::parse(k)] = json_rational(v);
    return w;
}

}  // namespace detail

/// Reads the generator format; declared values given in the file replace the
/// construction's own.
inline CoeffGenerator generator_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    const Forest f = Forest::parse(j.at("alpha").get<std::string>());
    const Ordinal beta = parse_ordinal(j.value("beta", std::string("0")));
    const nlohmann::json params = j.value("params", nlohmann::json::object());

    std::optional<CoeffGenerator> g;
    if (kind == "witness") {
        g = witness_generator(f, beta, VertexAddr::parse(params.at("vertex").get<std::string>()));
    } else if (kind == "escaping") {
        std::optional<VertexAddr> anchor;
        if (params.contains("anchor")) anchor = VertexAddr::parse(params.at("anchor").get<std::string>());
        g = escaping_generator(f, beta, detail::json_rational(params.value("omega", nlohmann::json("0"))), anchor);
    } else if (kind == "custom") {
        std::vector<GeneratorComponent> cs;
        for (const auto& c : params.at("components")) {
            GeneratorComponent gc;
            const std::string type = c.at("type").get<std::string>();
            if (type == "fixed") gc.kind = GeneratorComponent::Kind::fixed;
            else if (type == "drift") gc.kind = GeneratorComponent::Kind::drift;
            else if (type == "escape") gc.kind = GeneratorComponent::Kind::escape;
            else throw std::invalid_argument("unknown component type '" + type + "'");
            if (gc.kind != GeneratorComponent::Kind::escape)
                gc.vertex = VertexAddr::parse(c.at("vertex").get<std::string>());
            gc.weight = detail::json_rational(c.at("weight"));
            gc.offset = c.value("offset", std::uint64_t{0});
            cs.push_back(gc);
        }
        g = custom_generator(f, beta, std::move(cs));
    } else {
        throw std::invalid_argument("unknown generator kind '" + kind + "'");
    }
    if (j.contains("declared")) {
        const auto& d = j.at("declared");
        if (d.contains("p")) g->declared_p = detail::json_weights(d.at("p"));
        if (d.contains("s")) g->declared_s = detail::json_weights(d.at("s"));
        if (d.contains("bound")) g->declared_bound = detail::json_rational(d.at("bound"));
    }
    return *g;
}

// --- checks ------------------------------------------------------------------------

struct DeclarationReport {
    bool pass = true;
    std::string detail;
};

/// Compares declared p and s with rows T/2..T. A moving component visits each
/// element and each escape group at most once, so every weight and group mass
/// must equal its declared value (0 if undeclared) on all rows of the window
/// except at most one per moving component.
inline DeclarationReport check_declarations(const CoeffGenerator& g, std::uint64_t terms) {
    DeclarationReport r;
    const std::uint64_t lo = std::max<std::uint64_t>(1, terms / 2);
    std::size_t moving = 0;
    for (const auto& c : g.components())
        if (c.kind != GeneratorComponent::Kind::fixed) ++moving;
    if (terms - lo + 1 <= 2 * moving) {
        r.pass = false;
        r.detail = "window of rows " + std::to_string(lo) + ".." + std::to_string(terms) + " is too short";
        return r;
    }
    std::map<VertexAddr, std::size_t> x_off, y_off;
    auto miss = [&](std::map<VertexAddr, std::size_t>& off, const VertexAddr& key, const std::string& what) {
        if (++off[key] > moving) {
            r.pass = false;
            r.detail = what;
        }
        return !r.pass;
    };
    for (std::uint64_t i = lo; i <= terms; ++i) {
        Weights row = g.row(i);
        Weights groups;
        for (const auto& [x, a] : row)
            if (auto y = g.group_of(x)) groups[*y] += a;
        for (const auto& [x, p] : g.declared_p) {
            auto it = row.find(x);
            Rational a = it == row.end() ? Rational(0) : it->second;
            if (a != p && miss(x_off, x, "a_{" + x.text() + "," + std::to_string(i) + "} = " + to_text(a) + ", declared p = " + to_text(p)))
                return r;
        }
        for (const auto& [y, s] : g.declared_s) {
            auto it = groups.find(y);
            Rational a = it == groups.end() ? Rational(0) : it->second;
            if (a != s && miss(y_off, y, "group mass of " + y.text() + " at i=" + std::to_string(i) + " is " + to_text(a) +
                                             ", declared s = " + to_text(s)))
                return r;
        }
        for (const auto& [x, a] : row)
            if (!g.declared_p.count(x) && miss(x_off, x, "element " + x.text() + " keeps weight but has no declared p"))
                return r;
        for (const auto& [y, a] : groups)
            if (!g.declared_s.count(y) && miss(y_off, y, "group " + y.text() + " keeps mass but has no declared s"))
                return r;
    }
    r.detail = "declared p (" + std::to_string(g.declared_p.size()) + ") and s (" + std::to_string(g.declared_s.size()) +
               ") hold on rows " + std::to_string(lo) + ".." + std::to_string(terms);
    return r;
}

struct LimitDecomposition {
    std::vector<VertexAddr> initial;  // I
    std::vector<VertexAddr> groups;   // D, by vertex of y
    Weights p;
    Weights s;
    Weights residual;  // s_y - sum of p_x over the group of y
};

struct LimitResult {
    RationalVec limit;
    LimitDecomposition decomposition;
    std::optional<ConvergenceReport> convergence;
};

inline Rational declared_total(const CoeffGenerator& g) {
    Rational t = 0;
    for (const auto& [x, p] : g.declared_p)
        if (!g.group_of(x)) t += p;
    for (const auto& [y, s] : g.declared_s) t += s;
    return t;
}

/// Evaluates sum_I p_x x + sum_D (sum_{x over y} p_x x + (s_y - sum p_x) y)
/// from the declared values, then checks that the rows converge to it.
inline LimitResult limit_of_generator(const CoeffGenerator& g, std::uint64_t coords = 64, std::uint64_t terms = 256) {
    if (declared_total(g) != 1)
        throw std::domain_error("limit_of_generator: declared masses sum to " + to_text(declared_total(g)) + ", not 1");
    LimitResult out;
    auto& d = out.decomposition;
    d.p = g.declared_p;
    d.s = g.declared_s;
    for (const auto& [y, s] : g.declared_s) d.residual[y] = s;
    for (const auto& [x, p] : g.declared_p) {
        auto y = g.group_of(x);
        if (!y) {
            d.initial.push_back(x);
            continue;
        }
        if (!d.residual.count(*y))
            throw std::domain_error("limit_of_generator: element " + x.text() + " has p > 0 but its group has no s");
        d.residual[*y] -= p;
    }
    for (const auto& [y, r] : d.residual) {
        d.groups.push_back(y);
        if (r < 0) throw std::domain_error("limit_of_generator: s < sum of p in the group of " + y.text());
    }

    for (const auto& [x, p] : g.declared_p) out.limit += p * vertex_vector(g.labels(), x);
    for (const auto& [y, r] : d.residual)
        if (r != 0) out.limit += r * vertex_vector(g.labels(), y);

    if (g.declared_bound) {
        VecSequence seq{[&g](std::uint64_t i) { return g.row_vector(i); }, *g.declared_bound, out.limit};
        out.convergence = check_coordwise_convergence(seq, coords, terms);
    }
    return out;
}

/// Coordinates 1..coords of the rows, read off where they are constant on
/// rows T/2..T. nullopt if some coordinate is still moving.
inline std::optional<RationalVec> oracle_limit(const CoeffGenerator& g, std::uint64_t coords, std::uint64_t terms) {
    const std::uint64_t lo = std::max<std::uint64_t>(1, terms / 2);
    RationalVec first = g.row_vector(lo);
    RationalVec out;
    for (std::uint64_t j = 1; j <= coords; ++j) out.set(Natural(j), first[Natural(j)]);
    for (std::uint64_t i = lo + 1; i <= terms; ++i) {
        RationalVec v = g.row_vector(i);
        for (std::uint64_t j = 1; j <= coords; ++j)
            if (v[Natural(j)] != out[Natural(j)]) return std::nullopt;
    }
    return out;
}

inline RationalVec restrict_coords(const RationalVec& v, std::uint64_t coords) {
    RationalVec out;
    for (const auto& [j, q] : v.coords())
        if (j <= coords) out.set(j, q);
    return out;
}

struct GrowthStep {
    std::uint64_t M = 0;
    Rational threshold;
    std::optional<std::uint64_t> from;  // smallest j with min_{j<=i<=N} ||row_i|| > threshold
    Rational min_norm;                  // that minimum, or the overall one if none
};

struct MassReport {
    bool pass = false;
    Rational total;
    bool growth_checked = false;
    bool growth_detected = false;
    std::vector<GrowthStep> growth;
    Rational max_norm;
    std::string detail;
};

/// Declared masses must sum to 1. When they sum to omega < 1, the escaping
/// mass forces ||row_i||_1 >= z**(row_i) / C > M (1 - omega - eps) / C from
/// some j on, for each M; the detector looks for that j in the first half of
/// the horizon. Bounded rows with omega < 1 are reported as a contradiction.
inline MassReport mass_conservation_check(const CoeffGenerator& g, std::uint64_t horizon = 256,
                                          std::uint64_t max_m = 100, const Rational& eps = Rational(1, 100),
                                          const Rational& c = 1) {
    MassReport r;
    r.total = declared_total(g);
    if (r.total == 1) {
        r.pass = true;
        r.detail = "declared masses sum to 1";
        return r;
    }
    if (r.total > 1) {
        r.detail = "declared masses sum to " + to_text(r.total) + " > 1";
        return r;
    }
    r.growth_checked = true;
    std::vector<Rational> norms(horizon + 1);
    for (std::uint64_t i = 1; i <= horizon; ++i) {
        norms[i] = l1_norm(g.row_vector(i));
        if (norms[i] > r.max_norm) r.max_norm = norms[i];
    }
    std::vector<Rational> suffix_min(horizon + 2);
    suffix_min[horizon] = norms[horizon];
    for (std::uint64_t i = horizon; i-- > 1;) suffix_min[i] = norms[i] < suffix_min[i + 1] ? norms[i] : suffix_min[i + 1];

    r.growth_detected = true;
    for (std::uint64_t M = 1; M <= max_m; ++M) {
        GrowthStep s;
        s.M = M;
        s.threshold = Rational(M) * (1 - r.total - eps) / c;
        s.min_norm = suffix_min[1];
        for (std::uint64_t j = 1; j <= horizon / 2; ++j)
            if (suffix_min[j] > s.threshold) {
                s.from = j;
                s.min_norm = suffix_min[j];
                break;
            }
        if (!s.from) r.growth_detected = false;
        r.growth.push_back(std::move(s));
    }
    r.pass = r.growth_detected;
    if (r.growth_detected) {
        r.detail = "declared masses sum to " + to_text(r.total) + "; row norms exceed M(1-omega-eps)/C for M=1.." +
                   std::to_string(max_m) + " (growth detected, rows unbounded)";
    } else {
        r.detail = "contradiction: declared masses sum to " + to_text(r.total) +
                   " < 1 while rows stay below " + to_text(r.max_norm) + " on 1.." + std::to_string(horizon);
    }
    return r;
}

struct ClosednessReport {
    bool pass = true;
    std::size_t generators = 0;
    std::size_t residual_groups = 0;
    std::string detail;
};

/// Item D, structurally: every group vector y that keeps positive residual
/// mass in the limit lies in some X^gamma with gamma <= alpha.
inline ClosednessReport closedness_check(const Forest& f, std::size_t count, std::uint64_t seed,
                                         std::uint64_t terms = 64) {
    if (!f.is_tree() || f.order().kind() != OrdinalKind::successor)
        throw std::domain_error("closedness_check: the forest must be a tree of successor order");
    ClosednessReport r;
    const Ordinal alpha = f.order();
    LabelMap lm(f);
    std::mt19937_64 rng(seed);
    for (std::size_t k = 0; k < count; ++k) {
        CoeffGenerator g = random_generator(f, alpha, rng());
        ++r.generators;
        auto decl = check_declarations(g, terms);
        if (!decl.pass) {
            r.pass = false;
            r.detail = "generator " + std::to_string(k) + ": " + decl.detail;
            return r;
        }
        auto lim = limit_of_generator(g, 16, terms);
        for (const auto& [y, res] : lim.decomposition.residual) {
            if (res <= 0) continue;
            ++r.residual_groups;
            RationalVec yv = vertex_vector(lm, y);
            auto v = vertex_of(lm, yv);
            const Ordinal gamma = v ? f.resolve(*v).order : Ordinal{};
            if (!v || !(gamma <= alpha) || !in_X_beta(lm, gamma, yv)) {
                r.pass = false;
                r.detail = "generator " + std::to_string(k) + ": residual group " + y.text() + " is outside W_" +
                           to_text(alpha);
                return r;
            }
        }
    }
    r.detail = std::to_string(r.generators) + " generators, " + std::to_string(r.residual_groups) +
               " residual groups, all in W_" + to_text(alpha);
    return r;
}

}  // namespace wstar
