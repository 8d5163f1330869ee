#pragma once

// The vector sets built from a labeled forest.
//
// For a vertex u with chain labels n_1 < ... < n_k (initial vertex first),
// z*(u) = sum_i n_{i-1} e_{n_i} with n_0 = n_1. X is the set of z*(v) over
// terminal v, and the shortening X^beta keeps only the coordinates whose
// vertex survives in F^beta. Survivors along a chain form a prefix, so every
// element of X^beta is z*(u) for the deepest survivor u. That u is exactly a
// vertex present in F^beta with order(u) <= beta, which gives
//   X^beta                 = { z*(u) : u in F^beta, order(u) <= beta }
//   W_beta = U_{g<=beta} X^g = { z*(u) : order(u) <= beta }
// and X^{beta+1} \ W_beta consists of the z*(u) with order(u) = beta + 1.

#include "wstar/dualvec.hpp"
#include "wstar/forest.hpp"
#include "wstar/labeling.hpp"
#include "wstar/ordinal.hpp"
#include "wstar/truncation.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace wstar {

struct PathVector {
    RationalVec vec;
    VertexAddr vertex;
    std::vector<Natural> chain;
    std::optional<Ordinal> order_beta;
};

inline RationalVec vector_of_chain(const std::vector<Natural>& chain) {
    RationalVec v;
    for (std::size_t i = 0; i < chain.size(); ++i) v.set(chain[i], Rational(chain[i == 0 ? 0 : i - 1]));
    return v;
}

/// z*(u) for any vertex, terminal or not.
inline RationalVec vertex_vector(const LabelMap& lm, const VertexAddr& u) {
    return vector_of_chain(lm.path_labels(u));
}

inline PathVector path_vector(const LabelMap& lm, const VertexAddr& terminal) {
    PathVector p;
    p.chain = lm.chain_labels(terminal);
    p.vec = vector_of_chain(p.chain);
    p.vertex = terminal;
    p.order_beta = Ordinal{};
    return p;
}

/// Deepest vertex of the chain to `terminal` that survives in F^beta.
inline VertexAddr shortened_vertex(const Forest& f, const Ordinal& beta, const VertexAddr& terminal) {
    if (!f.is_terminal(terminal))
        throw std::domain_error("shortened_vector: '" + terminal.text() + "' is not terminal");
    VertexAddr last;
    for (const auto& a : f.chain(terminal)) {
        if (!in_derived(f, beta, a)) break;
        last = a;
    }
    return last;
}

inline RationalVec shortened_vector(const LabelMap& lm, const Ordinal& beta, const VertexAddr& terminal) {
    return vertex_vector(lm, shortened_vertex(lm.forest(), beta, terminal));
}

/// u is v(y) for some y in X^beta.
inline bool is_x_vertex(const Forest& f, const Ordinal& beta, const VertexAddr& u) {
    return terminal_in_derived(f, beta, u);
}

/// u is v(z) for some z in W_beta.
inline bool is_w_vertex(const Forest& f, const Ordinal& beta, const VertexAddr& u) {
    return f.resolve(u).order <= beta;
}

/// u is v(y) for some y in X^{beta+1} \ W_beta.
inline bool is_difference_vertex(const Forest& f, const Ordinal& beta, const VertexAddr& u) {
    const Ordinal next = successor(beta);
    auto info = f.resolve(u);
    return info.order == next && (info.is_initial() || next < *info.parent_order);
}

/// The vertex v(w) when w = z*(v(w)); nullopt for vectors of any other form.
inline std::optional<VertexAddr> vertex_of(const LabelMap& lm, const RationalVec& w) {
    if (w.empty()) return std::nullopt;
    auto u = lm.unlabel(w.coords().rbegin()->first);
    if (!u) return std::nullopt;
    if (vertex_vector(lm, *u) != w) return std::nullopt;
    return u;
}

inline bool in_X_beta(const LabelMap& lm, const Ordinal& beta, const RationalVec& w) {
    auto u = vertex_of(lm, w);
    return u && is_x_vertex(lm.forest(), beta, *u);
}

inline bool in_W(const LabelMap& lm, const Ordinal& beta, const RationalVec& w) {
    auto u = vertex_of(lm, w);
    return u && is_w_vertex(lm.forest(), beta, *u);
}

namespace detail {

template <class Pred>
std::vector<PathVector> emit_where(const LabelMap& lm, const Natural& label_bound, Pred pred) {
    std::vector<PathVector> out;
    if (label_bound < 1) return out;
    const auto n = static_cast<std::size_t>(label_bound);
    for (const auto& u : lm.first_vertices(n)) {
        if (!pred(u)) continue;
        PathVector p;
        p.vertex = u;
        p.chain = lm.path_labels(u);
        p.vec = vector_of_chain(p.chain);
        out.push_back(std::move(p));
    }
    std::sort(out.begin(), out.end(), [](const PathVector& a, const PathVector& b) { return a.vec < b.vec; });
    return out;
}

}  // namespace detail

/// Elements of X^beta whose support labels are <= label_bound, sorted.
inline std::vector<PathVector> emit_X(const LabelMap& lm, const Ordinal& beta, const Natural& label_bound) {
    auto out = detail::emit_where(lm, label_bound, [&](const VertexAddr& u) { return is_x_vertex(lm.forest(), beta, u); });
    for (auto& p : out) p.order_beta = lm.forest().resolve(p.vertex).order;
    return out;
}

/// Elements of W_beta with support labels <= label_bound, sorted.
inline std::vector<PathVector> emit_W(const LabelMap& lm, const Ordinal& beta, const Natural& label_bound) {
    auto out = detail::emit_where(lm, label_bound, [&](const VertexAddr& u) { return is_w_vertex(lm.forest(), beta, u); });
    for (auto& p : out) p.order_beta = lm.forest().resolve(p.vertex).order;
    return out;
}

/// Vertices u = v(y), y in X^{beta+1} \ W_beta, among the first `scan` labels.
inline std::vector<VertexAddr> difference_vertices(const LabelMap& lm, const Ordinal& beta, std::size_t scan,
                                                   std::size_t want = SIZE_MAX) {
    std::vector<VertexAddr> out;
    for (const auto& u : lm.first_vertices(scan)) {
        if (out.size() >= want) break;
        if (is_difference_vertex(lm.forest(), beta, u)) out.push_back(u);
    }
    return out;
}

/// The least-labeled element of X^{beta+1} \ W_beta, if one has label <= scan.
inline std::optional<PathVector> nontrivial_difference_witness(const LabelMap& lm, const Ordinal& beta,
                                                               std::size_t scan = 4096) {
    auto us = difference_vertices(lm, beta, scan, 1);
    if (us.empty()) return std::nullopt;
    PathVector p;
    p.vertex = us.front();
    p.chain = lm.path_labels(p.vertex);
    p.vec = vector_of_chain(p.chain);
    p.order_beta = successor(beta);
    return p;
}

// --- witness sequences -----------------------------------------------------------

/// A sequence in X^beta converging to y = z*(u). If y is already in X^beta it
/// is constant; otherwise u must have order beta+1 and survive in F^{beta+1},
/// so all of its up-neighbors are terminal in F^beta and the i-th term is
/// z*(i-th up-neighbor) = y + m e_{label(child_i)}, m = label(u).
inline VecSequence witness_sequence(const LabelMap& lm, const Ordinal& beta, const VertexAddr& u) {
    const Forest& f = lm.forest();
    VecSequence s;
    RationalVec y = vertex_vector(lm, u);
    s.declared_limit = y;
    if (is_x_vertex(f, beta, u)) {
        s.declared_bound = l1_norm(y);
        s.generator = [y](std::uint64_t) { return y; };
        return s;
    }
    if (!is_difference_vertex(f, beta, u))
        throw std::domain_error("witness_sequence: '" + u.text() + "' has no infinite family of terminal up-neighbors in F^" +
                                to_text(beta));
    const Natural m = lm.label(u);
    const Ordinal order = f.resolve(u).order;
    s.declared_bound = l1_norm(y) + Rational(m);
    s.generator = [lm, y, m, u, order](std::uint64_t i) {
        RationalVec x = y;
        x.set(lm.label(Forest::child(u, order, i)), Rational(m));
        return x;
    };
    return s;
}

// --- separation ------------------------------------------------------------------

struct SeparationCertificate {
    Natural m;  // label of v(y)
    VertexAddr vertex;
    RationalVec y;
    Functional functional;
    Rational margin;
};

/// f(w) = w_m - sum_{j not in supp y} w_j, written as -zss plus corrections
/// +1 on supp(y) \ {m} and +2 at m.
inline SeparationCertificate separation_certificate(const LabelMap& lm, const Ordinal& beta, const VertexAddr& u) {
    if (!is_difference_vertex(lm.forest(), beta, u))
        throw std::domain_error("separation_certificate: z*('" + u.text() + "') is not in X^" + to_text(successor(beta)) +
                                " minus the union of the X^g, g <= " + to_text(beta));
    SeparationCertificate c;
    c.vertex = u;
    c.y = vertex_vector(lm, u);
    c.m = lm.label(u);
    c.functional.constant = -1;
    for (const auto& j : c.y.support()) c.functional.corrections[j] = j == c.m ? 2 : 1;
    c.margin = c.functional(c.y);
    return c;
}

struct CandidateEval {
    RationalVec w;
    char kind = '?';  // 'E' extension of y, 'R' zero at m with mass off supp(y)
    Rational value;
};

struct SeparationReport {
    bool pass = false;
    Rational value_at_y;
    std::size_t extensions = 0;
    std::size_t others = 0;
    std::size_t unclassified = 0;
    Rational max_value;
    std::vector<CandidateEval> evaluations;
    std::string detail;
};

inline char classify_candidate(const SeparationCertificate& c, const RationalVec& w) {
    bool agrees = true;
    for (const auto& [j, v] : c.y.coords())
        if (w[j] != v) agrees = false;
    bool off_support = false;
    for (const auto& [j, v] : w.coords())
        if (c.y[j] == 0 && v > 0) off_support = true;
    if (agrees && off_support) return 'E';
    if (w[c.m] == 0 && off_support) return 'R';
    return '?';
}

inline SeparationReport check_separation(const SeparationCertificate& c, const std::vector<RationalVec>& candidates) {
    SeparationReport r;
    r.value_at_y = c.functional(c.y);
    bool all_nonpositive = true;
    bool first = true;
    for (const auto& w : candidates) {
        CandidateEval e{w, classify_candidate(c, w), c.functional(w)};
        if (e.kind == 'E') ++r.extensions;
        else if (e.kind == 'R') ++r.others;
        else ++r.unclassified;
        if (e.value > 0) all_nonpositive = false;
        if (first || e.value > r.max_value) r.max_value = e.value;
        first = false;
        r.evaluations.push_back(std::move(e));
    }
    r.pass = r.value_at_y == c.margin && c.margin > 0 && all_nonpositive && r.unclassified == 0;
    r.detail = "margin " + to_text(c.margin) + ", E=" + std::to_string(r.extensions) + ", R=" + std::to_string(r.others) +
               (r.unclassified ? ", unclassified=" + std::to_string(r.unclassified) : std::string()) +
               (candidates.empty() ? std::string() : ", max candidate value " + to_text(r.max_value));
    return r;
}

// --- support inclusion -------------------------------------------------------------

struct SubvecViolation {
    VertexAddr y_vertex;
    VertexAddr z_vertex;
};

/// Pairs (y, z) among the truncation's vertices with y in X^{beta+1} \ W_beta,
/// z in W_beta and supp(z) contained in supp(y). Always empty in theory.
inline std::vector<SubvecViolation> subvec_violations(const LabelMap& lm, const FiniteForest& trunc,
                                                      const Ordinal& beta) {
    const Forest& f = lm.forest();
    std::vector<std::pair<VertexAddr, std::set<Natural>>> ys, zs;
    for (const auto& v : trunc.vertices) {
        const bool is_y = is_difference_vertex(f, beta, v.addr);
        const bool is_z = is_w_vertex(f, beta, v.addr);
        if (!is_y && !is_z) continue;
        auto labels = lm.path_labels(v.addr);
        std::set<Natural> support(labels.begin(), labels.end());
        if (is_y) ys.emplace_back(v.addr, support);
        if (is_z) zs.emplace_back(v.addr, std::move(support));
    }
    std::vector<SubvecViolation> out;
    for (const auto& [ya, ysup] : ys)
        for (const auto& [za, zsup] : zs)
            if (std::includes(ysup.begin(), ysup.end(), zsup.begin(), zsup.end())) out.push_back({ya, za});
    return out;
}

// --- the vector r ------------------------------------------------------------------

/// r = k e_k where k labels the initial vertex of the tree F_{tau+1}.
inline RationalVec r_vector(const LabelMap& lm) {
    const Forest& f = lm.forest();
    if (!f.is_tree() || f.order().kind() != OrdinalKind::successor)
        throw std::domain_error("r_vector: the forest must be a tree of successor order");
    const Natural k = lm.label(f.initial_vertex());
    return RationalVec::unit(k, Rational(k));
}

}  // namespace wstar
