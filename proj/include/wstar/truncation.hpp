#pragma once

// Finite truncations of F_alpha and the brute-force derivation oracle.
//
// truncate() keeps the first b up-neighbors of every vertex (and the first b
// components of a disconnected forest) down to depth d. Since a vertex of
// F_alpha has either no up-neighbors or countably many, "all b kept children
// are terminal" stands in for "infinitely many terminal up-neighbors".
// Vertices whose children were cut by the depth bound are flagged and never
// count as terminal.

#include "wstar/forest.hpp"
#include "wstar/ordinal.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace wstar {

struct FiniteVertex {
    VertexAddr addr;
    std::optional<std::size_t> parent;
    std::vector<std::size_t> children;
    std::size_t depth = 0;
    bool cut = false;
};

class FiniteForest {
public:
    std::string alpha;
    std::optional<std::string> beta;
    std::size_t depth = 0;
    std::size_t branch = 0;
    std::vector<FiniteVertex> vertices;

    std::size_t size() const noexcept { return vertices.size(); }

    bool is_terminal(std::size_t v) const { return vertices[v].children.empty() && !vertices[v].cut; }

    std::vector<std::size_t> roots() const {
        std::vector<std::size_t> r;
        for (std::size_t i = 0; i < vertices.size(); ++i)
            if (!vertices[i].parent) r.push_back(i);
        return r;
    }

    std::optional<std::size_t> find(const VertexAddr& a) const {
        for (std::size_t i = 0; i < vertices.size(); ++i)
            if (vertices[i].addr == a) return i;
        return std::nullopt;
    }
};

inline FiniteForest truncate(const Forest& f, std::size_t depth, std::size_t branch) {
    if (depth < 1 || branch < 1) throw std::invalid_argument("truncate: depth and branch must be >= 1");
    FiniteForest out;
    out.alpha = f.name();
    out.depth = depth;
    out.branch = branch;

    struct Pending {
        VertexAddr addr;
        Ordinal order;
        std::optional<std::size_t> parent;
        std::size_t depth;
    };
    std::deque<Pending> queue;
    if (f.is_tree()) {
        queue.push_back({f.initial_vertex(), f.order(), std::nullopt, 0});
    } else {
        for (std::uint64_t n = 1; n <= branch; ++n) queue.push_back({f.initial_vertex(n), f.component_order(n), std::nullopt, 0});
    }
    while (!queue.empty()) {
        Pending p = std::move(queue.front());
        queue.pop_front();
        std::size_t id = out.vertices.size();
        out.vertices.push_back({p.addr, p.parent, {}, p.depth, false});
        if (p.parent) out.vertices[*p.parent].children.push_back(id);
        if (p.order.is_zero()) continue;
        if (p.depth == depth) {
            out.vertices[id].cut = true;
            continue;
        }
        for (std::uint64_t n = 1; n <= branch; ++n)
            queue.push_back({Forest::child(p.addr, p.order, n), child_order(p.order, n), id, p.depth + 1});
    }
    return out;
}

namespace detail {

inline FiniteForest keep_only(const FiniteForest& f, const std::vector<bool>& keep) {
    FiniteForest out;
    out.alpha = f.alpha;
    out.beta = f.beta;
    out.depth = f.depth;
    out.branch = f.branch;
    std::vector<std::size_t> remap(f.size(), SIZE_MAX);
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!keep[i]) continue;
        remap[i] = out.vertices.size();
        const auto& v = f.vertices[i];
        out.vertices.push_back({v.addr, std::nullopt, {}, v.depth, v.cut});
    }
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!keep[i] || !f.vertices[i].parent) continue;
        std::size_t p = *f.vertices[i].parent;
        if (!keep[p]) throw std::logic_error("keep_only: kept vertex lost its parent");
        out.vertices[remap[i]].parent = remap[p];
        out.vertices[remap[p]].children.push_back(remap[i]);
    }
    return out;
}

}  // namespace detail

/// One step of the deletion rule on a finite truncation.
inline FiniteForest brute_derive_once(const FiniteForest& f) {
    std::vector<bool> keep(f.size(), true);
    for (std::size_t v = 0; v < f.size(); ++v) {
        const auto& ch = f.vertices[v].children;
        std::size_t terminal = 0;
        for (auto c : ch)
            if (f.is_terminal(c)) ++terminal;
        if (terminal == f.branch && ch.size() == f.branch)
            for (auto c : ch) keep[c] = false;
    }
    return detail::keep_only(f, keep);
}

inline FiniteForest brute_derive(const FiniteForest& f, std::size_t steps) {
    FiniteForest cur = f;
    for (std::size_t k = 0; k < steps; ++k) {
        FiniteForest next = brute_derive_once(cur);
        if (next.size() == cur.size()) break;
        cur = std::move(next);
    }
    return cur;
}

/// The truncation restricted to the vertices of F^beta, using the symbolic
/// membership test. Exact for every beta, unlike brute_derive.
inline FiniteForest restrict_to_derived(const FiniteForest& trunc, const Forest& f, const Ordinal& beta) {
    std::vector<bool> keep(trunc.size());
    for (std::size_t i = 0; i < trunc.size(); ++i) keep[i] = in_derived(f, beta, trunc.vertices[i].addr);
    FiniteForest out = detail::keep_only(trunc, keep);
    out.beta = to_text(beta);
    for (auto& v : out.vertices)
        if (v.cut && f.resolve(v.addr).order <= beta) v.cut = false;
    return out;
}

/// Step count at which stage beta is reached on a truncation with branching
/// b: limits are replaced by the b-th element of their fundamental sequence.
inline std::uint64_t finite_stage(const Ordinal& beta, std::uint64_t b) {
    std::uint64_t extra = 0;
    Ordinal cur = beta;
    while (!cur.is_zero()) {
        if (auto n = cur.as_finite()) return extra + *n;
        if (cur.kind() == OrdinalKind::successor) {
            const auto& t = cur.terms();
            extra += t.back().coefficient;
            Ordinal head;
            for (std::size_t i = 0; i + 1 < t.size(); ++i) head = head + Ordinal::omega_power(t[i].exponent, t[i].coefficient);
            cur = head;
        } else {
            cur = fundamental(cur, b);
        }
    }
    return extra;
}

// --- isomorphism -------------------------------------------------------------

namespace detail {

inline std::string canonical_subtree(const FiniteForest& f, std::size_t v) {
    std::vector<std::string> parts;
    for (auto c : f.vertices[v].children) parts.push_back(canonical_subtree(f, c));
    std::sort(parts.begin(), parts.end());
    std::string out = "(";
    for (auto& p : parts) out += p;
    return out + ")";
}

}  // namespace detail

inline std::string canonical_form(const FiniteForest& f) {
    std::vector<std::string> parts;
    for (auto r : f.roots()) parts.push_back(detail::canonical_subtree(f, r));
    std::sort(parts.begin(), parts.end());
    std::string out;
    for (auto& p : parts) out += p;
    return out;
}

/// Rooted-forest isomorphism (unordered children).
inline bool iso_check(const FiniteForest& a, const FiniteForest& b) {
    return a.size() == b.size() && canonical_form(a) == canonical_form(b);
}

// --- export ------------------------------------------------------------------

inline nlohmann::ordered_json to_json(const FiniteForest& f) {
    nlohmann::ordered_json j;
    j["alpha"] = f.alpha;
    if (f.beta) j["beta"] = *f.beta;
    j["depth"] = f.depth;
    j["branch"] = f.branch;
    j["vertex_count"] = f.size();
    auto verts = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < f.size(); ++i) {
        const auto& v = f.vertices[i];
        nlohmann::ordered_json o;
        o["addr"] = v.addr.text();
        o["parent"] = v.parent ? nlohmann::ordered_json(f.vertices[*v.parent].addr.text()) : nlohmann::ordered_json();
        o["terminal"] = f.is_terminal(i);
        verts.push_back(std::move(o));
    }
    j["vertices"] = std::move(verts);
    return j;
}

inline constexpr std::size_t dot_vertex_limit = 10000;

inline std::string to_dot(const FiniteForest& f) {
    if (f.size() >= dot_vertex_limit)
        throw std::length_error("DOT export is limited to truncations below " + std::to_string(dot_vertex_limit) +
                                " vertices");
    std::ostringstream os;
    os << "digraph F {\n";
    for (std::size_t i = 0; i < f.size(); ++i) {
        os << "  v" << i << " [label=\"" << f.vertices[i].addr.text() << "\"";
        if (f.is_terminal(i)) os << ", shape=box";
        os << "];\n";
    }
    for (std::size_t i = 0; i < f.size(); ++i)
        for (auto c : f.vertices[i].children) os << "  v" << i << " -> v" << c << ";\n";
    os << "}\n";
    return os.str();
}

inline std::string to_text(const FiniteForest& f) {
    std::ostringstream os;
    os << "forest " << f.alpha;
    if (f.beta) os << " derived " << *f.beta;
    os << " depth=" << f.depth << " branch=" << f.branch << " vertices=" << f.size() << "\n";
    std::vector<std::pair<std::size_t, std::size_t>> stack;
    auto roots = f.roots();
    for (auto it = roots.rbegin(); it != roots.rend(); ++it) stack.push_back({*it, 0});
    while (!stack.empty()) {
        auto [v, indent] = stack.back();
        stack.pop_back();
        const auto& x = f.vertices[v];
        os << std::string(2 * indent, ' ') << (x.addr.empty() ? std::string("<vertex>") : x.addr.text());
        if (f.is_terminal(v)) os << " *";
        if (x.cut) os << " ...";
        os << "\n";
        for (auto it = x.children.rbegin(); it != x.children.rend(); ++it) stack.push_back({*it, indent + 1});
    }
    return os.str();
}

}  // namespace wstar
