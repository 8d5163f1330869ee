#pragma once

// The forests F_alpha, addressed symbolically.
//
// A vertex is named by the construction choices that reach it. Inside a tree
// T_t (t = 0 or a successor) the address is empty when t = 0; otherwise it is
// "R" for the root, optionally followed by a child index n and the address of
// the vertex inside the n-th child tree. A forest with infinitely many
// components first selects the component by index. So "R.3.R.1" is the first
// leaf above the root of the third copy of F_1 inside F_2.

#include "wstar/ordinal.hpp"

#include <charconv>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wstar {

class invalid_address : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Step {
    enum class Kind : std::uint8_t { root, child };

    Kind kind = Kind::root;
    std::uint64_t index = 0;  // >= 1 for child steps

    static Step root() { return {Kind::root, 0}; }
    static Step child(std::uint64_t n) { return {Kind::child, n}; }

    bool is_root() const noexcept { return kind == Kind::root; }

    // Root sorts before every child step; child steps sort by index.
    friend auto operator<=>(const Step&, const Step&) = default;
};

class VertexAddr {
public:
    VertexAddr() = default;
    explicit VertexAddr(std::vector<Step> steps) : steps_(std::move(steps)) {}

    const std::vector<Step>& steps() const noexcept { return steps_; }
    bool empty() const noexcept { return steps_.empty(); }
    std::size_t size() const noexcept { return steps_.size(); }

    VertexAddr then(Step s) const {
        VertexAddr r = *this;
        r.steps_.push_back(s);
        return r;
    }

    bool is_prefix_of(const VertexAddr& other) const {
        if (steps_.size() > other.steps_.size()) return false;
        for (std::size_t i = 0; i < steps_.size(); ++i)
            if (steps_[i] != other.steps_[i]) return false;
        return true;
    }

    std::string text() const {
        std::string out;
        for (const auto& s : steps_) {
            if (!out.empty()) out += '.';
            out += s.is_root() ? std::string("R") : std::to_string(s.index);
        }
        return out;
    }

    static VertexAddr parse(std::string_view text) {
        std::vector<Step> steps;
        if (text.empty()) return VertexAddr{};
        std::size_t start = 0;
        while (true) {
            auto dot = text.find('.', start);
            auto tok = text.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start);
            if (tok == "R" || tok == "r") {
                steps.push_back(Step::root());
            } else {
                std::uint64_t n = 0;
                auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), n);
                if (tok.empty() || ec != std::errc{} || p != tok.data() + tok.size() || n == 0)
                    throw invalid_address("malformed address step '" + std::string(tok) + "' in '" +
                                          std::string(text) + "'");
                steps.push_back(Step::child(n));
            }
            if (dot == std::string_view::npos) break;
            start = dot + 1;
        }
        return VertexAddr{std::move(steps)};
    }

    friend auto operator<=>(const VertexAddr&, const VertexAddr&) = default;

private:
    std::vector<Step> steps_;
};

/// Order of the n-th child tree hanging from the root of T_t (t a successor).
inline Ordinal child_order(const Ordinal& t, std::uint64_t n) {
    Ordinal below = predecessor(t);
    return below.kind() == OrdinalKind::limit ? fundamental(below, n) : below;
}

struct VertexInfo {
    /// The subtree rooted at the vertex is a copy of T_order; 0 for leaves.
    Ordinal order;
    std::optional<VertexAddr> parent;
    std::optional<Ordinal> parent_order;
    std::size_t depth = 0;
    std::uint64_t component = 1;

    bool is_initial() const noexcept { return !parent.has_value(); }
    bool is_terminal() const noexcept { return order.is_zero(); }
};

/// Either F_alpha itself or a forest of countably many disjoint copies of
/// the tree F_t (t zero or a successor). The latter is the forest used for
/// order 1 in the closing step of the construction, and a source of many
/// same-order vertices in general.
class Forest {
public:
    static Forest of(const Ordinal& alpha) { return Forest(alpha, false); }

    static Forest copies(const Ordinal& tree_order) {
        if (tree_order.kind() == OrdinalKind::limit)
            throw std::domain_error("copies(): the repeated forest must be a tree (zero or successor order)");
        return Forest(tree_order, true);
    }

    /// "w+1" or "copies(w+1)".
    static Forest parse(std::string_view text) {
        constexpr std::string_view prefix = "copies(";
        if (text.substr(0, prefix.size()) == prefix) {
            if (text.empty() || text.back() != ')') throw ordinal_parse_error("expected ')'", text.size());
            return copies(parse_ordinal(text.substr(prefix.size(), text.size() - prefix.size() - 1)));
        }
        return of(parse_ordinal(text));
    }

    const Ordinal& order() const noexcept { return order_; }
    bool is_copies() const noexcept { return copies_; }

    /// Connected forests have a single initial vertex.
    bool is_tree() const noexcept { return !copies_ && order_.kind() != OrdinalKind::limit; }

    std::string name() const { return copies_ ? "copies(" + to_text(order_) + ")" : to_text(order_); }

    /// Order of the n-th component (n >= 1); only for disconnected forests.
    Ordinal component_order(std::uint64_t n) const {
        if (is_tree()) throw std::logic_error("component_order on a tree");
        return copies_ ? order_ : fundamental(order_, n);
    }

    VertexAddr initial_vertex(std::uint64_t component = 1) const {
        VertexAddr a;
        Ordinal t = order_;
        if (!is_tree()) {
            a = a.then(Step::child(component));
            t = component_order(component);
        }
        return t.is_zero() ? a : a.then(Step::root());
    }

    /// nullopt for addresses that name no vertex.
    std::optional<VertexInfo> locate(const VertexAddr& addr) const {
        const auto& s = addr.steps();
        std::size_t i = 0;
        VertexInfo info;
        Ordinal t = order_;
        if (!is_tree()) {
            if (s.empty() || s[0].is_root()) return std::nullopt;
            info.component = s[0].index;
            t = component_order(s[0].index);
            i = 1;
        }
        std::optional<std::size_t> root_at;
        while (true) {
            // Standing at the start of a tree T_t.
            if (t.is_zero()) {
                if (i != s.size()) return std::nullopt;
                break;
            }
            if (i >= s.size() || !s[i].is_root()) return std::nullopt;
            root_at = i;
            ++i;
            if (i == s.size()) break;
            // s[i] is a child step of the root just entered.
            info.parent = VertexAddr({s.begin(), s.begin() + static_cast<std::ptrdiff_t>(*root_at) + 1});
            info.parent_order = t;
            t = child_order(t, s[i].index);
            ++info.depth;
            ++i;
        }
        info.order = t;
        return info;
    }

    VertexInfo resolve(const VertexAddr& addr) const {
        auto info = locate(addr);
        if (!info) throw invalid_address("'" + addr.text() + "' is not a vertex of " + name());
        return *info;
    }

    bool contains(const VertexAddr& addr) const { return locate(addr).has_value(); }

    /// The first k up-neighbors in construction order. Every vertex has
    /// either none or countably many.
    std::vector<VertexAddr> up_neighbors(const VertexAddr& addr, std::size_t k) const {
        auto info = resolve(addr);
        std::vector<VertexAddr> out;
        if (info.is_terminal()) return out;
        out.reserve(k);
        for (std::uint64_t n = 1; n <= k; ++n) out.push_back(child(addr, info.order, n));
        return out;
    }

    std::optional<VertexAddr> down_neighbor(const VertexAddr& addr) const { return resolve(addr).parent; }
    bool is_terminal(const VertexAddr& addr) const { return resolve(addr).is_terminal(); }
    bool is_initial(const VertexAddr& addr) const { return resolve(addr).is_initial(); }

    /// n-th up-neighbor of a vertex whose subtree has the given order.
    static VertexAddr child(const VertexAddr& addr, const Ordinal& order, std::uint64_t n) {
        VertexAddr c = addr.then(Step::child(n));
        return child_order(order, n).is_zero() ? c : c.then(Step::root());
    }

    /// Vertices from the component's initial vertex up to `addr`, inclusive.
    std::vector<VertexAddr> chain(const VertexAddr& addr) const {
        std::vector<VertexAddr> out;
        std::optional<VertexAddr> cur = addr;
        while (cur) {
            auto info = resolve(*cur);
            out.push_back(*cur);
            cur = info.parent;
        }
        return {out.rbegin(), out.rend()};
    }

    friend bool operator==(const Forest&, const Forest&) = default;

private:
    Forest(Ordinal o, bool copies) : order_(std::move(o)), copies_(copies) {}

    Ordinal order_;
    bool copies_ = false;
};

// --- derived forests ---------------------------------------------------------
//
// Every child of a vertex of order t leaves the derived forest at the same
// stage t: children of order s (t = s + 1, s not a limit) all become terminal
// at stage s, while children of order beta_n (t = lambda + 1) become terminal
// one by one, and only finitely many of them are terminal before stage
// lambda. Initial vertices are never removed. Hence a vertex survives in
// F^beta iff it is initial or beta < order(parent).

/// Stage at which the vertex is deleted; nullopt for initial vertices.
inline std::optional<Ordinal> removal_stage(const Forest& f, const VertexAddr& addr) {
    return f.resolve(addr).parent_order;
}

inline bool in_derived(const Forest& f, const Ordinal& beta, const VertexAddr& addr) {
    auto info = f.resolve(addr);
    return info.is_initial() || beta < *info.parent_order;
}

/// Terminal in F^beta: present there, and all of its up-neighbors are gone.
inline bool terminal_in_derived(const Forest& f, const Ordinal& beta, const VertexAddr& addr) {
    auto info = f.resolve(addr);
    return (info.is_initial() || beta < *info.parent_order) && info.order <= beta;
}

}  // namespace wstar
