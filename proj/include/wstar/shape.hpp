#pragma once

// Symbolic shapes of F_alpha and of its derived forests.
//
// A Shape is a Leaf or a Node whose children are listed as (shape,
// multiplicity) entries, multiplicity being finite or omega. Children of a
// vertex of order lambda + 1 (lambda a limit) are pairwise non-isomorphic,
// so they are kept as a lazy Family: component n is the derived tree
// (T_{beta_n})^stage for n >= first, generated on demand and memoized.

#include "wstar/forest.hpp"
#include "wstar/ordinal.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace wstar {

struct Multiplicity {
    std::uint64_t count = 1;
    bool omega = false;

    static Multiplicity finite(std::uint64_t n) { return {n, false}; }
    static Multiplicity infinite() { return {0, true}; }

    Multiplicity operator+(Multiplicity o) const {
        if (omega || o.omega) return infinite();
        return finite(detail::checked_add(count, o.count));
    }

    std::string text() const { return omega ? "w" : std::to_string(count); }

    friend std::strong_ordering operator<=>(const Multiplicity& a, const Multiplicity& b) {
        if (a.omega != b.omega) return a.omega ? std::strong_ordering::greater : std::strong_ordering::less;
        return a.omega ? std::strong_ordering::equal : a.count <=> b.count;
    }
    friend bool operator==(const Multiplicity& a, const Multiplicity& b) { return (a <=> b) == 0; }
};

class Shape;

/// Components (T_{fundamental(limit, n)})^stage for n >= first.
class Family {
public:
    Family(Ordinal limit, Ordinal stage, std::uint64_t first);

    const Ordinal& limit() const noexcept { return limit_; }
    const Ordinal& stage() const noexcept { return stage_; }
    std::uint64_t first() const noexcept { return first_; }

    Ordinal component_order(std::uint64_t n) const { return fundamental(limit_, n); }
    Shape component(std::uint64_t n) const;

    Family advanced() const { return Family(limit_, successor(stage_), first_); }
    Family starting_at(std::uint64_t first) const { return Family(limit_, stage_, first); }

    std::string text() const;

    friend std::strong_ordering operator<=>(const Family& a, const Family& b) {
        if (auto c = a.limit_ <=> b.limit_; c != 0) return c;
        if (auto c = a.stage_ <=> b.stage_; c != 0) return c;
        return a.first_ <=> b.first_;
    }
    friend bool operator==(const Family& a, const Family& b) { return (a <=> b) == 0; }

private:
    struct Memo;

    Ordinal limit_;
    Ordinal stage_;
    std::uint64_t first_;
    std::shared_ptr<Memo> memo_;
};

struct ShapeEntry;

/// Children of a node, or the components of a forest.
struct Children {
    std::vector<ShapeEntry> entries;
    std::optional<Family> tail;

    bool empty() const noexcept;
};

using ForestShape = Children;

class Shape {
public:
    Shape() = default;  // Leaf

    static Shape leaf() { return Shape{}; }
    static Shape node(Children children);

    bool is_leaf() const noexcept;
    const Children& children() const noexcept { return children_; }

    std::string text() const;

    friend std::strong_ordering operator<=>(const Shape& a, const Shape& b);
    friend bool operator==(const Shape& a, const Shape& b) { return (a <=> b) == 0; }

private:
    Children children_;
};

struct ShapeEntry {
    Shape child;
    Multiplicity multiplicity;
};

inline bool Children::empty() const noexcept { return entries.empty() && !tail; }
inline bool Shape::is_leaf() const noexcept { return children_.empty(); }

inline std::strong_ordering compare(const Children& a, const Children& b);

inline std::strong_ordering operator<=>(const Shape& a, const Shape& b) { return compare(a.children_, b.children_); }

inline bool operator==(const Children& a, const Children& b) { return compare(a, b) == 0; }

inline std::strong_ordering compare(const Children& a, const Children& b) {
    for (std::size_t i = 0; i < a.entries.size() && i < b.entries.size(); ++i) {
        if (auto c = a.entries[i].child <=> b.entries[i].child; c != 0) return c;
        if (auto c = a.entries[i].multiplicity <=> b.entries[i].multiplicity; c != 0) return c;
    }
    if (auto c = a.entries.size() <=> b.entries.size(); c != 0) return c;
    if (a.tail.has_value() != b.tail.has_value())
        return a.tail ? std::strong_ordering::greater : std::strong_ordering::less;
    return a.tail ? (*a.tail <=> *b.tail) : std::strong_ordering::equal;
}

/// Moves the leading leaves of the tail into an explicit entry, then merges
/// equal child shapes and sorts the entries.
inline void normalize(Children& c) {
    if (c.tail) {
        Family& fam = *c.tail;
        if (fam.stage() >= fam.limit()) {
            c.entries.push_back({Shape::leaf(), Multiplicity::infinite()});
            c.tail.reset();
        } else {
            std::uint64_t first = fam.first();
            std::uint64_t leaves = 0;
            while (fam.component_order(first) <= fam.stage()) {
                ++first;
                ++leaves;
            }
            if (leaves > 0) {
                c.entries.push_back({Shape::leaf(), Multiplicity::finite(leaves)});
                fam = fam.starting_at(first);
            }
        }
    }
    std::map<Shape, Multiplicity> merged;
    for (auto& e : c.entries) {
        auto [it, inserted] = merged.try_emplace(e.child, e.multiplicity);
        if (!inserted) it->second = it->second + e.multiplicity;
    }
    c.entries.clear();
    for (auto& [s, m] : merged) c.entries.push_back({s, m});
}

inline Shape Shape::node(Children children) {
    normalize(children);
    Shape s;
    s.children_ = std::move(children);
    return s;
}

/// (T_t)^beta for a tree order t, in closed form.
inline Shape derived_tree(const Ordinal& t, const Ordinal& beta) {
    if (t <= beta) return Shape::leaf();
    Ordinal below = predecessor(t);
    Children c;
    if (below.kind() != OrdinalKind::limit) {
        c.entries.push_back({derived_tree(below, beta), Multiplicity::infinite()});
    } else {
        c.tail = Family(below, beta, 1);
    }
    return Shape::node(std::move(c));
}

/// (F)^beta, componentwise; isolated vertices are never removed.
inline ForestShape derived_forest(const Forest& f, const Ordinal& beta) {
    Children c;
    if (f.is_tree()) {
        c.entries.push_back({derived_tree(f.order(), beta), Multiplicity::finite(1)});
    } else if (f.is_copies()) {
        c.entries.push_back({derived_tree(f.order(), beta), Multiplicity::infinite()});
    } else {
        c.tail = Family(f.order(), beta, 1);
    }
    normalize(c);
    return c;
}

inline ForestShape shape_of(const Forest& f) { return derived_forest(f, Ordinal{}); }
inline ForestShape shape_of(const Ordinal& alpha) { return shape_of(Forest::of(alpha)); }

namespace detail {

inline Children derive_children(const Children& in, bool can_remove_leaves);

}  // namespace detail

/// One derivation step: every infinite set of terminal vertices sharing a
/// down-neighbor is deleted. Vertices that become terminal during this step
/// are only candidates for the next one.
inline Shape derive_shape(const Shape& s) {
    if (s.is_leaf()) return s;
    return Shape::node(detail::derive_children(s.children(), true));
}

/// Forest version: components are derived separately and an isolated vertex
/// has no down-neighbor, so it is never deleted.
inline ForestShape derive_shape(const ForestShape& f) {
    Children c = detail::derive_children(f, false);
    normalize(c);
    return c;
}

namespace detail {

inline Children derive_children(const Children& in, bool can_remove_leaves) {
    bool infinitely_many_leaves = false;
    for (const auto& e : in.entries)
        if (e.child.is_leaf() && e.multiplicity.omega) infinitely_many_leaves = true;

    Children out;
    for (const auto& e : in.entries) {
        if (e.child.is_leaf()) {
            if (!(can_remove_leaves && infinitely_many_leaves)) out.entries.push_back(e);
        } else {
            out.entries.push_back({derive_shape(e.child), e.multiplicity});
        }
    }
    // A normalized tail holds no leaves; each component just moves one stage on.
    if (in.tail) out.tail = in.tail->advanced();
    return out;
}

}  // namespace detail

// --- Family ------------------------------------------------------------------

struct Family::Memo {
    std::mutex mutex;
    std::map<std::uint64_t, Shape> shapes;
};

inline Family::Family(Ordinal limit, Ordinal stage, std::uint64_t first)
    : limit_(std::move(limit)), stage_(std::move(stage)), first_(first), memo_(std::make_shared<Memo>()) {}

inline Shape Family::component(std::uint64_t n) const {
    if (n < first_) throw std::out_of_range("family component below its first index");
    {
        std::lock_guard lock(memo_->mutex);
        if (auto it = memo_->shapes.find(n); it != memo_->shapes.end()) return it->second;
    }
    Shape s = derived_tree(component_order(n), stage_);
    std::lock_guard lock(memo_->mutex);
    return memo_->shapes.try_emplace(n, std::move(s)).first->second;
}

inline std::string Family::text() const {
    return "<(T_b(" + to_text(limit_) + ",n))^" + to_text(stage_) + " : n>=" + std::to_string(first_) + ">";
}

// --- text --------------------------------------------------------------------

inline std::string to_text(const Children& c) {
    std::string out;
    for (const auto& e : c.entries) {
        if (!out.empty()) out += ",";
        out += e.child.text() + "x" + e.multiplicity.text();
    }
    if (c.tail) {
        if (!out.empty()) out += ",";
        out += c.tail->text();
    }
    return out;
}

inline std::string Shape::text() const { return is_leaf() ? "L" : "N[" + to_text(children_) + "]"; }

inline std::string forest_text(const ForestShape& f) { return "{" + to_text(f) + "}"; }

/// Symbolic check of the terminal up-neighbor dichotomy: a node with
/// infinitely many leaf children has nothing but leaves above it. Tails are
/// sampled up to `tail_sample` components, recursion is cut at `max_depth`.
inline bool all_terminal_when_infinitely_many(const Shape& s, std::size_t max_depth, std::uint64_t tail_sample = 4) {
    if (s.is_leaf() || max_depth == 0) return true;
    const Children& c = s.children();
    bool omega_leaves = false;
    for (const auto& e : c.entries)
        if (e.child.is_leaf() && e.multiplicity.omega) omega_leaves = true;
    if (omega_leaves && (c.entries.size() != 1 || c.tail)) return false;
    for (const auto& e : c.entries)
        if (!all_terminal_when_infinitely_many(e.child, max_depth - 1, tail_sample)) return false;
    if (c.tail)
        for (std::uint64_t n = c.tail->first(); n < c.tail->first() + tail_sample; ++n)
            if (!all_terminal_when_infinitely_many(c.tail->component(n), max_depth - 1, tail_sample)) return false;
    return true;
}

}  // namespace wstar
