#pragma once

// Injective, order-monotone labeling of the vertices of a forest by 1, 2, ...
//
// Vertices are ranked by (weight, depth, address), where the weight of an
// address is depth + sum of its child indices. Every weight class is finite,
// and a vertex above another has strictly larger depth and weight, so
// x < y implies label(x) < label(y). The label is 1 + rank.

#include "wstar/forest.hpp"
#include "wstar/numbers.hpp"
#include "wstar/ordinal.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace wstar {

class LabelMap {
public:
    /// Versioned identifier of the ranking rule.
    static constexpr const char* scheme = "weight-depth-lex/1";

    explicit LabelMap(Forest forest) : forest_(std::move(forest)), cache_(std::make_shared<Cache>()) {}

    const Forest& forest() const noexcept { return forest_; }

    Natural label(const VertexAddr& addr) const {
        auto info = forest_.locate(addr);
        if (!info) throw invalid_address("'" + addr.text() + "' is not a vertex of " + forest_.name());
        const auto [d, s] = depth_and_sum(addr);
        const std::uint64_t w = d + s;
        Natural rank = 0;
        for (std::uint64_t v = 0; v < w; ++v) rank += weight_total(v);
        for (std::uint64_t dd = 0; dd < d; ++dd) rank += forest_count(dd, w - dd);
        rank += lex_smaller(addr, d, s);
        return rank + 1;
    }

    /// The vertex with the given label; nullopt only when the forest is
    /// finite (F_0) and the label is out of range.
    std::optional<VertexAddr> unlabel(const Natural& n) const {
        if (n < 1) return std::nullopt;
        if (is_single_vertex()) return n == 1 ? std::optional(forest_.initial_vertex()) : std::nullopt;
        Natural r = n - 1;
        for (std::uint64_t w = 0;; ++w) {
            Natural total = weight_total(w);
            if (r >= total) {
                r -= total;
                continue;
            }
            for (std::uint64_t d = 0; d <= w; ++d) {
                Natural c = forest_count(d, w - d);
                if (r < c) return build(d, w - d, r);
                r -= c;
            }
            throw std::logic_error("unlabel: weight class bookkeeping is inconsistent");
        }
    }

    /// Labels along the path from the component's initial vertex to `addr`.
    std::vector<Natural> path_labels(const VertexAddr& addr) const {
        std::vector<Natural> out;
        for (const auto& a : forest_.chain(addr)) out.push_back(label(a));
        return out;
    }

    /// Same as path_labels, restricted to terminal vertices.
    std::vector<Natural> chain_labels(const VertexAddr& terminal) const {
        if (!forest_.is_terminal(terminal))
            throw std::domain_error("chain_labels: '" + terminal.text() + "' is not terminal");
        return path_labels(terminal);
    }

    /// Vertices with labels 1..count, in label order.
    std::vector<VertexAddr> first_vertices(std::size_t count) const {
        std::vector<VertexAddr> out;
        if (count == 0) return out;
        if (is_single_vertex()) return {forest_.initial_vertex()};
        for (std::uint64_t w = 0; out.size() < count; ++w)
            for (std::uint64_t d = 0; d <= w && out.size() < count; ++d) enumerate_forest(d, w - d, count, out);
        return out;
    }

private:
    struct Cache {
        std::mutex mutex;
        std::map<Ordinal, std::uint32_t> ids;
        std::unordered_map<std::uint64_t, Natural> tree_counts;
        std::unordered_map<std::uint64_t, Natural> forest_counts;
        std::unordered_map<std::uint64_t, Natural> weight_totals;
        std::vector<std::vector<Natural>> pascal;
    };

    bool is_single_vertex() const { return forest_.is_tree() && forest_.order().is_zero(); }

    std::pair<std::uint64_t, std::uint64_t> depth_and_sum(const VertexAddr& addr) const {
        std::uint64_t d = 0, s = 0;
        bool after_root = false;
        for (const auto& st : addr.steps()) {
            if (st.is_root()) {
                after_root = true;
                continue;
            }
            s += st.index;
            if (after_root) ++d;
            after_root = false;
        }
        return {d, s};
    }

    std::uint32_t order_id(const Ordinal& t) const {
        std::lock_guard lock(cache_->mutex);
        auto [it, inserted] = cache_->ids.try_emplace(t, static_cast<std::uint32_t>(cache_->ids.size()));
        return it->second;
    }

    static std::uint64_t key(std::uint64_t id, std::uint64_t d, std::uint64_t s) {
        if (d >= (1u << 20) || s >= (1u << 20)) throw std::overflow_error("label weight out of range");
        return (id << 40) | (d << 20) | s;
    }

    Natural binomial(std::uint64_t n, std::uint64_t k) const {
        if (k > n) return 0;
        std::lock_guard lock(cache_->mutex);
        auto& p = cache_->pascal;
        while (p.size() <= n) {
            std::vector<Natural> row(p.size() + 1, 1);
            for (std::size_t j = 1; j + 1 < row.size(); ++j) row[j] = p.back()[j - 1] + p.back()[j];
            p.push_back(std::move(row));
        }
        return p[n][k];
    }

    /// Addresses inside T_t of depth d whose child indices sum to s.
    Natural tree_count(const Ordinal& t, std::uint64_t d, std::uint64_t s) const {
        if (d == 0) return s == 0 ? 1 : 0;
        if (t.is_zero() || s < d) return 0;
        if (auto k = t.as_finite()) return d <= *k ? binomial(s - 1, d - 1) : Natural(0);

        const std::uint64_t k = key(order_id(t), d, s);
        {
            std::lock_guard lock(cache_->mutex);
            if (auto it = cache_->tree_counts.find(k); it != cache_->tree_counts.end()) return it->second;
        }
        Natural total = 0;
        for (std::uint64_t n = 1; n + (d - 1) <= s; ++n) total += tree_count(child_order(t, n), d - 1, s - n);
        std::lock_guard lock(cache_->mutex);
        return cache_->tree_counts.try_emplace(k, std::move(total)).first->second;
    }

    Natural forest_count(std::uint64_t d, std::uint64_t s) const {
        if (forest_.is_tree()) return tree_count(forest_.order(), d, s);
        if (s == 0) return 0;
        const std::uint64_t k = key(0, d, s);
        {
            std::lock_guard lock(cache_->mutex);
            if (auto it = cache_->forest_counts.find(k); it != cache_->forest_counts.end()) return it->second;
        }
        Natural total = 0;
        if (forest_.is_copies()) {
            // Components are identical: shift by one component index.
            total = forest_count(d, s - 1) + tree_count(forest_.order(), d, s - 1);
        } else {
            for (std::uint64_t c = 1; c <= s; ++c) total += tree_count(forest_.component_order(c), d, s - c);
        }
        std::lock_guard lock(cache_->mutex);
        return cache_->forest_counts.try_emplace(k, std::move(total)).first->second;
    }

    Natural weight_total(std::uint64_t w) const {
        {
            std::lock_guard lock(cache_->mutex);
            if (auto it = cache_->weight_totals.find(w); it != cache_->weight_totals.end()) return it->second;
        }
        Natural total = 0;
        for (std::uint64_t d = 0; d <= w; ++d) total += forest_count(d, w - d);
        std::lock_guard lock(cache_->mutex);
        return cache_->weight_totals.try_emplace(w, std::move(total)).first->second;
    }

    Natural lex_smaller(const VertexAddr& addr, std::uint64_t d, std::uint64_t s) const {
        const auto& st = addr.steps();
        std::size_t i = 0;
        Natural smaller = 0;
        Ordinal t = forest_.order();
        if (!forest_.is_tree()) {
            const std::uint64_t c = st[0].index;
            for (std::uint64_t m = 1; m < c; ++m) smaller += tree_count(forest_.component_order(m), d, s - m);
            t = forest_.component_order(c);
            s -= c;
            i = 1;
        }
        while (i < st.size()) {
            ++i;  // the root step of T_t
            if (i == st.size()) break;
            const std::uint64_t n = st[i].index;
            for (std::uint64_t m = 1; m < n; ++m) smaller += tree_count(child_order(t, m), d - 1, s - m);
            t = child_order(t, n);
            --d;
            s -= n;
            ++i;
        }
        return smaller;
    }

    VertexAddr build(std::uint64_t d, std::uint64_t s, Natural r) const {
        std::vector<Step> steps;
        Ordinal t = forest_.order();
        if (!forest_.is_tree()) {
            for (std::uint64_t c = 1;; ++c) {
                Natural cnt = tree_count(forest_.component_order(c), d, s - c);
                if (r < cnt) {
                    steps.push_back(Step::child(c));
                    t = forest_.component_order(c);
                    s -= c;
                    break;
                }
                r -= cnt;
            }
        }
        while (!t.is_zero()) {
            steps.push_back(Step::root());
            if (d == 0) break;
            for (std::uint64_t n = 1;; ++n) {
                Natural cnt = tree_count(child_order(t, n), d - 1, s - n);
                if (r < cnt) {
                    steps.push_back(Step::child(n));
                    t = child_order(t, n);
                    --d;
                    s -= n;
                    break;
                }
                r -= cnt;
            }
        }
        return VertexAddr(std::move(steps));
    }

    void enumerate_tree(const Ordinal& t, std::uint64_t d, std::uint64_t s, std::vector<Step>& prefix,
                        std::size_t limit, std::vector<VertexAddr>& out) const {
        if (out.size() >= limit || tree_count(t, d, s) == 0) return;
        if (t.is_zero()) {
            out.emplace_back(prefix);
            return;
        }
        prefix.push_back(Step::root());
        if (d == 0) {
            out.emplace_back(prefix);
        } else {
            for (std::uint64_t n = 1; n + (d - 1) <= s && out.size() < limit; ++n) {
                prefix.push_back(Step::child(n));
                enumerate_tree(child_order(t, n), d - 1, s - n, prefix, limit, out);
                prefix.pop_back();
            }
        }
        prefix.pop_back();
    }

    void enumerate_forest(std::uint64_t d, std::uint64_t s, std::size_t limit, std::vector<VertexAddr>& out) const {
        std::vector<Step> prefix;
        if (forest_.is_tree()) {
            enumerate_tree(forest_.order(), d, s, prefix, limit, out);
            return;
        }
        for (std::uint64_t c = 1; c <= s && out.size() < limit; ++c) {
            prefix.assign({Step::child(c)});
            enumerate_tree(forest_.component_order(c), d, s - c, prefix, limit, out);
        }
    }

    Forest forest_;
    std::shared_ptr<Cache> cache_;
};

inline Natural label(const Forest& f, const VertexAddr& addr) { return LabelMap(f).label(addr); }
inline std::optional<VertexAddr> unlabel(const Forest& f, const Natural& n) { return LabelMap(f).unlabel(n); }
inline std::vector<Natural> chain_labels(const Forest& f, const VertexAddr& terminal) {
    return LabelMap(f).chain_labels(terminal);
}

}  // namespace wstar
