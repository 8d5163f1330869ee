#pragma once

// Finitely supported exact-rational vectors in l1, read as the dual of c0
// with the unit-vector basis. In that setting the weak* cluster point z** of
// the partial sums of the basis is the all-ones functional, and bounded
// sequences converge weak* iff they converge coordinatewise.

#include "wstar/numbers.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wstar {

class RationalVec {
public:
    using Coords = std::map<Natural, Rational>;

    RationalVec() = default;

    static RationalVec unit(const Natural& index, const Rational& value = 1) {
        RationalVec v;
        v.set(index, value);
        return v;
    }

    const Coords& coords() const noexcept { return coords_; }
    bool empty() const noexcept { return coords_.empty(); }
    std::size_t support_size() const noexcept { return coords_.size(); }

    Rational operator[](const Natural& index) const {
        auto it = coords_.find(index);
        return it == coords_.end() ? Rational(0) : it->second;
    }

    void set(const Natural& index, const Rational& value) {
        if (index < 1) throw std::invalid_argument("coordinate indices start at 1");
        if (value == 0) {
            coords_.erase(index);
        } else {
            coords_[index] = value;
        }
    }

    void add(const Natural& index, const Rational& value) { set(index, (*this)[index] + value); }

    std::vector<Natural> support() const {
        std::vector<Natural> out;
        out.reserve(coords_.size());
        for (const auto& [i, v] : coords_) out.push_back(i);
        return out;
    }

    RationalVec& operator+=(const RationalVec& o) {
        for (const auto& [i, v] : o.coords_) add(i, v);
        return *this;
    }
    RationalVec& operator-=(const RationalVec& o) {
        for (const auto& [i, v] : o.coords_) add(i, -v);
        return *this;
    }
    RationalVec& operator*=(const Rational& s) {
        if (s == 0) {
            coords_.clear();
        } else {
            for (auto& [i, v] : coords_) v *= s;
        }
        return *this;
    }

    friend RationalVec operator+(RationalVec a, const RationalVec& b) { return a += b; }
    friend RationalVec operator-(RationalVec a, const RationalVec& b) { return a -= b; }
    friend RationalVec operator*(const Rational& s, RationalVec a) { return a *= s; }

    friend bool operator==(const RationalVec& a, const RationalVec& b) { return a.coords_ == b.coords_; }

    /// Support-lexicographic order: compare index lists first, then values.
    friend bool operator<(const RationalVec& a, const RationalVec& b) {
        auto x = a.coords_.begin(), y = b.coords_.begin();
        for (; x != a.coords_.end() && y != b.coords_.end(); ++x, ++y)
            if (x->first != y->first) return x->first < y->first;
        if (x != a.coords_.end() || y != b.coords_.end()) return y != b.coords_.end();
        for (x = a.coords_.begin(), y = b.coords_.begin(); x != a.coords_.end(); ++x, ++y)
            if (x->second != y->second) return x->second < y->second;
        return false;
    }

    std::string text() const {
        std::ostringstream os;
        bool first = true;
        for (const auto& [i, v] : coords_) {
            if (!first) os << " + ";
            first = false;
            os << to_text(v) << "*e" << i;
        }
        if (first) os << "0";
        return os.str();
    }

private:
    Coords coords_;
};

inline Rational l1_norm(const RationalVec& w) {
    Rational s = 0;
    for (const auto& [i, v] : w.coords()) s += abs(v);
    return s;
}

/// Coordinate sum: the action of z** on w.
inline Rational zss(const RationalVec& w) {
    Rational s = 0;
    for (const auto& [i, v] : w.coords()) s += v;
    return s;
}

/// w -> constant * zss(w) + sum_j corrections[j] * w_j.
struct Functional {
    Rational constant = 0;
    std::map<Natural, Rational> corrections;

    static Functional zss() { return Functional{1, {}}; }
    static Functional coordinate(const Natural& m) { return Functional{0, {{m, 1}}}; }

    Rational operator()(const RationalVec& w) const {
        Rational r = constant * wstar::zss(w);
        for (const auto& [j, c] : corrections) r += c * w[j];
        return r;
    }

    /// |f(w)| <= norm_bound() * ||w||_1.
    Rational norm_bound() const {
        Rational m = 0;
        for (const auto& [j, c] : corrections)
            if (abs(c) > m) m = abs(c);
        return abs(constant) + m;
    }
};

inline Rational apply(const Functional& f, const RationalVec& w) { return f(w); }

inline RationalVec convex_combine(const std::vector<std::pair<Rational, RationalVec>>& weights) {
    Rational total = 0;
    RationalVec out;
    for (const auto& [a, w] : weights) {
        if (a < 0) throw std::domain_error("convex_combine: negative weight " + to_text(a));
        total += a;
        out += a * w;
    }
    if (total != 1) throw std::domain_error("convex_combine: weights sum to " + to_text(total) + ", not 1");
    return out;
}

struct VecSequence {
    std::function<RationalVec(std::uint64_t)> generator;  // i >= 1
    Rational declared_bound = 0;
    std::optional<RationalVec> declared_limit;
};

struct ConvergenceReport {
    bool pass = true;
    /// Smallest index from which every checked coordinate equals its limit.
    std::uint64_t settled_from = 1;
    std::optional<Natural> failing_coordinate;
    std::optional<std::uint64_t> bound_violation_at;
    Rational max_norm = 0;
    std::string detail;
};

/// Eventual exactness on coordinates 1..coords over terms 1..terms, plus the
/// declared l1 bound on every term.
inline ConvergenceReport check_coordwise_convergence(const VecSequence& s, std::uint64_t coords, std::uint64_t terms) {
    if (!s.declared_limit) throw std::invalid_argument("check_coordwise_convergence: no declared limit");
    if (coords < 1 || terms < 1) throw std::invalid_argument("check_coordwise_convergence: bounds must be >= 1");
    const RationalVec& limit = *s.declared_limit;
    ConvergenceReport r;

    std::vector<RationalVec> xs;
    xs.reserve(terms);
    for (std::uint64_t i = 1; i <= terms; ++i) {
        xs.push_back(s.generator(i));
        Rational n = l1_norm(xs.back());
        if (n > r.max_norm) r.max_norm = n;
        if (!r.bound_violation_at && n > s.declared_bound) r.bound_violation_at = i;
    }
    if (r.bound_violation_at) {
        r.pass = false;
        r.detail = "bound " + to_text(s.declared_bound) + " violated at i=" + std::to_string(*r.bound_violation_at);
        return r;
    }

    for (std::uint64_t jj = 1; jj <= coords; ++jj) {
        const Natural j(jj);
        const Rational target = limit[j];
        std::uint64_t from = terms + 1;
        while (from > 1 && xs[from - 2][j] == target) --from;
        if (from > terms) {
            r.pass = false;
            r.failing_coordinate = j;
            r.detail = "coordinate " + j.str() + " is " + to_text(xs.back()[j]) + " at i=" + std::to_string(terms) +
                       ", limit " + to_text(target);
            return r;
        }
        if (from > r.settled_from) r.settled_from = from;
    }
    r.detail = "coordinates 1.." + std::to_string(coords) + " exact from i=" + std::to_string(r.settled_from) +
               ", max norm " + to_text(r.max_norm);
    return r;
}

// --- JSON ----------------------------------------------------------------------

inline nlohmann::ordered_json to_json(const RationalVec& v) {
    nlohmann::ordered_json coords = nlohmann::ordered_json::object();
    for (const auto& [i, q] : v.coords()) coords[i.str()] = to_text(q);
    return {{"coords", coords}};
}

/// Accepts {"coords": {...}} or the bare coordinate object.
inline RationalVec vec_from_json(const nlohmann::json& j) {
    const nlohmann::json& c = j.contains("coords") ? j.at("coords") : j;
    if (!c.is_object()) throw std::invalid_argument("vector JSON must be an object of index -> \"num/den\"");
    RationalVec v;
    for (const auto& [key, val] : c.items()) {
        Natural idx;
        try {
            idx = Natural(key);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad coordinate index '" + key + "'");
        }
        if (idx < 1) throw std::invalid_argument("bad coordinate index '" + key + "'");
        Rational q = val.is_string() ? parse_rational(val.get<std::string>())
                                     : val.is_number_integer() ? Rational(val.get<long long>())
                                                               : throw std::invalid_argument("bad coordinate value");
        v.add(idx, q);
    }
    return v;
}

inline nlohmann::ordered_json to_json(const Functional& f) {
    nlohmann::ordered_json corr = nlohmann::ordered_json::object();
    for (const auto& [j, c] : f.corrections) corr[j.str()] = to_text(c);
    return {{"constant", to_text(f.constant)}, {"corrections", corr}};
}

}  // namespace wstar
