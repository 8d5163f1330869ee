#pragma once

// Countable ordinals below epsilon_0 in Cantor normal form.

#include <cctype>
#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wstar {

enum class OrdinalKind { zero, successor, limit };

inline const char* to_string(OrdinalKind k) {
    switch (k) {
        case OrdinalKind::zero: return "zero";
        case OrdinalKind::successor: return "successor";
        case OrdinalKind::limit: return "limit";
    }
    return "?";
}

class ordinal_parse_error : public std::runtime_error {
public:
    ordinal_parse_error(const std::string& what, std::size_t pos)
        : std::runtime_error(what + " at position " + std::to_string(pos)), position_(pos) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// An ordinal alpha < epsilon_0, stored as w^e1*c1 + ... + w^ek*ck with
/// e1 > ... > ek and every ci >= 1. The empty sum is 0.
class Ordinal {
public:
    struct Term;

    Ordinal() = default;

    static Ordinal finite(std::uint64_t n);
    static Ordinal omega();
    static Ordinal omega_power(const Ordinal& exponent, std::uint64_t coefficient = 1);

    const std::vector<Term>& terms() const noexcept { return terms_; }

    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_finite() const noexcept;
    std::optional<std::uint64_t> as_finite() const;
    OrdinalKind kind() const noexcept;

    Ordinal operator+(const Ordinal& rhs) const;

    friend std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b);
    friend bool operator==(const Ordinal& a, const Ordinal& b) { return (a <=> b) == 0; }

private:
    std::vector<Term> terms_;
};

struct Ordinal::Term {
    Ordinal exponent;
    std::uint64_t coefficient = 1;
};

namespace detail {

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    if (a > std::numeric_limits<std::uint64_t>::max() - b)
        throw std::overflow_error("ordinal coefficient overflow");
    return a + b;
}

}  // namespace detail

inline std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b) {
    const auto& x = a.terms_;
    const auto& y = b.terms_;
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
        if (auto c = x[i].exponent <=> y[i].exponent; c != 0) return c;
        if (auto c = x[i].coefficient <=> y[i].coefficient; c != 0) return c;
    }
    return x.size() <=> y.size();
}

inline Ordinal Ordinal::finite(std::uint64_t n) {
    Ordinal r;
    if (n > 0) r.terms_.push_back(Term{Ordinal{}, n});
    return r;
}

inline Ordinal Ordinal::omega() { return omega_power(finite(1)); }

inline Ordinal Ordinal::omega_power(const Ordinal& exponent, std::uint64_t coefficient) {
    Ordinal r;
    if (coefficient > 0) r.terms_.push_back(Term{exponent, coefficient});
    return r;
}

inline bool Ordinal::is_finite() const noexcept {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].exponent.is_zero());
}

inline std::optional<std::uint64_t> Ordinal::as_finite() const {
    if (terms_.empty()) return 0;
    if (is_finite()) return terms_[0].coefficient;
    return std::nullopt;
}

inline OrdinalKind Ordinal::kind() const noexcept {
    if (terms_.empty()) return OrdinalKind::zero;
    return terms_.back().exponent.is_zero() ? OrdinalKind::successor : OrdinalKind::limit;
}

inline Ordinal Ordinal::operator+(const Ordinal& rhs) const {
    if (rhs.is_zero()) return *this;
    const Ordinal& lead = rhs.terms_.front().exponent;
    Ordinal r;
    std::uint64_t carried = 0;
    for (const auto& t : terms_) {
        auto c = t.exponent <=> lead;
        if (c > 0) {
            r.terms_.push_back(t);
        } else {
            if (c == 0) carried = t.coefficient;
            break;
        }
    }
    bool first = true;
    for (const auto& t : rhs.terms_) {
        Term copy = t;
        if (first) copy.coefficient = detail::checked_add(copy.coefficient, carried);
        first = false;
        r.terms_.push_back(std::move(copy));
    }
    return r;
}

inline OrdinalKind classify(const Ordinal& a) { return a.kind(); }

inline Ordinal successor(const Ordinal& a) { return a + Ordinal::finite(1); }

inline Ordinal predecessor(const Ordinal& a) {
    if (a.kind() != OrdinalKind::successor)
        throw std::domain_error("predecessor: ordinal is not a successor");
    Ordinal r;
    const auto& t = a.terms();
    for (std::size_t i = 0; i + 1 < t.size(); ++i) r = r + Ordinal::omega_power(t[i].exponent, t[i].coefficient);
    return r + Ordinal::finite(t.back().coefficient - 1);
}

/// n-th element (n >= 1) of the canonical fundamental sequence of a limit
/// ordinal. Every element is a successor, and the sequence increases
/// strictly to `a`.
inline Ordinal fundamental(const Ordinal& a, std::uint64_t n) {
    if (a.kind() != OrdinalKind::limit) throw std::domain_error("fundamental: ordinal is not a limit");
    if (n == 0) throw std::domain_error("fundamental: index must be >= 1");

    const auto& t = a.terms();
    Ordinal prefix;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) prefix = prefix + Ordinal::omega_power(t[i].exponent, t[i].coefficient);
    const auto& [e, c] = t.back();
    prefix = prefix + Ordinal::omega_power(e, c - 1);

    if (e == Ordinal::finite(1)) return prefix + Ordinal::finite(n);
    if (e.kind() == OrdinalKind::successor)
        return prefix + Ordinal::omega_power(predecessor(e), n) + Ordinal::finite(1);
    return prefix + Ordinal::omega_power(fundamental(e, n)) + Ordinal::finite(1);
}

// --- text form -------------------------------------------------------------

inline std::string to_text(const Ordinal& a);

namespace detail {

inline std::string exponent_text(const Ordinal& e) {
    if (auto f = e.as_finite()) return std::to_string(*f);
    if (e == Ordinal::omega()) return "w";
    return "(" + to_text(e) + ")";
}

class OrdinalParser {
public:
    explicit OrdinalParser(std::string_view text) : s_(text) {}

    Ordinal parse_all(std::vector<std::string>& notes) {
        notes_ = &notes;
        Ordinal r = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
        return r;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ordinal_parse_error(msg, pos_); }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    std::uint64_t integer() {
        skip_ws();
        if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("expected integer");
        std::uint64_t v = 0;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            auto d = static_cast<std::uint64_t>(s_[pos_] - '0');
            if (v > (std::numeric_limits<std::uint64_t>::max() - d) / 10) fail("integer too large");
            v = v * 10 + d;
            ++pos_;
        }
        return v;
    }

    Ordinal expr() {
        Ordinal sum = term();
        Ordinal last = sum;
        while (accept('+')) {
            std::size_t at = pos_;
            Ordinal t = term();
            if (!t.is_zero() && !last.is_zero() && t.terms().front().exponent > last.terms().back().exponent)
                notes_->push_back("term at position " + std::to_string(at) +
                                  " is larger than its predecessor; ordinal addition absorbs the smaller terms");
            sum = sum + t;
            if (!t.is_zero()) last = t;
        }
        return sum;
    }

    Ordinal term() {
        skip_ws();
        if (accept('w')) {
            Ordinal e = Ordinal::finite(1);
            if (accept('^')) e = atom();
            std::uint64_t c = 1;
            if (accept('*')) {
                skip_ws();
                const std::size_t at = pos_;
                c = integer();
                if (c == 0) {
                    pos_ = at;
                    fail("coefficient must be >= 1");
                }
            }
            return Ordinal::omega_power(e, c);
        }
        skip_ws();
        if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) return Ordinal::finite(integer());
        fail("expected term");
    }

    Ordinal atom() {
        if (accept('(')) {
            Ordinal e = expr();
            if (!accept(')')) fail("expected ')'");
            return e;
        }
        if (accept('w')) return Ordinal::omega();
        return Ordinal::finite(integer());
    }

    std::string_view s_;
    std::size_t pos_ = 0;
    std::vector<std::string>* notes_ = nullptr;
};

}  // namespace detail

inline std::string to_text(const Ordinal& a) {
    if (a.is_zero()) return "0";
    std::string out;
    for (const auto& [e, c] : a.terms()) {
        if (!out.empty()) out += '+';
        if (e.is_zero()) {
            out += std::to_string(c);
            continue;
        }
        out += 'w';
        if (e != Ordinal::finite(1)) out += "^" + detail::exponent_text(e);
        if (c > 1) out += "*" + std::to_string(c);
    }
    return out;
}

struct OrdinalParse {
    Ordinal value;
    std::vector<std::string> notes;
};

/// Parses `expr := term ('+' term)*`, `term := 'w' ('^' atom)? ('*' int)? | int`,
/// `atom := '(' expr ')' | 'w' | int`. Out-of-order terms are summed with
/// ordinal addition and reported in `notes`.
inline OrdinalParse parse_ordinal_with_notes(std::string_view text) {
    OrdinalParse r;
    r.value = detail::OrdinalParser(text).parse_all(r.notes);
    return r;
}

inline Ordinal parse_ordinal(std::string_view text) { return parse_ordinal_with_notes(text).value; }

}  // namespace wstar
