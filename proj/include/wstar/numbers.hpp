#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace wstar {

/// Vertex labels and basis indices. Labels of transfinite forests outgrow
/// 64 bits quickly, so they are unbounded.
using Natural = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// "num/den" with the denominator always present.
inline std::string to_text(const Rational& q) {
    return numerator(q).str() + "/" + denominator(q).str();
}

/// Accepts "num/den" or a bare integer.
inline Rational parse_rational(std::string_view text) {
    auto bad = [&] { return std::invalid_argument("malformed rational '" + std::string(text) + "'"); };
    auto integer = [&](std::string_view s, bool allow_sign) {
        if (s.empty()) throw bad();
        std::size_t i = 0;
        if (allow_sign && (s[0] == '-' || s[0] == '+')) i = 1;
        if (i == s.size()) throw bad();
        for (std::size_t j = i; j < s.size(); ++j)
            if (s[j] < '0' || s[j] > '9') throw bad();
        return Natural(std::string(s));
    };
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(integer(text, true));
    Natural num = integer(text.substr(0, slash), true);
    Natural den = integer(text.substr(slash + 1), false);
    if (den == 0) throw bad();
    return Rational(num, den);
}

}  // namespace wstar
