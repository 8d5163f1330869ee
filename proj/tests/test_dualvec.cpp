#include "wstar/dualvec.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace wstar;

namespace {

RationalVec e(unsigned i, Rational q = 1) { return RationalVec::unit(i, q); }

RationalVec random_vec(std::mt19937_64& rng) {
    RationalVec v;
    const int k = static_cast<int>(rng() % 6);
    for (int i = 0; i < k; ++i) {
        const long long num = static_cast<long long>(rng() % 41) - 20;
        const long long den = 1 + static_cast<long long>(rng() % 9);
        v.add(1 + rng() % 30, Rational(num, den));
    }
    return v;
}

}  // namespace

TEST(RationalVec, NoExplicitZeros) {
    RationalVec v = e(3, 2);
    v.add(3, -2);
    EXPECT_TRUE(v.empty());
    v.set(4, 0);
    EXPECT_TRUE(v.empty());
    EXPECT_THROW(v.set(0, 1), std::invalid_argument);
    RationalVec w = e(1) + e(2) - e(1);
    EXPECT_EQ(w.support(), std::vector<Natural>{2});
    EXPECT_EQ((Rational(0) * e(5)).support_size(), 0u);
}

TEST(RationalVec, NormsOfExamples) {
    RationalVec a = e(1) + e(3) + e(7, 3);
    EXPECT_EQ(zss(a), 5);
    EXPECT_EQ(l1_norm(a), 5);
    RationalVec b = e(1) - e(2);
    EXPECT_EQ(zss(b), 0);
    EXPECT_EQ(l1_norm(b), 2);
}

TEST(RationalVec, CoordinateSumIsBoundedByNorm) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 1000; ++i) {
        RationalVec v = random_vec(rng);
        EXPECT_LE(abs(zss(v)), l1_norm(v));
        bool nonneg = true;
        for (const auto& [j, q] : v.coords()) nonneg = nonneg && q > 0;
        if (nonneg) EXPECT_EQ(zss(v), l1_norm(v));
    }
}

TEST(RationalVec, SupportLexOrderIsStrictWeak) {
    std::mt19937_64 rng(4);
    std::vector<RationalVec> vs;
    for (int i = 0; i < 200; ++i) vs.push_back(random_vec(rng));
    for (const auto& a : vs) {
        EXPECT_FALSE(a < a);
        for (const auto& b : vs) {
            if (a < b) EXPECT_FALSE(b < a);
            if (!(a < b) && !(b < a)) EXPECT_EQ(a, b);
        }
    }
    EXPECT_LT(e(1), e(1) + e(2));
    EXPECT_LT(e(1) + e(2), e(1) + e(3));
    EXPECT_LT(e(2, 1), e(2, 2));
}

TEST(RationalVec, TextAndJson) {
    RationalVec v = e(1) + e(7, Rational(3, 2));
    EXPECT_EQ(v.text(), "1/1*e1 + 3/2*e7");
    EXPECT_EQ(RationalVec{}.text(), "0");
    auto j = to_json(v);
    EXPECT_EQ(j["coords"]["7"], "3/2");
    EXPECT_EQ(vec_from_json(nlohmann::json::parse(j.dump())), v);
    EXPECT_EQ(vec_from_json(nlohmann::json::parse(R"({"1":"1/1"})")), e(1));
    EXPECT_EQ(vec_from_json(nlohmann::json::parse(R"({"2":3})")), e(2, 3));
    EXPECT_THROW(vec_from_json(nlohmann::json::parse(R"({"0":"1/1"})")), std::invalid_argument);
    EXPECT_THROW(vec_from_json(nlohmann::json::parse(R"({"1":"1/0"})")), std::invalid_argument);
}

TEST(Functional, ActionAndBound) {
    Functional f{-1, {{2, 1}, {5, 2}}};
    RationalVec w = e(1) + e(2, 3) + e(5);
    EXPECT_EQ(f(w), -5 + 3 + 2);
    EXPECT_EQ(apply(Functional::zss(), w), 5);
    EXPECT_EQ(Functional::coordinate(2)(w), 3);
    std::mt19937_64 rng(5);
    for (int i = 0; i < 1000; ++i) {
        Functional g{Rational(static_cast<long long>(rng() % 7) - 3, 2), {}};
        for (int k = 0; k < 3; ++k) g.corrections[1 + rng() % 30] = Rational(static_cast<long long>(rng() % 9) - 4, 3);
        RationalVec v = random_vec(rng);
        EXPECT_LE(abs(g(v)), g.norm_bound() * l1_norm(v));
    }
}

TEST(ConvexCombine, Examples) {
    EXPECT_EQ(convex_combine({{Rational(1, 2), e(1, 2)}, {Rational(1, 2), e(3, 2)}}), e(1) + e(3));
    RationalVec w = e(2, 5) + e(9, Rational(-1, 3));
    EXPECT_EQ(convex_combine({{1, w}}), w);
    EXPECT_EQ(convex_combine({{Rational(1, 4), w}, {Rational(1, 4), w}, {Rational(1, 2), w}}), w);
}

TEST(ConvexCombine, Errors) {
    EXPECT_THROW(convex_combine({{Rational(1, 2), e(1)}}), std::domain_error);
    EXPECT_THROW(convex_combine({{Rational(3, 2), e(1)}, {Rational(-1, 2), e(2)}}), std::domain_error);
    EXPECT_THROW(convex_combine({}), std::domain_error);
}

TEST(Convergence, ConstantSequence) {
    RationalVec w = e(1) + e(4, 2);
    VecSequence s{[w](std::uint64_t) { return w; }, 3, w};
    auto r = check_coordwise_convergence(s, 64, 256);
    EXPECT_TRUE(r.pass) << r.detail;
    EXPECT_EQ(r.settled_from, 1u);
}

TEST(Convergence, BoundViolation) {
    VecSequence s{[](std::uint64_t i) { return e(1, Rational(static_cast<long long>(i))); }, 10, RationalVec{}};
    auto r = check_coordwise_convergence(s, 64, 256);
    EXPECT_FALSE(r.pass);
    ASSERT_TRUE(r.bound_violation_at.has_value());
    EXPECT_EQ(*r.bound_violation_at, 11u);
}

TEST(Convergence, MovingMassConvergesToZero) {
    // e_i -> 0 coordinatewise; coordinate j settles once i > j.
    VecSequence s{[](std::uint64_t i) { return e(static_cast<unsigned>(i)); }, 1, RationalVec{}};
    auto r = check_coordwise_convergence(s, 64, 256);
    EXPECT_TRUE(r.pass) << r.detail;
    EXPECT_EQ(r.settled_from, 65u);
    EXPECT_FALSE(check_coordwise_convergence(s, 300, 256).pass);
}

TEST(Convergence, WrongLimitIsReported) {
    VecSequence s{[](std::uint64_t) { return e(2); }, 1, e(3)};
    auto r = check_coordwise_convergence(s, 8, 16);
    EXPECT_FALSE(r.pass);
    ASSERT_TRUE(r.failing_coordinate.has_value());
    EXPECT_EQ(*r.failing_coordinate, 2);
    VecSequence none{[](std::uint64_t) { return e(2); }, 1, std::nullopt};
    EXPECT_THROW(check_coordwise_convergence(none, 8, 16), std::invalid_argument);
}
