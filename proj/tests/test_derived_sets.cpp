#include "wstar/derived_sets.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace wstar;

namespace {

VertexAddr A(const char* s) { return VertexAddr::parse(s); }
Ordinal o(const char* s) { return parse_ordinal(s); }
RationalVec e(unsigned i, Rational q = 1) { return RationalVec::unit(i, q); }

std::vector<VertexAddr> terminals(const LabelMap& lm, std::size_t n) {
    std::vector<VertexAddr> out;
    for (const auto& v : lm.first_vertices(n))
        if (lm.forest().is_terminal(v)) out.push_back(v);
    return out;
}

}  // namespace

TEST(PathVector, ChainFormula) {
    EXPECT_EQ(vector_of_chain({1}), e(1));
    EXPECT_EQ(vector_of_chain({1, 2}), e(1) + e(2));
    RationalVec v = vector_of_chain({1, 3, 7});
    EXPECT_EQ(v, e(1) + e(3) + e(7, 3));
    EXPECT_EQ(l1_norm(v), 5);
}

TEST(PathVector, Examples) {
    LabelMap f0(Forest::of(Ordinal{}));
    EXPECT_EQ(path_vector(f0, A("")).vec, e(1));
    LabelMap f1(Forest::of(Ordinal::finite(1)));
    auto p = path_vector(f1, A("R.1"));
    EXPECT_EQ(p.chain, (std::vector<Natural>{1, 2}));
    EXPECT_EQ(p.vec, e(1) + e(2));
}

TEST(PathVector, CoefficientsArePositiveAndNondecreasing) {
    for (const char* s : {"2", "3", "w", "w+1", "w*2", "w^2"}) {
        LabelMap lm(Forest::parse(s));
        for (const auto& v : terminals(lm, 400)) {
            auto p = path_vector(lm, v);
            Rational prev = 0;
            for (const auto& n : p.chain) {
                const Rational c = p.vec[n];
                EXPECT_GT(c, 0);
                EXPECT_EQ(denominator(c), 1);
                EXPECT_LE(prev, c) << s << " " << v.text();
                prev = c;
            }
            EXPECT_EQ(p.vec.support(), p.chain);
        }
    }
}

TEST(Shortening, BetaZeroIsThePathVector) {
    for (const char* s : {"1", "3", "w+1", "w*2"}) {
        LabelMap lm(Forest::parse(s));
        for (const auto& v : terminals(lm, 300)) EXPECT_EQ(shortened_vector(lm, Ordinal{}, v), path_vector(lm, v).vec);
    }
}

TEST(Shortening, FOneAtOneKeepsTheRoot) {
    LabelMap lm(Forest::of(Ordinal::finite(1)));
    for (const auto& v : terminals(lm, 50)) EXPECT_EQ(shortened_vector(lm, Ordinal::finite(1), v), e(1));
}

TEST(Shortening, FiniteForestsKeepThePrefixInsideTheSmallerForest) {
    for (std::uint64_t n = 1; n <= 5; ++n) {
        const Forest f = Forest::of(Ordinal::finite(n));
        LabelMap lm(f);
        for (const auto& v : terminals(lm, 300))
            for (std::uint64_t k = 0; k <= n; ++k) {
                const VertexAddr u = shortened_vertex(f, Ordinal::finite(k), v);
                EXPECT_EQ(f.resolve(u).depth, n - k);
                EXPECT_TRUE(u.is_prefix_of(v));
                auto full = lm.path_labels(v);
                auto kept = lm.path_labels(u);
                EXPECT_TRUE(std::equal(kept.begin(), kept.end(), full.begin()));
            }
    }
}

TEST(Emit, SmallExamples) {
    LabelMap f0(Forest::of(Ordinal{}));
    auto x0 = emit_X(f0, Ordinal{}, 5);
    ASSERT_EQ(x0.size(), 1u);
    EXPECT_EQ(x0[0].vec, e(1));

    LabelMap f1(Forest::of(Ordinal::finite(1)));
    for (unsigned n : {1u, 2u, 5u, 40u}) {
        // Oracle: the leaves R.i with label <= n.
        std::size_t expected = 0;
        for (std::uint64_t i = 1; i <= n; ++i) expected += f1.label(A(("R." + std::to_string(i)).c_str())) <= n;
        auto xs = emit_X(f1, Ordinal{}, n);
        EXPECT_EQ(xs.size(), expected);
        for (std::size_t i = 1; i < xs.size(); ++i) EXPECT_LT(xs[i - 1].vec, xs[i].vec);
        for (const auto& p : xs) EXPECT_EQ(p.vec, path_vector(f1, p.vertex).vec);
    }
    EXPECT_EQ(emit_X(f1, Ordinal{}, 5).size(), 4u);
}

TEST(Emit, BetaZeroEqualsPathVectors) {
    for (const char* s : {"2", "w+1"}) {
        LabelMap lm(Forest::parse(s));
        auto xs = emit_X(lm, Ordinal{}, 120);
        std::vector<RationalVec> direct;
        for (const auto& v : terminals(lm, 120)) direct.push_back(path_vector(lm, v).vec);
        std::sort(direct.begin(), direct.end());
        ASSERT_EQ(xs.size(), direct.size()) << s;
        for (std::size_t i = 0; i < xs.size(); ++i) EXPECT_EQ(xs[i].vec, direct[i]);
    }
}

TEST(Emit, NextShorteningHasNewVectors) {
    for (const char* s : {"1", "2", "3", "w", "w+1", "w*2"}) {
        const Forest f = Forest::parse(s);
        LabelMap lm(f);
        std::vector<Ordinal> betas;
        for (std::uint64_t b = 0; b < 3; ++b)
            if (Ordinal::finite(b) < f.order()) betas.push_back(Ordinal::finite(b));
        for (const auto& beta : betas) {
            auto w = nontrivial_difference_witness(lm, beta, 4096);
            ASSERT_TRUE(w.has_value()) << s << " beta=" << to_text(beta);
            EXPECT_TRUE(in_X_beta(lm, successor(beta), w->vec));
            for (std::uint64_t g = 0; Ordinal::finite(g) <= beta; ++g)
                EXPECT_FALSE(in_X_beta(lm, Ordinal::finite(g), w->vec)) << s;
            bool listed = false;
            for (const auto& p : emit_X(lm, successor(beta), Natural(lm.label(w->vertex)))) listed = listed || p.vec == w->vec;
            EXPECT_TRUE(listed);
        }
    }
}

TEST(Membership, Examples) {
    for (const char* s : {"1", "2", "w+1"}) {
        LabelMap lm(Forest::parse(s));
        for (const auto& v : terminals(lm, 200)) {
            const RationalVec p = path_vector(lm, v).vec;
            EXPECT_TRUE(in_X_beta(lm, Ordinal{}, p));
            EXPECT_FALSE(in_X_beta(lm, Ordinal{}, Rational(2) * p));
        }
    }
    LabelMap f1(Forest::of(Ordinal::finite(1)));
    EXPECT_TRUE(in_X_beta(f1, Ordinal::finite(1), e(1)));
    EXPECT_FALSE(in_X_beta(f1, Ordinal{}, e(1)));
    EXPECT_FALSE(in_X_beta(f1, Ordinal{}, RationalVec{}));
    EXPECT_FALSE(in_X_beta(f1, Ordinal{}, e(1) + e(2, Rational(1, 2))));
}

TEST(Membership, ShortenedVectorsAreMembers) {
    for (const char* s : {"2", "3", "w+1", "w*2"}) {
        LabelMap lm(Forest::parse(s));
        for (std::uint64_t b = 0; b <= 3; ++b)
            for (const auto& v : terminals(lm, 250)) EXPECT_TRUE(in_X_beta(lm, Ordinal::finite(b), shortened_vector(lm, Ordinal::finite(b), v)));
    }
}

TEST(Witness, RootOfFOne) {
    LabelMap lm(Forest::of(Ordinal::finite(1)));
    auto s = witness_sequence(lm, Ordinal{}, A("R"));
    EXPECT_EQ(s.declared_bound, 2);
    EXPECT_EQ(*s.declared_limit, e(1));
    for (std::uint64_t i = 1; i <= 10; ++i) {
        const unsigned leaf = static_cast<unsigned>(lm.label(A(("R." + std::to_string(i)).c_str())));
        EXPECT_EQ(s.generator(i), e(1) + e(leaf));
    }
    auto r = check_coordwise_convergence(s, 64, 256);
    EXPECT_TRUE(r.pass) << r.detail;
}

TEST(Witness, ConstantWhenAlreadyInside) {
    LabelMap lm(Forest::of(Ordinal::finite(2)));
    const VertexAddr leaf = A("R.1.R.1");
    auto s = witness_sequence(lm, Ordinal{}, leaf);
    EXPECT_EQ(s.generator(1), s.generator(99));
    EXPECT_TRUE(check_coordwise_convergence(s, 64, 256).pass);
    EXPECT_THROW(witness_sequence(lm, Ordinal{}, A("R")), std::domain_error);
}

TEST(Witness, ElementOfXOne) {
    LabelMap lm(Forest::of(Ordinal::finite(2)));
    const VertexAddr u = A("R.3.R");
    ASSERT_TRUE(in_X_beta(lm, Ordinal::finite(1), vertex_vector(lm, u)));
    auto s = witness_sequence(lm, Ordinal{}, u);
    for (std::uint64_t i = 1; i <= 20; ++i) EXPECT_TRUE(in_X_beta(lm, Ordinal{}, s.generator(i)));
    auto r = check_coordwise_convergence(s, 64, 256);
    EXPECT_TRUE(r.pass) << r.detail;
}

TEST(Witness, RootOfOmegaPlusOne) {
    LabelMap lm(Forest::of(o("w+1")));
    auto s = witness_sequence(lm, o("w"), A("R"));
    EXPECT_EQ(*s.declared_limit, r_vector(lm));
    for (std::uint64_t i = 1; i <= 20; ++i) EXPECT_TRUE(in_X_beta(lm, o("w"), s.generator(i)));
    EXPECT_TRUE(check_coordwise_convergence(s, 64, 256).pass);
}

TEST(Separation, CertificateSeparatesExtensionsAndOthers) {
    for (const auto& [alpha, beta] : std::vector<std::pair<const char*, const char*>>{{"2", "0"}, {"3", "1"}, {"w+1", "w"}}) {
        const Forest f = Forest::parse(alpha);
        LabelMap lm(f);
        auto us = difference_vertices(lm, o(beta), 3000, 5);
        ASSERT_FALSE(us.empty()) << alpha;
        for (const auto& u : us) {
            auto c = separation_certificate(lm, o(beta), u);
            // The margin is the coefficient of y at its deepest label.
            EXPECT_EQ(c.margin, c.y[c.m]);
            EXPECT_GT(c.margin, 0);
            std::vector<RationalVec> cands;
            for (const auto& p : emit_W(lm, o(beta), 150)) cands.push_back(p.vec);
            const Ordinal order = f.resolve(u).order;
            for (std::uint64_t i = 1; i <= 6; ++i) {
                VertexAddr ch = Forest::child(u, order, i);
                cands.push_back(vertex_vector(lm, ch));
            }
            auto rep = check_separation(c, cands);
            EXPECT_TRUE(rep.pass) << alpha << " " << u.text() << ": " << rep.detail;
            EXPECT_GE(rep.extensions, 6u);
            for (const auto& ev : rep.evaluations) {
                if (ev.kind == 'E') EXPECT_EQ(ev.value, c.margin - (zss(ev.w) - zss(c.y)));
                if (ev.kind == 'R') {
                    Rational off = 0;
                    for (const auto& [j, q] : ev.w.coords())
                        if (c.y[j] == 0) off += q;
                    EXPECT_EQ(ev.value, -off);
                }
            }
        }
    }
}

TEST(Separation, RejectsVectorsOutsideTheDifference) {
    LabelMap lm(Forest::of(Ordinal::finite(2)));
    EXPECT_THROW(separation_certificate(lm, Ordinal{}, A("R.1.R.1")), std::domain_error);
    auto c = separation_certificate(lm, Ordinal{}, A("R.2.R"));
    // y itself and a vector meeting supp(y) only partially are neither E nor R.
    EXPECT_EQ(classify_candidate(c, c.y), '?');
    EXPECT_FALSE(check_separation(c, {c.y}).pass);
}

TEST(NoSubvec, NoContainedSupports) {
    for (std::uint64_t n = 1; n <= 4; ++n) {
        const Forest f = Forest::of(Ordinal::finite(n));
        LabelMap lm(f);
        FiniteForest t = truncate(f, n, 3);
        for (std::uint64_t b = 0; b < n; ++b) EXPECT_TRUE(subvec_violations(lm, t, Ordinal::finite(b)).empty()) << n << "," << b;
    }
}

TEST(RVector, FOne) {
    LabelMap lm(Forest::of(Ordinal::finite(1)));
    EXPECT_EQ(r_vector(lm), e(1));
    EXPECT_THROW(r_vector(LabelMap(Forest::of(o("w")))), std::domain_error);
}
