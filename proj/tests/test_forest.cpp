#include "wstar/forest.hpp"
#include "wstar/shape.hpp"
#include "wstar/truncation.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace wstar;

namespace {

Ordinal o(const char* s) { return parse_ordinal(s); }
VertexAddr A(const char* s) { return VertexAddr::parse(s); }
Forest F(const char* s) { return Forest::of(parse_ordinal(s)); }

Shape leaf() { return Shape::leaf(); }
Shape node(Shape child, Multiplicity m) {
    Children c;
    c.entries.push_back({std::move(child), m});
    return Shape::node(std::move(c));
}
ForestShape one(Shape s) {
    ForestShape f;
    f.entries.push_back({std::move(s), Multiplicity::finite(1)});
    return f;
}
const Multiplicity W = Multiplicity::infinite();

// Canonical form of the subtree rooted at the vertex with this address.
std::string subtree_form(const FiniteForest& t, const VertexAddr& a) {
    auto v = t.find(a);
    if (!v) return "<missing>";
    return detail::canonical_subtree(t, *v);
}

}  // namespace

TEST(Address, TextRoundTrip) {
    for (const char* s : {"", "R", "R.1", "R.3.R.1", "2.R.7", "1"}) EXPECT_EQ(A(s).text(), s);
    EXPECT_THROW(A("R.0"), invalid_address);
    EXPECT_THROW(A("R..1"), invalid_address);
    EXPECT_THROW(A("R.x"), invalid_address);
}

TEST(Address, ValidityFollowsConstruction) {
    EXPECT_TRUE(F("0").contains(A("")));
    EXPECT_FALSE(F("0").contains(A("R")));
    EXPECT_TRUE(F("1").contains(A("R.5")));
    EXPECT_FALSE(F("1").contains(A("R.5.R")));
    EXPECT_FALSE(F("1").contains(A("1.R")));
    EXPECT_TRUE(F("w").contains(A("3.R.2.R.1.R.1")));
    EXPECT_FALSE(F("w").contains(A("3.R.2.R.1")));
    EXPECT_FALSE(F("w").contains(A("R")));
    EXPECT_FALSE(F("w").contains(A("1.R.1.R")));  // component 1 is T_1
    EXPECT_TRUE(F("w+1").contains(A("R.2.R.1.R.1")));
    EXPECT_EQ(F("w+1").resolve(A("R.4.R")).order, Ordinal::finite(4));
    EXPECT_THROW(F("2").resolve(A("R.1.R.1.R")), invalid_address);
}

TEST(Forest, UpNeighbors) {
    auto ch = F("1").up_neighbors(A("R"), 3);
    ASSERT_EQ(ch.size(), 3u);
    EXPECT_EQ(std::set<VertexAddr>(ch.begin(), ch.end()).size(), 3u);
    for (const auto& c : ch) EXPECT_TRUE(F("1").is_terminal(c));

    EXPECT_TRUE(F("0").up_neighbors(A(""), 5).empty());

    // Children of the root of F_{w+1} are the initial vertices of the
    // components of F_w; compare with the truncation.
    const Forest fw1 = F("w+1");
    auto up = fw1.up_neighbors(A("R"), 2);
    ASSERT_EQ(up.size(), 2u);
    const Forest fw = F("w");
    for (std::uint64_t n = 1; n <= 2; ++n) {
        EXPECT_EQ(fw1.resolve(up[n - 1]).order, fw.component_order(n));
        FiniteForest a = truncate(fw1, 3, 2), b = truncate(fw, 2, 2);
        auto rb = b.roots();
        EXPECT_EQ(subtree_form(a, up[n - 1]), detail::canonical_subtree(b, rb[n - 1]));
    }
}

TEST(Forest, DownNeighborsAndInitialVertices) {
    EXPECT_EQ(F("1").down_neighbor(A("R.1")), A("R"));
    EXPECT_TRUE(F("0").is_initial(A("")));
    EXPECT_TRUE(F("0").is_terminal(A("")));
    const Forest fw = F("w");
    for (std::uint64_t n = 1; n <= 6; ++n) {
        VertexAddr v = fw.initial_vertex(n);
        for (std::uint64_t k = 1; !fw.is_terminal(v); ++k) v = fw.up_neighbors(v, k).back();
        auto chain = fw.chain(v);
        EXPECT_EQ(chain.front(), fw.initial_vertex(n));
        EXPECT_EQ(chain.size(), n + 1);
        for (std::size_t i = 1; i < chain.size(); ++i) EXPECT_EQ(fw.down_neighbor(chain[i]), chain[i - 1]);
        EXPECT_FALSE(fw.down_neighbor(chain.front()).has_value());
    }
}

TEST(Forest, CopiesRequireATree) {
    EXPECT_THROW(Forest::copies(o("w")), std::domain_error);
    const Forest c = Forest::parse("copies(w+1)");
    EXPECT_TRUE(c.is_copies());
    EXPECT_EQ(c.component_order(9), o("w+1"));
    EXPECT_EQ(c.name(), "copies(w+1)");
}

TEST(Shape, SmallForests) {
    EXPECT_TRUE(compare(shape_of(o("0")), one(leaf())) == 0);
    EXPECT_TRUE(compare(shape_of(o("1")), one(node(leaf(), W))) == 0);
    EXPECT_TRUE(compare(shape_of(o("2")), one(node(node(leaf(), W), W))) == 0);
    EXPECT_EQ(forest_text(shape_of(o("1"))), "{N[Lxw]x1}");
}

TEST(Shape, TwoUnfoldsAgreeWithTruncation) {
    // Every branching of the truncation of F_2 is full, and its depth is 2.
    FiniteForest t = truncate(F("2"), 5, 3);
    EXPECT_EQ(t.size(), 1u + 3u + 9u);
    for (std::size_t v = 0; v < t.size(); ++v)
        EXPECT_TRUE(t.vertices[v].children.empty() ? t.vertices[v].depth == 2 : t.vertices[v].children.size() == 3);
}

TEST(Shape, DerivationSteps) {
    EXPECT_TRUE(compare(derive_shape(shape_of(o("1"))), one(leaf())) == 0);
    EXPECT_TRUE(compare(derive_shape(shape_of(o("0"))), one(leaf())) == 0);
    EXPECT_TRUE(compare(derive_shape(shape_of(o("2"))), shape_of(o("1"))) == 0);
    for (std::uint64_t n = 1; n <= 6; ++n)
        for (std::uint64_t k = 0; k <= n + 1; ++k)
            EXPECT_TRUE(compare(derived_forest(Forest::of(Ordinal::finite(n)), Ordinal::finite(k)),
                              shape_of(Ordinal::finite(k >= n ? 0 : n - k))) == 0)
                << n << "," << k;
}

TEST(Shape, SuccessorOfAnyCorpusOrdinal) {
    for (const char* s : {"1", "2", "3", "w", "w+1", "w*2", "w^2"}) {
        const Ordinal a = o(s);
        const Forest next = Forest::of(successor(a));
        EXPECT_TRUE(compare(derived_forest(next, a), shape_of(o("1"))) == 0) << s;
        EXPECT_TRUE(compare(derived_forest(next, successor(a)), shape_of(o("0"))) == 0) << s;
    }
    // F_w^w: one isolated vertex per component.
    ForestShape fw = derived_forest(F("w"), o("w"));
    ForestShape isolated;
    isolated.entries.push_back({leaf(), W});
    EXPECT_TRUE(compare(fw, isolated) == 0);
}

TEST(Derived, MembershipExamples) {
    EXPECT_TRUE(in_derived(F("3"), o("2"), A("R")));
    FiniteForest t = truncate(F("3"), 3, 3);
    FiniteForest b = brute_derive(t, 2);
    for (const auto& v : t.vertices) {
        const bool brute = b.find(v.addr).has_value();
        EXPECT_EQ(in_derived(F("3"), o("2"), v.addr), brute) << v.addr.text();
        if (v.depth == 2) EXPECT_FALSE(in_derived(F("3"), o("2"), v.addr));
    }
    const Forest fw1 = F("w+1");
    EXPECT_TRUE(in_derived(fw1, o("w"), A("R")));
    for (const auto& c : fw1.up_neighbors(A("R"), 8)) EXPECT_TRUE(terminal_in_derived(fw1, o("w"), c));
    EXPECT_FALSE(terminal_in_derived(fw1, o("w"), A("R")));
}

TEST(Derived, FiniteForestsMatchBruteEverywhere) {
    for (std::uint64_t n = 1; n <= 5; ++n)
        for (std::size_t b : {2u, 3u}) {
            const Forest f = Forest::of(Ordinal::finite(n));
            FiniteForest t = truncate(f, n, b);
            for (std::uint64_t k = 0; k <= n; ++k) {
                FiniteForest d = brute_derive(t, k);
                for (const auto& v : t.vertices)
                    EXPECT_EQ(in_derived(f, Ordinal::finite(k), v.addr), d.find(v.addr).has_value())
                        << n << "," << k << " " << v.addr.text();
            }
        }
}

TEST(Truncation, BranchingInvariant) {
    for (const char* s : {"1", "3", "w", "w+1", "w*2"}) {
        FiniteForest t = truncate(F(s), 3, 3);
        for (std::size_t v = 0; v < t.size(); ++v) {
            const auto& x = t.vertices[v];
            if (x.cut) EXPECT_TRUE(x.children.empty());
            else if (!F(s).is_terminal(x.addr)) EXPECT_EQ(x.children.size(), 3u) << s << " " << x.addr.text();
            if (x.parent) EXPECT_EQ(t.vertices[*x.parent].depth + 1, x.depth);
        }
    }
    EXPECT_THROW(truncate(F("1"), 0, 2), std::invalid_argument);
}

TEST(Truncation, LeafDeletionMatchesSmallerForests) {
    for (std::uint64_t n = 0; n <= 6; ++n)
        for (std::uint64_t k = 0; k <= n; ++k) {
            const std::size_t d = std::max<std::size_t>(n, 1);
            FiniteForest lhs = brute_derive(truncate(Forest::of(Ordinal::finite(n)), d, 3), k);
            FiniteForest rhs = truncate(Forest::of(Ordinal::finite(n - k)), d, 3);
            EXPECT_TRUE(iso_check(lhs, rhs)) << n << "," << k;
        }
}

TEST(Truncation, SingleVertexIsStable) {
    FiniteForest t = truncate(F("0"), 2, 2);
    ASSERT_EQ(t.size(), 1u);
    FiniteForest d = brute_derive(t, 1);
    EXPECT_TRUE(iso_check(t, d));
    EXPECT_EQ(d.size(), 1u);
}

TEST(Truncation, OmegaComponentsDeriveSeparately) {
    FiniteForest t = truncate(F("w"), 4, 3);
    FiniteForest d = brute_derive(t, 1);
    for (std::uint64_t n = 1; n <= 3; ++n) {
        FiniteForest own = brute_derive(truncate(Forest::of(Ordinal::finite(n)), 4, 3), 1);
        EXPECT_EQ(subtree_form(d, F("w").initial_vertex(n)), canonical_form(own)) << n;
    }
}

TEST(Truncation, IsomorphismExamples) {
    EXPECT_TRUE(iso_check(truncate(F("2"), 2, 3), truncate(F("2"), 2, 3)));
    EXPECT_FALSE(iso_check(truncate(F("2"), 2, 3), truncate(F("1"), 2, 3)));
    FiniteForest f3 = truncate(F("3"), 3, 2);
    EXPECT_TRUE(iso_check(brute_derive(f3, 1), truncate(F("2"), 3, 2)));
    EXPECT_TRUE(iso_check(restrict_to_derived(f3, F("3"), o("1")), truncate(F("2"), 3, 2)));
}

TEST(Truncation, FiniteStageOfLimits) {
    EXPECT_EQ(finite_stage(o("3"), 2), 3u);
    EXPECT_EQ(finite_stage(o("w"), 3), 3u);
    EXPECT_EQ(finite_stage(o("w+2"), 3), 5u);
    EXPECT_EQ(finite_stage(o("w*2"), 3), 6u);
}

TEST(Export, JsonAndDot) {
    FiniteForest t = truncate(F("2"), 2, 2);
    auto j = to_json(t);
    EXPECT_EQ(j["alpha"], "2");
    EXPECT_EQ(j["vertex_count"], 7);
    ASSERT_EQ(j["vertices"].size(), 7u);
    EXPECT_TRUE(j["vertices"][0]["parent"].is_null());
    EXPECT_EQ(j["vertices"][1]["parent"], "R");
    std::size_t terminal = 0;
    for (const auto& v : j["vertices"]) terminal += v["terminal"].get<bool>();
    EXPECT_EQ(terminal, 4u);

    std::string dot = to_dot(t);
    EXPECT_EQ(dot.rfind("digraph", 0), 0u);
    EXPECT_EQ(std::count(dot.begin(), dot.end(), '>'), 6);

    FiniteForest big = truncate(Forest::of(Ordinal::finite(14)), 14, 2);
    EXPECT_GE(big.size(), dot_vertex_limit);
    EXPECT_THROW(to_dot(big), std::length_error);
}

TEST(UpTerm, FullTerminalBranchingMeansAllTerminal) {
    for (const char* s : {"1", "2", "3", "w", "w+1", "w*2"})
        for (std::uint64_t k = 0; k <= 3; ++k) {
            FiniteForest t = restrict_to_derived(truncate(F(s), 4, 3), F(s), Ordinal::finite(k));
            for (std::size_t v = 0; v < t.size(); ++v) {
                std::size_t term = 0;
                for (auto c : t.vertices[v].children) term += t.is_terminal(c);
                if (term == t.branch) EXPECT_EQ(term, t.vertices[v].children.size());
            }
        }
    for (const char* s : {"2", "w+1", "w*2+1"})
        for (std::uint64_t k = 0; k <= 2; ++k)
            for (const auto& e : derived_forest(F(s), Ordinal::finite(k)).entries)
                EXPECT_TRUE(all_terminal_when_infinitely_many(e.child, 6));
}
