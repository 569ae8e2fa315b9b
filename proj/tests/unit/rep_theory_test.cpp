#include <gtest/gtest.h>

#include <algorithm>

#include "instances.hpp"
#include "ltower/errors.hpp"
#include "ltower/fixed_points.hpp"
#include "ltower/formal_module.hpp"
#include "ltower/rep_theory.hpp"

using namespace ltower;
using namespace ltower::testing;

namespace {

std::vector<long long> sorted_degrees(const CharacterTable& T) {
    std::vector<long long> d;
    for (std::size_t c = 0; c < T.chars.size(); ++c) d.push_back(static_cast<long long>(T.degree(c)));
    std::sort(d.begin(), d.end());
    return d;
}

}  // namespace

TEST(Groups, OrdersAndAxioms) {
    std::mt19937_64 rng(1);
    EXPECT_EQ(group_gl(2, 3, 1)->order(), brute_gl_order(2, 3, 1));
    EXPECT_EQ(group_gl(2, 2, 2)->order(), brute_gl_order(2, 2, 2));
    EXPECT_EQ(group_quaternion_quotient(2, 1)->order(), 6u);
    EXPECT_EQ(group_quaternion_quotient(2, 2)->order(), 24u);
    EXPECT_EQ(group_quaternion_quotient(3, 1)->order(), 16u);
    for (const auto& G : {group_gl(2, 2, 1), group_quaternion_quotient(3, 1), group_symmetric(4), group_cyclic(6)}) EXPECT_TRUE(G->verify(rng)) << G->name();
}

TEST(Groups, ForeignKeyIsRejected) {
    const GroupPtr G = group_cyclic(4);
    EXPECT_FALSE(G->contains({9}));
    EXPECT_THROW(G->index_of({9}), PreconditionError);
}

TEST(Groups, GlCapIsEnforced) { EXPECT_THROW(group_gl(3, 3, 1, 1000), CapExceeded); }

TEST(CharacterTables, KnownDegrees) {
    EXPECT_EQ(sorted_degrees(character_table(group_symmetric(3))), (std::vector<long long>{1, 1, 2}));
    EXPECT_EQ(sorted_degrees(character_table(group_symmetric(4))), (std::vector<long long>{1, 1, 2, 3, 3}));
    EXPECT_EQ(sorted_degrees(character_table(group_cyclic(5))), (std::vector<long long>(5, 1)));
    EXPECT_EQ(sorted_degrees(character_table(group_gl(2, 3, 1))), (std::vector<long long>{1, 1, 2, 2, 2, 3, 3, 4}));
}

TEST(CharacterTables, ClassesAreOrderedAndComplete) {
    const GroupPtr G = group_gl(2, 3, 1);
    std::vector<std::size_t> class_of;
    const auto cls = conjugacy_classes(*G, &class_of);
    EXPECT_EQ(cls.front().rep, G->identity());
    std::size_t total = 0;
    for (const auto& c : cls) total += c.size;
    EXPECT_EQ(total, G->order());
    for (std::size_t i = 0; i < G->order(); ++i) EXPECT_EQ(G->element_order(i), cls[class_of[i]].order);
}

TEST(CharacterTables, JsonRoundTripAndAttach) {
    const GroupPtr G = group_quaternion_quotient(3, 1);
    const CharacterTable T = character_table(G);
    const CharacterTable U = CharacterTable::from_json(T.to_json());
    EXPECT_EQ(U.to_json().dump(), T.to_json().dump());
    const CharacterTable A = attach_group(G, U);
    for (std::size_t i = 0; i < G->order(); ++i)
        for (std::size_t c = 0; c < T.chars.size(); ++c) EXPECT_EQ(A.value(c, G->element(i)), T.value(c, G->element(i)));
    EXPECT_THROW(attach_group(group_cyclic(16), U), PreconditionError);
}

TEST(CharacterTables, CapIsEnforced) { EXPECT_THROW(character_table(group_gl(2, 3, 1), 10), CapExceeded); }

TEST(Cuspidal, CountAndDegree) {
    for (unsigned q : {2u, 3u}) {
        const CharacterTable T = character_table(group_gl(2, q, 1));
        const auto c = cuspidal_characters(T);
        EXPECT_EQ(c.size(), (q * q - q) / 2);
        for (auto i : c) EXPECT_EQ(T.degree(i), Rational(q - 1));
    }
}

TEST(HarishChandra, TrivialCharacterCountsFixedLattices) {
    const FieldPtr F = FqField::make(3, 1);
    InducedCharSpec spec;
    spec.shape = InducedCharSpec::Shape::KmTrivial;
    spec.m = 1;
    // not scalar mod pi: no conjugate lands in pi^Z K_1
    EXPECT_EQ(hc_character(spec, companion_digits(F, {{1}, {}})).support, 0u);
    // 1 + pi C lies in K_1 itself
    const LocalMatrix C = companion_digits(F, {{1}, {}});
    const LocalMatrix g = LocalMatrix::identity(F, 2) + C.shift(1);
    const HcValue h = hc_character(spec, g);
    ASSERT_TRUE(h.value.is_rational());
    EXPECT_EQ(h.value.to_rational(), Rational(static_cast<long long>(h.support)));
    EXPECT_GT(h.support, 0u);
    EXPECT_EQ(h.support, count_fixed_points_structured(g, LocalMatrix::identity(F, 2), 1).count);
}

TEST(HarishChandra, InflatedTrivialIsOne) {
    // one stable lattice class with trivial lambda on pi^Z GL_2(o)
    const FieldPtr F = FqField::make(2, 1);
    const CharacterTable T = character_table(group_gl(2, 2, 1));
    InducedCharSpec spec;
    spec.shape = InducedCharSpec::Shape::K0Inflated;
    spec.table = &T;
    spec.character = 0;
    const HcValue h = hc_character(spec, companion_digits(F, {{1}, {1}}));
    EXPECT_EQ(h.value, Cyclotomic::from_int(1));
}

TEST(DepthZero, MatchingAndCap) {
    const JlMatch r = jl_match(2);
    EXPECT_EQ(r.pairs.size(), 1u);
    EXPECT_GT(r.sign_checks, 0u);
    EXPECT_THROW(jl_match(5), CapExceeded);
    int calls = 0;
    const JlMatch s = jl_match(2, 4, [&](const GroupPtr& G) {
        ++calls;
        return character_table(G);
    });
    EXPECT_EQ(calls, 2);
    EXPECT_EQ(s.pairs, r.pairs);
}
