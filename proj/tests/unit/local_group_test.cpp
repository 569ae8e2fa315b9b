#include <gtest/gtest.h>

#include "instances.hpp"
#include "ltower/congruence.hpp"
#include "ltower/elliptic.hpp"
#include "ltower/errors.hpp"
#include "ltower/fixed_points.hpp"
#include "ltower/strata.hpp"

using namespace ltower;
using namespace ltower::testing;

TEST(Strata, CountsMatchOracles) {
    for (auto [n, q, m] : std::vector<std::tuple<unsigned, unsigned, int>>{{2, 2, 1}, {3, 2, 1}, {2, 3, 1}, {2, 2, 2}, {3, 2, 2}}) {
        const ChainRing R(FqField::make(q, 1), m);
        for (unsigned h = 0; h <= n; ++h) {
            const auto s = enumerate_summands(R, static_cast<int>(n), static_cast<int>(h));
            EXPECT_EQ(s.size(), summand_count(n, h, q, m)) << n << " " << h << " " << q << " " << m;
            if (m == 1) {
                EXPECT_EQ(s.size(), brute_subspace_count(n, h, q));
            }
        }
    }
}

TEST(Strata, CanonicalFormIgnoresGenerators) {
    const ChainRing R(FqField::make(3, 1), 2);
    std::mt19937_64 rng(3);
    for (const auto& A : enumerate_summands(R, 3, 2)) {
        // right-multiply generators by a random invertible 2x2
        ChainMat U(2, 2);
        do
            for (auto& x : U.a) x = static_cast<std::uint32_t>(rng() % R.size());
        while (!mat_invertible(R, U));
        const auto B = canonical_summand(R, mat_mul(R, A.gens, U));
        ASSERT_TRUE(B.has_value());
        EXPECT_EQ(*B, A);
    }
}

TEST(Strata, NonSummandIsRejected) {
    const ChainRing R(FqField::make(2, 1), 2);
    ChainMat G(2, 1);
    G.at(0, 0) = R.pi_power(1);
    EXPECT_FALSE(canonical_summand(R, G).has_value());
}

TEST(Strata, IdentityActsTrivially) {
    const FieldPtr F = FqField::make(2, 1);
    const ChainRing R2(F, 2), R1(F, 1);
    const LocalMatrix I = LocalMatrix::identity(F, 2);
    for (const auto& A : enumerate_summands(R2, 2, 1)) {
        EXPECT_EQ(strata_action(I, A, R2, R2), A);
        EXPECT_EQ(strata_action(I, A, R2, R1), reduce_summand(R2, A, R1));
    }
    EXPECT_EQ(count_fixed_labels(I, R2, 1), summand_count(2, 1, 2, 2));
}

TEST(Strata, SwapMovesTheFirstLine) {
    const FieldPtr F = FqField::make(2, 1);
    const ChainRing R(F, 1);
    const Laurent z = Laurent::zero(F), one = Laurent::constant(F, 1);
    const LocalMatrix w = LocalMatrix::from_columns({{z, one}, {one, z}});
    ChainMat e1(2, 1), e2(2, 1);
    e1.at(0, 0) = 1;
    e2.at(1, 0) = 1;
    EXPECT_EQ(strata_action(w, *canonical_summand(R, e1), R, R), *canonical_summand(R, e2));
}

TEST(Strata, EllipticUnitsHaveNoFixedLines) {
    const FieldPtr F = FqField::make(2, 1);
    const LocalMatrix g = companion_digits(F, {{1}, {1}});
    for (int m = 1; m <= 3; ++m) EXPECT_EQ(strata_fixed_count(g, m, 1), 0u);
    const StrataScan s = strata_fixed_scan(g, 1, 3);
    EXPECT_EQ(s.labels, (std::vector<std::uint64_t>{3, 6, 12}));
    EXPECT_EQ(s.threshold, 1);
}

TEST(Strata, RamifiedUnitFixesLabelsOnlyAtLevelOne) {
    const FieldPtr F = FqField::make(3, 1);
    const LocalMatrix g = LocalMatrix::identity(F, 2) + companion_digits(F, {{0, F->neg(1)}, {}});
    ASSERT_TRUE(regular_elliptic_certify(g).certified);
    EXPECT_GT(strata_fixed_count(g, 1, 1), 0u);
    EXPECT_EQ(strata_fixed_count(g, 2, 1), 0u);
    EXPECT_EQ(strata_fixed_count(g, 3, 1), 0u);
}

TEST(Flags, CountsMatchBruteForce) {
    for (auto [n, q] : std::vector<std::pair<int, unsigned>>{{2, 2}, {2, 3}, {3, 2}}) {
        const ChainRing R(FqField::make(q, 1), 1);
        const auto flags = enumerate_flags(R, n);
        std::uint64_t maximal = 0;
        for (const auto& f : flags) maximal += f.is_maximal();
        EXPECT_EQ(flags.size(), brute_flag_count(n, q, false));
        EXPECT_EQ(maximal, brute_flag_count(n, q, true));
        const std::uint64_t full = n == 3 && q == 2 ? 21 : n == 2 && q == 2 ? 3 : maximal;
        EXPECT_EQ(maximal, full);
    }
    EXPECT_EQ(enumerate_flags(ChainRing(FqField::make(2, 1), 1), 1).size(), 1u);
}

TEST(Flags, FlagOfPointFromValues) {
    const ChainRing R(FqField::make(2, 1), 1);
    std::vector<ValueVector> v(4);
    v[0] = ValueVector::zero();
    v[1] = {false, {Rational(-1), Rational(0)}};
    v[2] = {false, {Rational(0), Rational(-1)}};
    v[3] = {false, {Rational(0), Rational(-1)}};
    const Flag f = flag_of_point(R, 2, v);
    ASSERT_EQ(f.chain.size(), 3u);
    EXPECT_EQ(f.chain[0].h, 2);
    EXPECT_EQ(f.chain[1].h, 1);
    EXPECT_EQ(f.chain[2].h, 0);
    EXPECT_TRUE(summand_contains(R, f.chain[1], std::vector<std::uint32_t>{1, 0}));
}

TEST(Flags, NonMonotoneValuesAreNotAFlag) {
    const ChainRing R(FqField::make(2, 1), 1);
    // {0, e_1, e_2} is the smallest level set but not a subgroup
    std::vector<ValueVector> v(4, ValueVector{false, {Rational(-1)}});
    v[0] = ValueVector::zero();
    v[3] = {false, {Rational(0)}};
    EXPECT_THROW(flag_of_point(R, 2, v), NotAFlag);
}

TEST(Elliptic, CertificateKinds) {
    const FieldPtr F2 = FqField::make(2, 1), F3 = FqField::make(3, 1);
    const CertifyResult u = regular_elliptic_certify(companion_digits(F2, {{1}, {1}}));
    EXPECT_TRUE(u.certified);
    EXPECT_EQ(u.cert.f, 2);
    EXPECT_EQ(u.cert.e, 1);
    const CertifyResult r = regular_elliptic_certify(companion_digits(F3, {{0, 2}, {}}));
    EXPECT_TRUE(r.certified);
    EXPECT_EQ(r.cert.e, 2);
    // T^2 - pi in characteristic 2 is irreducible but inseparable
    const CertifyResult i = regular_elliptic_certify(companion_digits(F2, {{0, 1}, {}}));
    EXPECT_FALSE(i.certified);
    EXPECT_TRUE(i.irreducible);
    // split: (T - 1)(T - 2) over F_3
    EXPECT_FALSE(regular_elliptic_certify(LocalMatrix::diagonal({Laurent::constant(F3, 1), Laurent::constant(F3, 2)})).irreducible);
    EXPECT_THROW(require_elliptic(companion_digits(F2, {{0, 1}, {}})), CertificationError);
}

TEST(Elliptic, ConjugationInvariance) {
    std::mt19937_64 rng(9);
    for (const auto& inst : elliptic_unit_candidates(4)) {
        const CertifyResult a = regular_elliptic_certify(inst.g);
        const LocalMatrix x = random_k0(inst.g.field(), inst.g.n(), rng);
        const CertifyResult b = regular_elliptic_certify(x * inst.g * x.inverse());
        EXPECT_EQ(a.certified, b.certified) << inst.label;
        EXPECT_EQ(a.cert.e, b.cert.e) << inst.label;
        EXPECT_EQ(a.cert.f, b.cert.f) << inst.label;
    }
}

TEST(FixedPoints, EnumeratedGlOrder) {
    const ChainRing R(FqField::make(2, 1), 2);
    EXPECT_EQ(enumerate_gl(R, 2).size(), brute_gl_order(2, 2, 2));
}

TEST(FixedPoints, StructuredAgreesWithBruteForce) {
    const FieldPtr F = FqField::make(2, 1);
    const LocalMatrix gb = companion_digits(F, {{1}, {1}});
    for (int m : {1, 2}) {
        const LocalMatrix I = LocalMatrix::identity(F, 2);
        const StructuredCount s = count_fixed_points_structured(gb, I, m);
        const BruteForceCount b = count_fixed_points_bruteforce(gb, I, m);
        EXPECT_TRUE(b.stable);
        EXPECT_EQ(s.count, b.count) << m;
        // o[g_b] is the maximal order, so o^2 is the only stable lattice up to scaling
        EXPECT_EQ(s.stable_lattices, 1u);
    }
}

TEST(FixedPoints, OddValuationVanishes) {
    const FieldPtr F = FqField::make(3, 1);
    const LocalMatrix gb = companion_digits(F, {{0, 2}, {}});
    const StructuredCount s = count_fixed_points_structured(gb, LocalMatrix::identity(F, 2), 1);
    EXPECT_TRUE(s.early_zero);
    EXPECT_EQ(s.count, 0u);
}

TEST(FixedPoints, NormalizerIsChecked) {
    const FieldPtr F = FqField::make(2, 1);
    const auto [a, g0] = split_normalizer(LocalMatrix::scalar(F, 2, Laurent::pi_power(F, 3)));
    EXPECT_EQ(a, 3);
    EXPECT_TRUE(g0.in_k0());
    EXPECT_THROW(split_normalizer(LocalMatrix::diagonal({Laurent::pi_power(F, 1), Laurent::constant(F, 1)})), PreconditionError);
}

TEST(FixedPoints, StableLatticesOfRamifiedElement) {
    const FieldPtr F = FqField::make(3, 1);
    // o[pi^{1/2}] is maximal in a ramified quadratic field: the stable lattices are
    // o_E v and P_E v, one class up to pi^Z each
    const LocalMatrix y = LocalMatrix::identity(F, 2) + companion_digits(F, {{0, 2}, {}});
    EXPECT_EQ(stable_lattices(y).size(), 2u);
}

TEST(Congruence, ContainsItsGenerators) {
    const FieldPtr F = FqField::make(3, 1);
    const LocalMatrix g = companion_digits(F, {{0, 2}, {}});
    std::mt19937_64 rng(5);
    for (int r = 1; r <= 3; ++r) {
        const CongruenceSubgroup K(g, r);
        EXPECT_EQ(K.e(), 2);
        EXPECT_TRUE(K.contains(LocalMatrix::identity(F, 2)));
        for (const auto& x : K.generators()) EXPECT_TRUE(K.contains(x));
        for (int t = 0; t < 10; ++t) EXPECT_TRUE(K.contains(K.sample(rng)));
        EXPECT_TRUE(K.normalized_by(g));
        if (r > 1) {
            const CongruenceSubgroup K1(g, r - 1);
            for (const auto& x : K.generators()) EXPECT_TRUE(K1.contains(x));
        }
    }
}
