#include <gtest/gtest.h>

#include "instances.hpp"
#include "ltower/cyclotomic.hpp"
#include "ltower/errors.hpp"
#include "ltower/lattice.hpp"
#include "properties.hpp"

using namespace ltower;
using namespace ltower::testing;

namespace {

constexpr int kUnitCases = 200;

void expect_clean(const std::vector<PropertyResult>& rs) {
    ASSERT_FALSE(rs.empty());
    for (const auto& r : rs) {
        EXPECT_GT(r.cases, 0) << r.name;
        EXPECT_EQ(r.failures, 0) << r.name << ": " << r.first_failure;
    }
}

}  // namespace

TEST(FqField, PrimePowerDetection) {
    unsigned p = 0, f = 0;
    EXPECT_TRUE(prime_power(9, p, f));
    EXPECT_EQ(p, 3u);
    EXPECT_EQ(f, 2u);
    EXPECT_FALSE(prime_power(6, p, f));
    EXPECT_FALSE(prime_power(1, p, f));
}

TEST(FqField, MultiplicativeGroupIsCyclic) {
    for (unsigned q : {4u, 8u, 9u}) {
        unsigned p = 0, f = 0;
        ASSERT_TRUE(prime_power(q, p, f));
        const FieldPtr F = FqField::make(p, f);
        const Fq g = F->primitive_root();
        Fq x = 1;
        for (unsigned k = 1; k < q - 1; ++k) {
            x = F->mul(x, g);
            EXPECT_NE(x, 1u) << "order of the generator divides " << k;
        }
        EXPECT_EQ(F->mul(x, g), 1u);
        for (Fq a = 1; a < q; ++a) EXPECT_EQ(F->mul(a, F->inv(a)), 1u);
    }
}

TEST(FqField, FrobeniusFixesPrimeField) {
    const FieldPtr F = FqField::make(3, 2);
    for (Fq a = 0; a < F->q(); ++a) {
        EXPECT_EQ(F->frobenius(F->frobenius(a)), a);
        EXPECT_EQ(F->frobenius(a) == a, F->in_subfield(a, 1));
    }
}

TEST(FqField, EmbeddingIsAHomomorphism) {
    const FieldPtr S = FqField::make(2, 2), B = FqField::make(2, 4);
    const FieldEmbedding e(S, B);
    for (Fq a = 0; a < S->q(); ++a)
        for (Fq b = 0; b < S->q(); ++b) {
            EXPECT_EQ(e.to_big(S->mul(a, b)), B->mul(e.to_big(a), e.to_big(b)));
            EXPECT_EQ(e.to_big(S->add(a, b)), B->add(e.to_big(a), e.to_big(b)));
        }
    EXPECT_THROW(e.to_small(B->primitive_root()), PreconditionError);
}

TEST(ChainRing, UnitsAndValuations) {
    const ChainRing R(FqField::make(3, 1), 3);
    EXPECT_EQ(R.size(), 27u);
    std::uint32_t units = 0;
    for (std::uint32_t a = 0; a < R.size(); ++a) {
        if (R.is_unit(a)) {
            ++units;
            EXPECT_EQ(R.mul(a, R.inv(a)), 1u);
        }
        EXPECT_EQ(R.add(a, R.neg(a)), 0u);
    }
    EXPECT_EQ(units, 18u);
    EXPECT_EQ(R.valuation(R.pi_power(2)), 2);
    EXPECT_EQ(R.valuation(0), 3);
}

TEST(Laurent, InverseToPrecision) {
    const FieldPtr F = FqField::make(2, 1);
    const Laurent x(F, -1, {1, 1, 0, 1});
    const Laurent y = x.inverse(20);
    EXPECT_EQ(y.valuation(), 1);
    const Laurent one = x * y;
    EXPECT_EQ(one, Laurent::constant(F, 1));
    EXPECT_GE(one.precision(), 19);
}

TEST(Laurent, InexactZeroHasNoValuation) {
    const FieldPtr F = FqField::make(3, 1);
    const Laurent z = Laurent::zero(F, 5);
    EXPECT_TRUE(z.is_zero());
    EXPECT_EQ(z.valuation_lower_bound(), 5);
    EXPECT_THROW((void)z.valuation(), PrecisionExhausted);
    EXPECT_THROW((void)z.inverse(), Error);
}

TEST(Laurent, TruncationKeepsLowDigits) {
    const FieldPtr F = FqField::make(3, 1);
    const Laurent x(F, 0, {1, 2, 1, 2});
    const Laurent t = x.truncate(2);
    EXPECT_EQ(t.precision(), 2);
    EXPECT_EQ(t, Laurent(F, 0, {1, 2}));
    EXPECT_EQ(t, x);  // equal to the smaller precision
}

TEST(Cyclotomic, RootsOfUnity) {
    const Cyclotomic z = Cyclotomic::zeta(12, 1);
    Cyclotomic p = Cyclotomic::from_int(1, 12);
    for (int k = 0; k < 12; ++k) p = p * z;
    EXPECT_EQ(p, Cyclotomic::from_int(1, 12));
    Cyclotomic sum(12);
    for (int k = 0; k < 12; ++k) sum += Cyclotomic::zeta(12, k);
    EXPECT_TRUE(sum.is_zero());
    EXPECT_EQ(z * z.conj(), Cyclotomic::from_int(1, 12));
}

TEST(Cyclotomic, LiftAndRationality) {
    const Cyclotomic i = Cyclotomic::zeta(4, 1);
    EXPECT_EQ(i * i, Cyclotomic::from_int(-1, 4));
    EXPECT_EQ(i.lift(12), Cyclotomic::zeta(12, 3));
    const Cyclotomic t = Cyclotomic::zeta(5, 1) + Cyclotomic::zeta(5, 4) + Cyclotomic::zeta(5, 2) + Cyclotomic::zeta(5, 3);
    ASSERT_TRUE(t.is_rational());
    EXPECT_EQ(t.to_rational(), Rational(-1));
    EXPECT_THROW((void)i.to_rational(), Error);
}

TEST(Lattice, FormIgnoresBasisChange) {
    const FieldPtr F = FqField::make(3, 1);
    std::mt19937_64 rng(7);
    const Laurent pi = Laurent::pi_power(F, 1);
    // non-integral and mixed-valuation bases
    const std::vector<LocalMatrix> bases = {
        LocalMatrix::from_columns({{pi.pow(2).scale(2), Laurent::zero(F)}, {pi, pi.pow(2)}}),
        LocalMatrix::from_columns({{pi.pow(2).scale(2) + pi.pow(3), pi}, {pi.inverse(), Laurent::from_int(F, 2) + pi}}),
        LocalMatrix::diagonal({pi.pow(3), Laurent::constant(F, 1)}),
    };
    for (const auto& B : bases) {
        const Lattice L = Lattice::from_basis(B);
        for (int t = 0; t < 20; ++t) EXPECT_EQ(Lattice::from_basis(B * random_k0(F, 2, rng)), L);
        EXPECT_EQ(Lattice::from_hnf(L.hnf()), L);
        EXPECT_EQ(L.volume(), B.det().valuation());
    }
}

TEST(Lattice, ContainmentAndScaling) {
    const FieldPtr F = FqField::make(2, 1);
    const Lattice L0 = Lattice::standard(F, 2);
    const Lattice L1 = L0.scaled(1);
    EXPECT_TRUE(L0.contains(L1));
    EXPECT_FALSE(L1.contains(L0));
    EXPECT_EQ(L1.normalized(), L0);
    const Lattice M = Lattice::from_basis(LocalMatrix::diagonal({Laurent::pi_power(F, 1), Laurent::constant(F, 1)}));
    EXPECT_EQ(M.sum(L1), M);
    EXPECT_EQ(M.sum(L0), L0);
}

TEST(Lattice, NormalizedEnumerationCount) {
    // normalized lattices with elementary divisors in [0, 1] in F^2: o^2 and the q + 1 index-q sublattices
    for (unsigned q : {2u, 3u}) {
        const std::uint64_t c = for_each_normalized_lattice(FqField::make(q, 1), 2, 1, [](const Lattice&) {});
        EXPECT_EQ(c, q + 2);
    }
}

TEST(Properties, RingAxioms) { expect_clean(ring_axiom_suites(11, kUnitCases)); }
TEST(Properties, NormalForms) { expect_clean(normal_form_suites(12, kUnitCases)); }
TEST(Properties, Serialization) { expect_clean(serialization_suites(13, kUnitCases)); }
