#include <gtest/gtest.h>

#include "ltower/errors.hpp"
#include "ltower/period.hpp"

using namespace ltower;

TEST(DivisionAlgebra, UniformizerRelations) {
    for (auto [q, n] : std::vector<std::pair<unsigned, unsigned>>{{2, 2}, {3, 2}, {2, 3}}) {
        const DivisionAlgebra B(q, n);
        DivisionAlgebra::Elem p = B.one();
        for (unsigned i = 0; i < n; ++i) p = B.mul(p, B.uniformizer());
        EXPECT_TRUE(B.equal(p, B.from_coords([&] {
            std::vector<Laurent> x(n, Laurent::zero(B.ext()));
            x[0] = Laurent::pi_power(B.ext(), 1);
            return x;
        }())));
        // Pi x = sigma(x) Pi
        const Fq z = B.ext()->primitive_root();
        EXPECT_TRUE(B.equal(B.mul(B.uniformizer(), B.from_ext(z)), B.mul(B.from_ext(B.ext()->frobenius(z, B.base()->f())), B.uniformizer())));
    }
}

TEST(DivisionAlgebra, ReducedNormIsMultiplicative) {
    const DivisionAlgebra B(3, 2);
    std::mt19937_64 rng(4);
    for (int t = 0; t < 20; ++t) {
        const auto a = B.random(rng), b = B.random(rng);
        EXPECT_EQ(B.reduced_norm(B.mul(a, b)), B.reduced_norm(a) * B.reduced_norm(b));
    }
    EXPECT_EQ(B.reduced_norm(B.uniformizer()).valuation(), 1);
}

TEST(DivisionAlgebra, ReducedCompanionHasTheCharpoly) {
    const DivisionAlgebra B(2, 2);
    std::mt19937_64 rng(8);
    for (int t = 0; t < 10; ++t) {
        const auto b = B.random(rng);
        const LPoly chi = B.reduced_charpoly(b);
        const LocalMatrix C = reduced_companion(B, b);
        const LPoly c = C.charpoly();
        ASSERT_EQ(c.size(), chi.size());
        for (std::size_t i = 0; i < c.size(); ++i) EXPECT_EQ(c[i], chi[i]);
        EXPECT_EQ(C.det(), B.reduced_norm(b));
    }
}

TEST(ProjectiveFixedPoints, TwoSimpleLines) {
    const DivisionAlgebra B(3, 2);
    const auto b = B.from_ext(B.ext()->primitive_root());
    const ProjectiveFixedPoints pf = projective_fixed_points(B, b);
    ASSERT_EQ(pf.lines.size(), 2u);
    EXPECT_TRUE(pf.lines[0].simple && pf.lines[1].simple);
}

TEST(ProjectiveFixedPoints, InseparableIsRejected) {
    // the reduced charpoly of Pi at q = 2 is T^2 - pi, inseparable in characteristic 2
    const DivisionAlgebra B(2, 2);
    EXPECT_THROW(projective_fixed_points(B, B.uniformizer()), CertificationError);
}

TEST(Period, TotalIsNTimesFiber) {
    const DivisionAlgebra B(2, 2);
    const auto b = B.from_ext(2);
    const LocalMatrix g = reduced_companion(B, b).inverse();
    const FixedPointReport r = total_fixed_points(g, B, b, 1, true);
    EXPECT_EQ(r.per_fiber, 3u);
    EXPECT_EQ(r.total, 6u);
    ASSERT_TRUE(r.brute.has_value());
    EXPECT_TRUE(r.brute->stable);
    EXPECT_EQ(r.brute->count, 3u);
}

TEST(Period, OddNormVanishes) {
    const DivisionAlgebra B(3, 2);
    const FixedPointReport r = total_fixed_points(LocalMatrix::identity(B.base(), 2), B, B.uniformizer(), 1);
    EXPECT_EQ(r.total, 0u);
    EXPECT_TRUE(r.structured.early_zero);
}

TEST(Period, DegreeOneAlgebra) {
    const DivisionAlgebra B(2, 1);
    const auto b = B.from_coords({Laurent(B.ext(), 0, {1, 0, 1})});
    const FixedPointReport r = total_fixed_points(LocalMatrix::identity(B.base(), 1), B, b, 2);
    EXPECT_EQ(r.per_fiber, 2u);
    EXPECT_EQ(r.total, 2u);
}
