#include <gtest/gtest.h>

#include "instances.hpp"
#include "ltower/errors.hpp"
#include "ltower/formal_module.hpp"

using namespace ltower;
using namespace ltower::testing;

namespace {

FormalOModule module_of(unsigned q, unsigned n, int precision) {
    const FieldPtr F = FqField::make(q, 1);
    const RingPtr R = CoeffRing::base(F, precision);
    return make_module(R, q, n, std::vector<RingElem>(n - 1, R->pi()));
}

}  // namespace

TEST(CoeffRing, ExtensionRankAndRoot) {
    const RingPtr R = CoeffRing::base(FqField::make(2, 1), 2);
    // T^3 + pi T + pi is Eisenstein, so its root generates a rank-3 extension
    const RingPoly g(R, {R->pi(), R->pi(), R->zero(), R->one()});
    const RingPtr S = ring_extend(R, g, 100);
    EXPECT_EQ(S->rank(), 3u);
    EXPECT_TRUE(g.lift_to(S).eval(S->gen()).is_zero());
    EXPECT_TRUE(S->gen().is_nilpotent());
}

TEST(CoeffRing, RankCapIsEnforced) {
    const RingPtr R = CoeffRing::base(FqField::make(2, 1), 2);
    const RingPoly g(R, {R->pi(), R->zero(), R->zero(), R->zero(), R->one()});
    EXPECT_THROW(ring_extend(R, g, 3), CapExceeded);
}

TEST(CoeffRing, ExactDivisionReportsRemainder) {
    const RingPtr R = CoeffRing::base(FqField::make(3, 1), 2);
    const RingPoly x = RingPoly::x(R);
    const RingPoly f = x * x + RingPoly::constant(R->one());
    const RingPoly g = x - RingPoly::constant(R->one());
    try {
        (void)poly_divide_exact(f, g);
        FAIL() << "division should not be exact";
    } catch (const NonExactDivision& e) {
        EXPECT_EQ(e.degree(), 0);
        EXPECT_EQ(e.coeff().at(0), 2u);  // remainder f(1) = 2
    }
    EXPECT_EQ(poly_divide_exact(f * g, g), f);
}

TEST(FormalModule, PiSeriesShape) {
    const FormalOModule X = module_of(2, 3, 2);
    const RingPoly& P = X.pi_poly;
    EXPECT_EQ(P.degree(), 8);
    EXPECT_TRUE(P.is_q_linear(2));
    EXPECT_EQ(P.coeff(1), X.ring->pi());
    EXPECT_TRUE(P.is_monic());
}

TEST(FormalModule, EndomorphismsCommute) {
    const FormalOModule X = module_of(3, 2, 3);
    const AdditivePoly a = alpha_additive(X, {2, 1});
    const AdditivePoly b = alpha_additive(X, {1, 0, 2});
    EXPECT_EQ(a.compose(b), b.compose(a));
    EXPECT_EQ(a.compose(X.pi_additive()), X.pi_additive().compose(a));
    EXPECT_EQ(pi_power_additive(X, 2), X.pi_additive().compose(X.pi_additive()));
}

TEST(FormalModule, GlOrderMatchesBruteForce) {
    for (auto [n, q, m] : std::vector<std::tuple<unsigned, unsigned, int>>{{1, 2, 3}, {2, 2, 1}, {2, 3, 1}, {2, 2, 2}, {3, 2, 1}})
        EXPECT_EQ(gl_order(n, q, m), brute_gl_order(n, q, m)) << n << " " << q << " " << m;
}

TEST(Tower, RanksAndStages) {
    const TowerAlgebra T = build_tower(module_of(2, 2, 2), 1);
    EXPECT_EQ(T.stage_degrees(), (std::vector<std::size_t>{3, 2}));
    EXPECT_EQ(T.rank(), 6u);
    EXPECT_TRUE(check_level(T.phi).ok);
    const TowerAlgebra U = build_tower(module_of(2, 1, 3), 2);
    EXPECT_EQ(U.rank(), gl_order(1, 2, 2));
    EXPECT_TRUE(check_level(U.phi).ok);
}

TEST(Tower, CapExceeded) { EXPECT_THROW(build_tower(module_of(3, 3, 2), 1, 5000), CapExceeded); }

TEST(Tower, JsonRoundTrip) {
    const TowerAlgebra T = build_tower(module_of(3, 2, 2), 1);
    const auto j = T.to_json();
    const TowerAlgebra U = TowerAlgebra::from_json(j);
    EXPECT_EQ(U.to_json().dump(), j.dump());
    EXPECT_TRUE(check_level(U.phi).ok);
}

TEST(Tower, PerturbedLevelIsRejected) {
    TowerAlgebra T = build_tower(module_of(2, 2, 2), 1);
    T.phi.values[1] += T.top()->pi();
    const LevelCheck c = check_level(T.phi);
    EXPECT_FALSE(c.ok);
    EXPECT_GE(c.witness_degree, 0);
    EXPECT_FALSE(c.relation.empty());
}

TEST(Tower, QuotientByLineIsAnIsogeny) {
    const TowerAlgebra T = build_tower(module_of(2, 2, 2), 1);
    // the line spanned by e_1 = (1, 0) in (o/pi)^2
    const std::vector<std::size_t> A = {0, T.phi.index({1, 0})};
    const QuotientResult r = quotient_by_subgroup(T.phi.module, T.phi, A);
    EXPECT_EQ(r.psi.degree(), 2);
    EXPECT_TRUE(r.psi.is_q_linear(2));
    EXPECT_TRUE(r.psi.eval(T.phi.at({1, 0})).is_zero());
    EXPECT_EQ(r.module.n, 2u);
    // psi o [pi]_X = [pi]_Y o psi
    const RingPoly lhs = r.psi.compose(r.psi.ring() == T.phi.module.ring ? T.phi.module.pi_poly : T.phi.module.lift_to(r.psi.ring()).pi_poly);
    const RingPoly rhs = r.module.pi_poly.compose(r.psi);
    EXPECT_EQ(lhs, rhs);
}
