#include "properties.hpp"

#include <functional>
#include <random>

#include "instances.hpp"
#include "ltower/chain_ring.hpp"
#include "ltower/coeff_ring.hpp"
#include "ltower/cyclotomic.hpp"
#include "ltower/errors.hpp"
#include "ltower/formal_module.hpp"
#include "ltower/lattice.hpp"
#include "ltower/period.hpp"
#include "ltower/rep_theory.hpp"
#include "ltower/strata.hpp"

namespace ltower::testing {

namespace {

template <class T>
struct RingModel {
    std::function<T(std::mt19937_64&)> random;
    std::function<T(const T&, const T&)> add, mul;
    std::function<T(const T&)> neg;
    std::function<bool(const T&, const T&)> eq;
    T zero, one;
    bool commutative = true;
    // optional: a * inverse(a) == 1 for units
    std::function<bool(const T&)> inverse_ok;
};

template <class T>
PropertyResult run_ring(const std::string& name, const RingModel<T>& R, std::mt19937_64& rng, int cases) {
    PropertyResult res{name, cases, 0, {}};
    auto note = [&](const char* law, int i) {
        if (res.failures++ == 0) res.first_failure = std::string(law) + " at case " + std::to_string(i);
    };
    for (int i = 0; i < cases; ++i) try {
        const T a = R.random(rng), b = R.random(rng), c = R.random(rng);
        if (!R.eq(R.add(a, R.add(b, c)), R.add(R.add(a, b), c))) note("additive associativity", i);
        if (!R.eq(R.add(a, b), R.add(b, a))) note("additive commutativity", i);
        if (!R.eq(R.mul(a, R.mul(b, c)), R.mul(R.mul(a, b), c))) note("multiplicative associativity", i);
        if (!R.eq(R.mul(a, R.add(b, c)), R.add(R.mul(a, b), R.mul(a, c)))) note("left distributivity", i);
        if (!R.eq(R.mul(R.add(a, b), c), R.add(R.mul(a, c), R.mul(b, c)))) note("right distributivity", i);
        if (!R.eq(R.add(a, R.zero), a)) note("additive identity", i);
        if (!R.eq(R.mul(a, R.one), a) || !R.eq(R.mul(R.one, a), a)) note("multiplicative identity", i);
        if (!R.eq(R.add(a, R.neg(a)), R.zero)) note("additive inverse", i);
        if (R.commutative && !R.eq(R.mul(a, b), R.mul(b, a))) note("multiplicative commutativity", i);
        if (R.inverse_ok && !R.inverse_ok(a)) note("multiplicative inverse", i);
    } catch (const std::exception& e) {
        if (res.failures++ == 0) res.first_failure = std::string("exception at case ") + std::to_string(i) + ": " + e.what();
    }
    return res;
}

RingModel<Fq> field_model(const FieldPtr& F) {
    RingModel<Fq> R;
    R.random = [F](std::mt19937_64& g) { return static_cast<Fq>(g() % F->q()); };
    R.add = [F](Fq a, Fq b) { return F->add(a, b); };
    R.mul = [F](Fq a, Fq b) { return F->mul(a, b); };
    R.neg = [F](Fq a) { return F->neg(a); };
    R.eq = [](Fq a, Fq b) { return a == b; };
    R.zero = 0;
    R.one = 1;
    R.inverse_ok = [F](Fq a) { return a == 0 || F->mul(a, F->inv(a)) == 1; };
    return R;
}

RingModel<std::uint32_t> chain_model(std::shared_ptr<const ChainRing> C) {
    RingModel<std::uint32_t> R;
    R.random = [C](std::mt19937_64& g) { return static_cast<std::uint32_t>(g() % C->size()); };
    R.add = [C](std::uint32_t a, std::uint32_t b) { return C->add(a, b); };
    R.mul = [C](std::uint32_t a, std::uint32_t b) { return C->mul(a, b); };
    R.neg = [C](std::uint32_t a) { return C->neg(a); };
    R.eq = [](std::uint32_t a, std::uint32_t b) { return a == b; };
    R.zero = 0;
    R.one = 1;
    R.inverse_ok = [C](std::uint32_t a) { return !C->is_unit(a) || C->mul(a, C->inv(a)) == 1; };
    return R;
}

RingElem random_elem(const RingPtr& ring, std::mt19937_64& g) {
    std::vector<Fq> c(ring->dim());
    for (auto& x : c) x = static_cast<Fq>(g() % ring->field()->q());
    return RingElem(ring, c);
}

RingModel<RingElem> coeff_model(const RingPtr& ring) {
    RingModel<RingElem> R;
    R.random = [ring](std::mt19937_64& g) { return random_elem(ring, g); };
    R.add = [](const RingElem& a, const RingElem& b) { return a + b; };
    R.mul = [](const RingElem& a, const RingElem& b) { return a * b; };
    R.neg = [](const RingElem& a) { return -a; };
    R.eq = [](const RingElem& a, const RingElem& b) { return a == b; };
    R.zero = ring->zero();
    R.one = ring->one();
    R.inverse_ok = [](const RingElem& a) { return !a.is_unit() || a * a.inverse() == a.ring()->one(); };
    return R;
}

Laurent random_laurent(const FieldPtr& F, std::mt19937_64& g, int vmin, int vmax, int len) {
    const int v = vmin + static_cast<int>(g() % static_cast<unsigned>(vmax - vmin + 1));
    std::vector<Fq> d(static_cast<std::size_t>(g() % static_cast<unsigned>(len + 1)));
    for (auto& x : d) x = static_cast<Fq>(g() % F->q());
    return Laurent(F, v, d);
}

RingModel<Laurent> laurent_model(const FieldPtr& F) {
    RingModel<Laurent> R;
    R.random = [F](std::mt19937_64& g) { return random_laurent(F, g, -4, 4, 5); };
    R.add = [](const Laurent& a, const Laurent& b) { return a + b; };
    R.mul = [](const Laurent& a, const Laurent& b) { return a * b; };
    R.neg = [](const Laurent& a) { return -a; };
    R.eq = [](const Laurent& a, const Laurent& b) { return a == b; };
    R.zero = Laurent::zero(F);
    R.one = Laurent::constant(F, 1);
    R.inverse_ok = [F](const Laurent& a) {
        if (a.is_zero()) return true;
        const Laurent d = a * a.inverse(20) - Laurent::constant(F, 1);
        return d.is_zero() && d.precision() >= 20;
    };
    return R;
}

Cyclotomic random_cyclotomic(unsigned N, std::mt19937_64& g) {
    Cyclotomic x(N);
    const int terms = 1 + static_cast<int>(g() % 4);
    for (int t = 0; t < terms; ++t) {
        const Rational r(static_cast<long long>(g() % 11) - 5, static_cast<long long>(1 + g() % 4));
        x += Cyclotomic::zeta(N, static_cast<long long>(g() % (2 * N))) * r;
    }
    return x;
}

RingModel<Cyclotomic> cyclotomic_model(unsigned N) {
    RingModel<Cyclotomic> R;
    R.random = [N](std::mt19937_64& g) { return random_cyclotomic(N, g); };
    R.add = [](const Cyclotomic& a, const Cyclotomic& b) { return a + b; };
    R.mul = [](const Cyclotomic& a, const Cyclotomic& b) { return a * b; };
    R.neg = [](const Cyclotomic& a) { return -a; };
    R.eq = [](const Cyclotomic& a, const Cyclotomic& b) { return a == b; };
    R.zero = Cyclotomic(N);
    R.one = Cyclotomic::from_int(1, N);
    return R;
}

RingModel<DivisionAlgebra::Elem> algebra_model(std::shared_ptr<const DivisionAlgebra> B) {
    RingModel<DivisionAlgebra::Elem> R;
    R.random = [B](std::mt19937_64& g) {
        // include Pi-multiples and negative pi-powers
        DivisionAlgebra::Elem x = B->random(g, 3);
        if (g() % 2) x = B->mul(x, B->uniformizer());
        if (g() % 3 == 0) {
            DivisionAlgebra::Elem s = B->zero();
            s.x[0] = B->to_ext(Laurent::pi_power(B->base(), -1));
            x = B->mul(s, x);
        }
        return x;
    };
    R.add = [B](const auto& a, const auto& b) { return B->add(a, b); };
    R.mul = [B](const auto& a, const auto& b) { return B->mul(a, b); };
    R.neg = [B](const auto& a) {
        DivisionAlgebra::Elem m = B->zero();
        m.x[0] = B->to_ext(Laurent::from_int(B->base(), -1));
        return B->mul(m, a);
    };
    R.eq = [B](const auto& a, const auto& b) { return B->equal(a, b); };
    R.zero = B->zero();
    R.one = B->one();
    R.commutative = false;
    return R;
}

RingModel<LocalMatrix> matrix_model(const FieldPtr& F, int n) {
    RingModel<LocalMatrix> R;
    R.random = [F, n](std::mt19937_64& g) {
        LocalMatrix M(F, n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) M.at(i, j) = random_laurent(F, g, -2, 2, 3);
        return M;
    };
    R.add = [](const LocalMatrix& a, const LocalMatrix& b) { return a + b; };
    R.mul = [](const LocalMatrix& a, const LocalMatrix& b) { return a * b; };
    R.neg = [F, n](const LocalMatrix& a) { return a * Laurent::from_int(F, -1); };
    R.eq = [](const LocalMatrix& a, const LocalMatrix& b) { return a == b; };
    R.zero = LocalMatrix(F, n, n);
    R.one = LocalMatrix::identity(F, n);
    R.commutative = false;
    return R;
}

TowerAlgebra small_tower(unsigned q, unsigned n, int m) {
    const FieldPtr F = FqField::make(q, 1);
    const RingPtr R = CoeffRing::base(F, m + 1);
    const FormalOModule X = make_module(R, q, n, std::vector<RingElem>(n - 1, R->pi()));
    return build_tower(X, m);
}

}  // namespace

std::vector<PropertyResult> ring_axiom_suites(std::uint64_t seed, int cases) {
    std::mt19937_64 rng(seed);
    std::vector<PropertyResult> out;
    for (auto [p, f] : std::vector<std::pair<unsigned, unsigned>>{{2, 1}, {3, 1}, {2, 2}, {2, 3}, {3, 2}, {5, 2}})
        out.push_back(run_ring("F_" + std::to_string(FqField::make(p, f)->q()), field_model(FqField::make(p, f)), rng, cases));
    for (auto [q, m] : std::vector<std::pair<unsigned, int>>{{2, 1}, {2, 3}, {3, 2}, {4, 2}}) {
        unsigned p = 0, f = 0;
        prime_power(q, p, f);
        out.push_back(run_ring("o/pi^" + std::to_string(m) + " over F_" + std::to_string(q),
                               chain_model(std::make_shared<const ChainRing>(FqField::make(p, f), m)), rng, cases));
    }
    out.push_back(run_ring("F_2[pi]/pi^3", coeff_model(CoeffRing::base(FqField::make(2, 1), 3)), rng, cases));
    out.push_back(run_ring("F_3[pi, w]/(pi^2, w^3)", coeff_model(CoeffRing::base(FqField::make(3, 1), 2, {3})), rng, cases));
    out.push_back(run_ring("F_4[pi, w1, w2]/(pi^2, w1^2, w2^2)", coeff_model(CoeffRing::base(FqField::make(2, 2), 2, {2, 2})), rng, cases));
    out.push_back(run_ring("tower top q=2 n=2 m=1", coeff_model(small_tower(2, 2, 1).top()), rng, cases));
    out.push_back(run_ring("tower top q=2 n=1 m=2", coeff_model(small_tower(2, 1, 2).top()), rng, cases));
    for (auto [p, f] : std::vector<std::pair<unsigned, unsigned>>{{2, 1}, {3, 1}, {2, 2}})
        out.push_back(run_ring("F_" + std::to_string(FqField::make(p, f)->q()) + "((pi))", laurent_model(FqField::make(p, f)), rng, cases));
    for (unsigned N : {1u, 4u, 5u, 12u}) out.push_back(run_ring("Q(zeta_" + std::to_string(N) + ")", cyclotomic_model(N), rng, cases));
    for (auto [q, n] : std::vector<std::pair<unsigned, unsigned>>{{2, 2}, {3, 2}, {2, 3}})
        out.push_back(run_ring("division algebra q=" + std::to_string(q) + " n=" + std::to_string(n),
                               algebra_model(std::make_shared<const DivisionAlgebra>(q, n)), rng, cases));
    out.push_back(run_ring("M_2(F_3((pi)))", matrix_model(FqField::make(3, 1), 2), rng, cases));
    return out;
}

std::vector<PropertyResult> normal_form_suites(std::uint64_t seed, int cases) {
    std::mt19937_64 rng(seed);
    std::vector<PropertyResult> out;
    auto suite = [&](const std::string& name, const std::function<bool(int)>& body) {
        PropertyResult r{name, cases, 0, {}};
        for (int i = 0; i < cases; ++i) {
            try {
                if (!body(i) && r.failures++ == 0) r.first_failure = "case " + std::to_string(i);
            } catch (const std::exception& e) {
                if (r.failures++ == 0) r.first_failure = "exception at case " + std::to_string(i) + ": " + e.what();
            }
        }
        out.push_back(r);
    };

    for (auto [q, n] : std::vector<std::pair<unsigned, int>>{{2, 2}, {3, 2}, {2, 3}}) {
        const FieldPtr F = FqField::make(q, 1);
        suite("lattice HNF q=" + std::to_string(q) + " n=" + std::to_string(n), [&](int) {
            LocalMatrix B(F, n, n);
            do {
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) B.at(i, j) = random_laurent(F, rng, -1, 2, 2);
            } while (B.det().is_zero());
            const Lattice L = Lattice::from_basis(B);
            const Lattice again = Lattice::from_hnf(L.hnf());
            const Lattice rebased = Lattice::from_basis(B * random_k0(F, n, rng));
            const Lattice N1 = L.normalized();
            return again == L && again.hnf() == L.hnf() && rebased == L && N1.normalized() == N1 && N1.is_normalized();
        });
    }
    for (auto [q, m] : std::vector<std::pair<unsigned, int>>{{2, 1}, {2, 2}, {3, 2}}) {
        const ChainRing R(FqField::make(q, 1), m);
        suite("summand echelon form q=" + std::to_string(q) + " m=" + std::to_string(m), [&](int i) {
            const int n = 3, h = 1 + i % 2;
            ChainMat G(n, h);
            for (auto& x : G.a) x = static_cast<std::uint32_t>(rng() % R.size());
            const auto A = canonical_summand(R, G);
            if (!A) return true;  // not a free direct summand
            ChainMat U(h, h);
            do {
                for (auto& x : U.a) x = static_cast<std::uint32_t>(rng() % R.size());
            } while (!mat_invertible(R, U));
            const auto again = canonical_summand(R, A->gens);
            const auto moved = canonical_summand(R, mat_mul(R, G, U));
            return again && moved && *again == *A && *moved == *A;
        });
    }
    for (auto [p, f] : std::vector<std::pair<unsigned, unsigned>>{{2, 1}, {3, 1}}) {
        const FieldPtr F = FqField::make(p, f);
        suite("Laurent normalization over F_" + std::to_string(F->q()), [&](int) {
            const Laurent x = random_laurent(F, rng, -4, 4, 5);
            // leading and trailing zero digits must not change the element
            std::vector<Fq> padded(2, 0);
            padded.insert(padded.end(), x.raw().begin(), x.raw().end());
            padded.push_back(0);
            const Laurent y(F, x.first_index() - 2, padded);
            const Laurent z(F, y.first_index(), y.raw(), y.precision());
            return y == x && y.first_index() == x.first_index() && y.raw() == x.raw() && z.raw() == y.raw();
        });
    }
    {
        const RingPtr ring = small_tower(2, 2, 1).top();
        suite("tower ring coordinates and monomials", [&](int) {
            const RingElem x = random_elem(ring, rng);
            return ring->from_coords(x.coords()) == x && ring->from_monomials(ring->to_monomials(x)) == x;
        });
    }
    suite("cyclotomic reduction", [&](int i) {
        const unsigned N = std::vector<unsigned>{3, 4, 5, 12}[static_cast<std::size_t>(i % 4)];
        const Cyclotomic x = random_cyclotomic(N, rng);
        const Cyclotomic lifted = x.lift(2 * N);
        return lifted == x && (lifted - x).is_zero() && (x.conj().conj() == x);
    });
    return out;
}

std::vector<PropertyResult> serialization_suites(std::uint64_t seed, int cases) {
    std::mt19937_64 rng(seed);
    std::vector<PropertyResult> out;
    auto suite = [&](const std::string& name, int n, const std::function<bool(int)>& body) {
        PropertyResult r{name, n, 0, {}};
        for (int i = 0; i < n; ++i) {
            bool ok = false;
            try {
                ok = body(i);
            } catch (const std::exception& e) {
                if (r.failures == 0) r.first_failure = e.what();
            }
            if (!ok && r.failures++ == 0 && r.first_failure.empty()) r.first_failure = "case " + std::to_string(i);
        }
        out.push_back(r);
    };
    for (auto [p, f] : std::vector<std::pair<unsigned, unsigned>>{{2, 1}, {3, 1}, {2, 2}}) {
        const FieldPtr F = FqField::make(p, f);
        suite("Laurent JSON over F_" + std::to_string(F->q()), cases, [&](int i) {
            Laurent x = random_laurent(F, rng, -5, 5, 6);
            if (i % 3 == 0) x = x.truncate(x.first_index() + 3);
            const auto j = laurent_to_json(x);
            const Laurent y = laurent_from_json(F, j);
            return laurent_to_json(y).dump() == j.dump() && y.precision() == x.precision() && (x.is_exact() ? y == x : true);
        });
    }
    suite("cyclotomic JSON", cases, [&](int i) {
        const unsigned N = std::vector<unsigned>{1, 3, 8, 12}[static_cast<std::size_t>(i % 4)];
        const Cyclotomic x = random_cyclotomic(N, rng);
        const Cyclotomic y = Cyclotomic::from_json(x.to_json());
        return y == x && y.to_json().dump() == x.to_json().dump();
    });
    for (auto [q, n, m] : std::vector<std::tuple<unsigned, unsigned, int>>{{2, 2, 1}, {2, 1, 2}, {3, 2, 1}, {2, 3, 1}}) {
        suite("tower JSON q=" + std::to_string(q) + " n=" + std::to_string(n) + " m=" + std::to_string(m), 1, [&](int) {
            const TowerAlgebra T = small_tower(q, n, m);
            const std::string a = T.to_json().dump();
            const TowerAlgebra U = TowerAlgebra::from_json(nlohmann::json::parse(a));
            return U.to_json().dump() == a && check_level(U.phi).ok && U.rank() == T.rank();
        });
    }
    suite("coefficient ring JSON", 1, [&](int) {
        const RingPtr R = small_tower(2, 2, 1).top();
        const std::string a = R->to_json().dump();
        return CoeffRing::from_json(nlohmann::json::parse(a))->to_json().dump() == a;
    });
    for (const auto& G : {group_symmetric(3), group_gl(2, 3, 1), group_quaternion_quotient(2, 1)}) {
        suite("character table JSON " + G->name(), 1, [&](int) {
            const CharacterTable T = character_table(G);
            const std::string a = T.to_json().dump();
            const CharacterTable U = attach_group(G, CharacterTable::from_json(nlohmann::json::parse(a)));
            return U.to_json().dump() == a && U.orthogonality_holds() && U.class_of == T.class_of;
        });
    }
    return out;
}

}  // namespace ltower::testing
