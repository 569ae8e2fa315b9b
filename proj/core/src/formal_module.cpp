#include "ltower/formal_module.hpp"

#include <algorithm>
#include <set>

#include "ltower/errors.hpp"

namespace ltower {

// ---------------------------------------------------------------------------
// AdditivePoly

AdditivePoly::AdditivePoly(RingPtr ring, unsigned q, std::vector<RingElem> coeffs)
    : ring_(std::move(ring)), q_(q) {
    for (auto& c : coeffs) a_.push_back(ring_->lift(c));
    trim();
}

AdditivePoly AdditivePoly::identity(RingPtr ring, unsigned q) {
    auto one = ring->one();
    return AdditivePoly(std::move(ring), q, {one});
}

void AdditivePoly::trim() {
    while (!a_.empty() && a_.back().is_zero()) a_.pop_back();
}

RingElem AdditivePoly::eval(const RingElem& x) const {
    RingElem acc = ring_->zero();
    RingElem p = ring_->lift(x);
    for (std::size_t i = 0; i < a_.size(); ++i) {
        if (!a_[i].is_zero()) acc += a_[i] * p;
        if (i + 1 < a_.size()) p = p.pow(q_);
    }
    return acc;
}

AdditivePoly AdditivePoly::compose(const AdditivePoly& inner) const {
    if (a_.empty() || inner.a_.empty()) return AdditivePoly(ring_, q_, {});
    std::vector<RingElem> out(a_.size() + inner.a_.size() - 1, ring_->zero());
    std::vector<RingElem> b = inner.a_;  // b_j^{q^i}, updated as i grows
    for (std::size_t i = 0; i < a_.size(); ++i) {
        if (!a_[i].is_zero())
            for (std::size_t j = 0; j < b.size(); ++j)
                if (!b[j].is_zero()) out[i + j] += a_[i] * b[j];
        if (i + 1 < a_.size())
            for (auto& x : b) x = x.pow(q_);
    }
    return AdditivePoly(ring_, q_, std::move(out));
}

AdditivePoly AdditivePoly::operator+(const AdditivePoly& o) const {
    std::vector<RingElem> out(std::max(a_.size(), o.a_.size()), ring_->zero());
    for (std::size_t i = 0; i < a_.size(); ++i) out[i] += a_[i];
    for (std::size_t i = 0; i < o.a_.size(); ++i) out[i] += o.a_[i];
    return AdditivePoly(ring_, q_, std::move(out));
}

AdditivePoly AdditivePoly::operator*(const RingElem& c) const {
    std::vector<RingElem> out;
    for (const auto& x : a_) out.push_back(x * c);
    return AdditivePoly(ring_, q_, std::move(out));
}

bool AdditivePoly::operator==(const AdditivePoly& o) const {
    if (a_.size() != o.a_.size()) return false;
    for (std::size_t i = 0; i < a_.size(); ++i)
        if (a_[i] != o.a_[i]) return false;
    return true;
}

RingPoly AdditivePoly::dense(std::size_t degree_cap) const {
    if (a_.empty()) return RingPoly(ring_);
    std::size_t deg = 1;
    for (std::size_t i = 1; i < a_.size(); ++i) {
        deg *= q_;
        if (deg > degree_cap) throw CapExceeded("polynomial degree exceeds cap " + std::to_string(degree_cap));
    }
    std::vector<RingElem> c(deg + 1, ring_->zero());
    std::size_t e = 1;
    for (std::size_t i = 0; i < a_.size(); ++i) {
        c[e] = a_[i];
        e *= q_;
    }
    return RingPoly(ring_, std::move(c));
}

// ---------------------------------------------------------------------------
// FormalOModule

AdditivePoly FormalOModule::pi_additive() const { return AdditivePoly(ring, q, c); }

FormalOModule FormalOModule::lift_to(const RingPtr& r) const {
    FormalOModule X = *this;
    X.ring = r;
    for (auto& x : X.c) x = r->lift(x);
    X.pi_poly = pi_poly.lift_to(r);
    return X;
}

FormalOModule make_module(const RingPtr& ring, unsigned q, unsigned n, const std::vector<RingElem>& u) {
    unsigned p = 0, fq = 0;
    if (!prime_power(q, p, fq)) throw PreconditionError("q = " + std::to_string(q) + " is not a prime power");
    if (p != ring->field()->p()) throw PreconditionError("q is not a power of the ring characteristic");
    if (ring->field()->f() % fq != 0) throw PreconditionError("F_q is not contained in the residue field of the ring");
    if (n < 1) throw PreconditionError("height n must be positive");
    if (u.size() + 1 != n)
        throw PreconditionError("expected " + std::to_string(n - 1) + " u-coefficients, got " + std::to_string(u.size()));
    FormalOModule X;
    X.ring = ring;
    X.q = q;
    X.n = n;
    X.fq = fq == ring->field()->f() ? ring->field() : FqField::make(p, fq);
    X.embed = std::make_shared<const FieldEmbedding>(X.fq, ring->field());
    X.c.push_back(ring->pi());
    for (const auto& x : u) X.c.push_back(ring->lift(x));
    X.c.push_back(ring->one());
    X.pi_poly = X.pi_additive().dense();
    return X;
}

AdditivePoly pi_power_additive(const FormalOModule& X, int m) {
    if (m < 0) throw PreconditionError("pi_power requires m >= 0");
    AdditivePoly acc = AdditivePoly::identity(X.ring, X.q);
    const AdditivePoly p = X.pi_additive();
    for (int i = 0; i < m; ++i) acc = p.compose(acc);
    return acc;
}

RingPoly pi_power(const FormalOModule& X, int m, std::size_t degree_cap) {
    if (m < 1) throw PreconditionError("pi_power requires m >= 1");
    std::size_t deg = 1;
    for (unsigned i = 0; i < X.n * static_cast<unsigned>(m); ++i) {
        deg *= X.q;
        if (deg > degree_cap) throw CapExceeded("[pi^m] degree exceeds cap " + std::to_string(degree_cap));
    }
    return pi_power_additive(X, m).dense(degree_cap);
}

AdditivePoly alpha_additive(const FormalOModule& X, const std::vector<Fq>& alpha) {
    AdditivePoly acc(X.ring, X.q, {});
    AdditivePoly power = AdditivePoly::identity(X.ring, X.q);
    const AdditivePoly p = X.pi_additive();
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (alpha[i] >= X.fq->q()) throw PreconditionError("alpha coefficient is not an element of F_q");
        if (alpha[i] != 0) acc = acc + power * X.ring->constant(X.embed->to_big(alpha[i]));
        if (i + 1 < alpha.size()) power = p.compose(power);
    }
    return acc;
}

RingPoly alpha_mult(const FormalOModule& X, const std::vector<Fq>& alpha, std::size_t degree_cap) {
    return alpha_additive(X, alpha).dense(degree_cap);
}

// ---------------------------------------------------------------------------
// LevelStructure

std::size_t LevelStructure::index(const std::vector<std::uint32_t>& a) const {
    std::size_t idx = 0, place = 1;
    for (std::size_t k = 0; k < a.size(); ++k) {
        idx += a[k] * place;
        place *= domain->size();
    }
    return idx;
}

std::vector<std::uint32_t> LevelStructure::vector_at(std::size_t idx) const {
    std::vector<std::uint32_t> a(module.n);
    for (unsigned k = 0; k < module.n; ++k) {
        a[k] = static_cast<std::uint32_t>(idx % domain->size());
        idx /= domain->size();
    }
    return a;
}

namespace {

std::vector<std::uint32_t> vec_add(const ChainRing& R, const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
    std::vector<std::uint32_t> c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = R.add(a[i], b[i]);
    return c;
}

std::vector<std::uint32_t> vec_scale(const ChainRing& R, std::uint32_t s, const std::vector<std::uint32_t>& a) {
    std::vector<std::uint32_t> c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = R.mul(s, a[i]);
    return c;
}

std::vector<Fq> diff_witness(const RingElem& a, const RingElem& b) { return (a - b).coords(); }

}  // namespace

LevelCheck check_level(const LevelStructure& phi) {
    LevelCheck res;
    const ChainRing& R = *phi.domain;
    const FormalOModule& X = phi.module;
    const unsigned n = X.n;
    const std::size_t total = phi.values.size();
    std::size_t expect = 1;
    for (unsigned k = 0; k < n; ++k) expect *= R.size();
    if (total != expect) {
        res.ok = false;
        res.relation = "value table has wrong size";
        return res;
    }
    if (!phi.values[0].is_zero()) {
        res.ok = false;
        res.relation = "values(0) != 0";
        res.witness = phi.values[0].coords();
        return res;
    }
    // Drinfeld divisibility on the pi-torsion points pi^{m-1} c, c in F_q^n.
    {
        RingPoly prod = RingPoly::constant(X.ring->one());
        std::size_t tor = 1;
        for (unsigned k = 0; k < n; ++k) tor *= R.q();
        for (std::size_t code = 0; code < tor; ++code) {
            std::vector<std::uint32_t> a(n);
            std::size_t c = code;
            for (unsigned k = 0; k < n; ++k) {
                a[k] = R.shift_up(static_cast<std::uint32_t>(c % R.q()), phi.m - 1);
                c /= R.q();
            }
            RingPoly lin(X.ring, {-phi.at(a), X.ring->one()});
            prod = prod * lin;
        }
        try {
            (void)poly_divide_exact(X.pi_poly, prod);
        } catch (const NonExactDivision& e) {
            res.ok = false;
            res.relation = "prod_{a in pi-torsion}(T - phi(a)) does not divide [pi](T)";
            res.witness_degree = e.degree();
            res.witness = e.coeff();
            return res;
        }
    }
    // Homomorphism property on standard generators.
    const std::uint32_t pi = R.pi_power(1);
    const std::uint32_t gen = R.from_fq(X.fq->primitive_root());
    const RingElem gen_big = X.ring->constant(X.embed->to_big(X.fq->primitive_root()));
    std::vector<std::vector<std::uint32_t>> basis;
    for (unsigned j = 0; j < n; ++j) {
        std::vector<std::uint32_t> e(n, 0);
        e[j] = 1;
        basis.push_back(e);
    }
    for (std::size_t idx = 0; idx < total; ++idx) {
        const auto a = phi.vector_at(idx);
        const RingElem& va = phi.values[idx];
        for (unsigned j = 0; j < n; ++j) {
            const RingElem& vs = phi.at(vec_add(R, a, basis[j]));
            const RingElem expect_sum = va + phi.at(basis[j]);
            if (vs != expect_sum) {
                res.ok = false;
                res.relation = "values(a + e_" + std::to_string(j + 1) + ") != values(a) + values(e_" + std::to_string(j + 1) + ") at a = #" + std::to_string(idx);
                res.witness = diff_witness(vs, expect_sum);
                return res;
            }
        }
        const RingElem vp = phi.at(vec_scale(R, pi, a));
        const RingElem expect_pi = X.pi_poly.eval(va);
        if (vp != expect_pi) {
            res.ok = false;
            res.relation = "values(pi a) != [pi](values(a)) at a = #" + std::to_string(idx);
            res.witness = diff_witness(vp, expect_pi);
            return res;
        }
        const RingElem vc = phi.at(vec_scale(R, gen, a));
        const RingElem expect_c = gen_big * va;
        if (vc != expect_c) {
            res.ok = false;
            res.relation = "values(c a) != c values(a) at a = #" + std::to_string(idx);
            res.witness = diff_witness(vc, expect_c);
            return res;
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// Tower

std::uint64_t gl_order(unsigned n, unsigned q, int m) {
    std::uint64_t qn = 1;
    for (unsigned i = 0; i < n; ++i) qn *= q;
    std::uint64_t order = 1, qi = 1;
    for (unsigned i = 0; i < n; ++i) {
        order *= qn - qi;
        qi *= q;
    }
    for (int k = 1; k < m; ++k)
        for (unsigned i = 0; i < n * n; ++i) order *= q;
    return order;
}

std::vector<std::size_t> TowerAlgebra::stage_degrees() const {
    std::vector<std::size_t> d;
    for (const auto& s : provenance) d.push_back(s.degree);
    return d;
}

TowerAlgebra build_tower(const FormalOModule& X, int m, std::size_t rank_cap) {
    if (m < 1) throw PreconditionError("tower level must be at least 1");
    const RingPtr base = X.ring;
    if (base->precision() < m + 1)
        throw PreconditionError("build_tower at level " + std::to_string(m) + " needs pi-precision >= " + std::to_string(m + 1));
    for (unsigned i = 1; i < X.n; ++i)
        if (!X.c[i].is_nilpotent())
            throw PreconditionError("u_" + std::to_string(i) + " must lie in the maximal ideal of the base");
    const std::uint64_t target = gl_order(X.n, X.q, m);
    if (target * base->rank() > rank_cap)
        throw CapExceeded("tower rank |GL_" + std::to_string(X.n) + "(o/pi^" + std::to_string(m) + ")| = " +
                          std::to_string(target) + " exceeds rank cap " + std::to_string(rank_cap));

    const unsigned n = X.n, q = X.q;
    TowerAlgebra T;
    T.base = base;
    T.m = m;
    RingPtr R = base;
    FormalOModule Xr = X;

    // Level 1: values on F_q^n, index = sum_k c_k q^k.
    std::size_t qn = 1;
    for (unsigned k = 0; k < n; ++k) qn *= q;
    std::vector<RingElem> vals(qn, R->zero());
    std::size_t span = 1;  // |V_i| = q^i
    for (unsigned i = 0; i < n; ++i) {
        RingPoly prod = RingPoly::constant(R->one());
        for (std::size_t a = 0; a < span; ++a) prod = prod * RingPoly(R, {-vals[a], R->one()});
        RingPoly f = poly_divide_exact(Xr.pi_poly, prod);
        R = ring_extend(R, f, rank_cap);
        T.rings.push_back(R);
        T.provenance.push_back({1, static_cast<int>(i), static_cast<std::size_t>(f.degree())});
        Xr = Xr.lift_to(R);
        for (auto& v : vals) v = R->lift(v);
        const RingElem theta = R->gen();
        for (Fq c = 1; c < q; ++c) {
            const RingElem ct = theta.scale(X.embed->to_big(c));
            for (std::size_t a = 0; a < span; ++a) vals[a + c * span] = vals[a] + ct;
        }
        span *= q;
    }

    auto dom = std::make_shared<const ChainRing>(X.fq, 1);
    // Higher levels: adjoin y_k with [pi](y_k) = phi_j(e_k).
    for (int j = 1; j < m; ++j) {
        auto next = std::make_shared<const ChainRing>(X.fq, j + 1);
        const std::size_t S = dom->size();
        std::vector<RingElem> ys;
        for (unsigned k = 0; k < n; ++k) {
            std::size_t ek = 1;
            for (unsigned t = 0; t < k; ++t) ek *= S;
            RingPoly g = Xr.pi_poly - RingPoly::constant(vals[ek]);
            R = ring_extend(R, g, rank_cap);
            T.rings.push_back(R);
            T.provenance.push_back({j + 1, static_cast<int>(k), static_cast<std::size_t>(g.degree())});
            Xr = Xr.lift_to(R);
            ys.push_back(R->gen());
        }
        for (auto& y : ys) y = R->lift(y);
        for (auto& v : vals) v = R->lift(v);
        const std::size_t S2 = next->size();
        std::size_t total = 1;
        for (unsigned k = 0; k < n; ++k) total *= S2;
        std::vector<RingElem> nv(total, R->zero());
        for (std::size_t idx = 0; idx < total; ++idx) {
            std::size_t c = idx, prev = 0, place = 1;
            RingElem acc = R->zero();
            for (unsigned k = 0; k < n; ++k) {
                const std::uint32_t code = static_cast<std::uint32_t>(c % S2);
                c /= S2;
                const Fq a0 = code % q;
                if (a0 != 0) acc += ys[k].scale(X.embed->to_big(a0));
                prev += (code / q) * place;
                place *= S;
            }
            nv[idx] = acc + vals[prev];
        }
        vals = std::move(nv);
        dom = next;
    }

    T.phi.module = Xr;
    T.phi.m = m;
    T.phi.domain = dom;
    T.phi.values = std::move(vals);
    return T;
}

nlohmann::json TowerAlgebra::to_json() const {
    nlohmann::json j;
    j["schema"] = 1;
    j["q"] = phi.module.q;
    j["n"] = phi.module.n;
    j["m"] = m;
    j["base_level"] = base->level();
    j["ring"] = top()->to_json();
    nlohmann::json c = nlohmann::json::array();
    for (const auto& x : phi.module.c) c.push_back(x.coords());
    j["pi_coeffs"] = c;
    nlohmann::json prov = nlohmann::json::array();
    for (const auto& s : provenance) prov.push_back({{"level", s.level}, {"basis", s.basis_index}, {"degree", s.degree}});
    j["provenance"] = prov;
    nlohmann::json tab = nlohmann::json::array();
    for (std::size_t i = 0; i < phi.values.size(); ++i) tab.push_back({{"a", phi.vector_at(i)}, {"value", phi.values[i].coords()}});
    j["phi"] = tab;
    return j;
}

TowerAlgebra TowerAlgebra::from_json(const nlohmann::json& j, std::size_t rank_cap) {
    if (j.at("schema").get<int>() != 1) throw PreconditionError("unsupported tower schema");
    RingPtr top = CoeffRing::from_json(j.at("ring"), rank_cap);
    const int base_level = j.at("base_level").get<int>();
    TowerAlgebra T;
    T.base = top->ancestor(base_level);
    for (int l = base_level + 1; l <= top->level(); ++l) T.rings.push_back(top->ancestor(l));
    T.m = j.at("m").get<int>();
    const unsigned q = j.at("q").get<unsigned>(), n = j.at("n").get<unsigned>();
    std::vector<RingElem> u;
    const auto& pc = j.at("pi_coeffs");
    for (unsigned i = 1; i < n; ++i) u.push_back(top->from_coords(pc.at(i).get<std::vector<Fq>>()));
    FormalOModule X = make_module(top, q, n, u);
    for (const auto& s : j.at("provenance"))
        T.provenance.push_back({s.at("level").get<int>(), s.at("basis").get<int>(), s.at("degree").get<std::size_t>()});
    T.phi.module = X;
    T.phi.m = T.m;
    T.phi.domain = std::make_shared<const ChainRing>(X.fq, T.m);
    const auto& tab = j.at("phi");
    T.phi.values.assign(tab.size(), top->zero());
    for (const auto& row : tab) {
        const auto a = row.at("a").get<std::vector<std::uint32_t>>();
        T.phi.values.at(T.phi.index(a)) = top->from_coords(row.at("value").get<std::vector<Fq>>());
    }
    return T;
}

// ---------------------------------------------------------------------------
// Quotients

RingPoly subgroup_polynomial(const LevelStructure& phi, const std::vector<std::size_t>& A) {
    const RingPtr& R = phi.module.ring;
    RingPoly prod = RingPoly::constant(R->one());
    for (std::size_t idx : A) prod = prod * RingPoly(R, {-phi.values.at(idx), R->one()});
    return prod;
}

QuotientResult quotient_by_subgroup(const FormalOModule& X0, const LevelStructure& phi, const std::vector<std::size_t>& A) {
    const ChainRing& D = *phi.domain;
    std::set<std::size_t> sub(A.begin(), A.end());
    if (sub.size() != A.size()) throw PreconditionError("subgroup list has duplicates");
    if (!sub.count(0)) throw PreconditionError("subgroup must contain 0");
    const std::uint32_t pi = D.pi_power(1), gen = X0.fq->primitive_root();
    for (std::size_t a : sub) {
        const auto va = phi.vector_at(a);
        if (!sub.count(phi.index(vec_scale(D, pi, va))) || !sub.count(phi.index(vec_scale(D, gen, va))))
            throw PreconditionError("A is not an o-submodule");
        for (std::size_t b : sub)
            if (!sub.count(phi.index(vec_add(D, va, phi.vector_at(b))))) throw PreconditionError("A is not closed under addition");
    }
    const RingPtr R = phi.module.ring;
    const FormalOModule X = X0.lift_to(R);
    const unsigned q = X.q, n = X.n;

    RingPoly psi = subgroup_polynomial(phi, A);
    if (!psi.is_q_linear(q)) throw NonLinearIsogeny("prod_{a in A}(T - phi(a)) is not F_q-linear");
    int t = 0;
    for (std::size_t s = 1; s < A.size(); s *= q) ++t;
    {
        std::size_t qt = 1;
        for (int i = 0; i < t; ++i) qt *= q;
        if (qt != A.size()) throw NonLinearIsogeny("|A| is not a power of q");
    }
    std::vector<RingElem> s;
    for (std::size_t e = 1, k = 0; k <= static_cast<std::size_t>(t); ++k, e *= q) s.push_back(psi.coeff(e));
    AdditivePoly psi_add(R, q, s);

    // Coefficients of psi o [pi]_X, then solve sum_j c'_j s_{l-j}^{q^j} = rhs_l top-down.
    const AdditivePoly rhs = psi_add.compose(X.pi_additive());
    auto rhs_at = [&](int l) { return l < static_cast<int>(rhs.coeffs().size()) ? rhs.coeffs()[l] : R->zero(); };
    // spow[j][k] = s_k^{q^j}
    std::vector<std::vector<RingElem>> spow(n + 1);
    spow[0] = s;
    for (unsigned j = 1; j <= n; ++j) {
        spow[j] = spow[j - 1];
        for (auto& x : spow[j]) x = x.pow(q);
    }
    std::vector<RingElem> cp(n + 1, R->zero());
    for (int l = static_cast<int>(n) + t; l >= t; --l) {
        const int j0 = l - t;
        RingElem acc = rhs_at(l);
        for (int j = j0 + 1; j <= static_cast<int>(n); ++j)
            if (l - j >= 0) acc -= cp[j] * spow[j][static_cast<std::size_t>(l - j)];
        cp[j0] = acc;
    }
    for (int l = 0; l < t; ++l) {
        RingElem acc = R->zero();
        for (int j = 0; j <= l && j <= static_cast<int>(n); ++j) acc += cp[j] * spow[j][static_cast<std::size_t>(l - j)];
        if (acc != rhs_at(l)) throw NoNormalForm("quotient equation at degree q^" + std::to_string(l) + " is inconsistent");
    }
    if (cp[0] != R->pi()) throw NoNormalForm("quotient [pi] has linear coefficient != pi");
    if (cp[n] != R->one()) throw NoNormalForm("quotient [pi] is not monic of degree q^n");

    QuotientResult out;
    out.module = make_module(R, q, n, std::vector<RingElem>(cp.begin() + 1, cp.end() - 1));
    if (out.module.pi_additive().compose(psi_add) != rhs) throw NoNormalForm("[pi]_{X'} o psi != psi o [pi]_X");
    out.psi = psi;
    out.psi_additive = psi_add;
    out.induced.module = out.module;
    out.induced.m = phi.m;
    out.induced.domain = phi.domain;
    for (const auto& v : phi.values) out.induced.values.push_back(psi_add.eval(v));
    return out;
}

}  // namespace ltower
