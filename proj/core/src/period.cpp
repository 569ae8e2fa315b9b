#include "ltower/period.hpp"

#include <algorithm>

#include "ltower/errors.hpp"
#include "ltower/lattice.hpp"

namespace ltower {

namespace {

// multiplication in L((pi))[T]/(mu), mu monic
LPoly s_reduce(LPoly a, const LPoly& mu, const FieldPtr& F) {
    const std::size_t d = mu.size() - 1;
    while (a.size() > d) {
        const Laurent lead = a.back();
        const std::size_t s = a.size() - 1 - d;
        for (std::size_t i = 0; i < d; ++i) a[s + i] -= lead * mu[i];
        a.pop_back();
    }
    a.resize(d, Laurent::zero(F));
    return a;
}

LPoly s_mul(const LPoly& a, const LPoly& b, const LPoly& mu, const FieldPtr& F) { return s_reduce(lpoly_mul(a, b), mu, F); }

LPoly s_sub(const LPoly& a, const LPoly& b) { return lpoly_sub(a, b); }

LPoly s_scalar(const Laurent& c, std::size_t d, const FieldPtr& F) {
    LPoly r(d, Laurent::zero(F));
    r[0] = c;
    return r;
}

bool s_is_zero(const LPoly& a) {
    return std::all_of(a.begin(), a.end(), [](const Laurent& x) { return x.is_zero(); });
}

int s_precision(const LPoly& a) {
    int p = kExact;
    for (const auto& x : a) p = std::min(p, x.precision());
    return p;
}

LPoly s_eval(const LPoly& f, const LPoly& x, const LPoly& mu, const FieldPtr& F) {
    const std::size_t d = mu.size() - 1;
    LPoly r(d, Laurent::zero(F));
    for (std::size_t i = f.size(); i-- > 0;) r = lpoly_add(s_mul(r, x, mu, F), s_scalar(f[i], d, F));
    r.resize(d, Laurent::zero(F));
    return r;
}

Laurent eval_laurent(const LPoly& f, const Laurent& x) {
    Laurent r = Laurent::zero(x.field());
    for (std::size_t i = f.size(); i-- > 0;) r = r * x + f[i];
    return r;
}

nlohmann::json lpoly_json(const LPoly& a) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& x : a) j.push_back(laurent_to_json(x));
    return j;
}

}  // namespace

DivisionAlgebra::DivisionAlgebra(unsigned q, unsigned n) : q_(q), n_(n) {
    unsigned p = 0, f = 0;
    if (!prime_power(q, p, f)) throw PreconditionError("q = " + std::to_string(q) + " is not a prime power");
    if (n < 1) throw PreconditionError("division algebra needs n >= 1");
    F_ = FqField::make(p, f);
    L_ = FqField::make(p, f * n);
    emb_ = std::make_shared<const FieldEmbedding>(F_, L_);
}

Laurent DivisionAlgebra::sigma(const Laurent& a, long long k) const {
    const long long r = ((k % n_) + n_) % n_;
    return a.frobenius(static_cast<unsigned>(r) * F_->f());
}

DivisionAlgebra::Elem DivisionAlgebra::zero() const { return {std::vector<Laurent>(n_, Laurent::zero(L_))}; }

DivisionAlgebra::Elem DivisionAlgebra::one() const { return from_ext(1); }

DivisionAlgebra::Elem DivisionAlgebra::uniformizer() const {
    if (n_ == 1) return {{Laurent::pi_power(L_, 1)}};
    Elem e = zero();
    e.x[1] = Laurent::constant(L_, 1);
    return e;
}

DivisionAlgebra::Elem DivisionAlgebra::from_ext(Fq x) const {
    Elem e = zero();
    e.x[0] = Laurent::constant(L_, x);
    return e;
}

DivisionAlgebra::Elem DivisionAlgebra::from_coords(std::vector<Laurent> x) const {
    if (x.size() != n_) throw PreconditionError("division algebra element needs n coordinates");
    for (const auto& c : x)
        if (!c.field()->same_as(*L_)) throw PreconditionError("division algebra coordinates must lie over F_{q^n}");
    return {std::move(x)};
}

DivisionAlgebra::Elem DivisionAlgebra::add(const Elem& a, const Elem& b) const {
    Elem r = zero();
    for (unsigned i = 0; i < n_; ++i) r.x[i] = a.x[i] + b.x[i];
    return r;
}

DivisionAlgebra::Elem DivisionAlgebra::mul(const Elem& a, const Elem& b) const {
    Elem r = zero();
    for (unsigned i = 0; i < n_; ++i)
        for (unsigned j = 0; j < n_; ++j) {
            const unsigned k = i + j;
            r.x[k % n_] += (a.x[i] * sigma(b.x[j], i)).shift(static_cast<int>(k / n_));
        }
    return r;
}

bool DivisionAlgebra::equal(const Elem& a, const Elem& b) const {
    for (unsigned i = 0; i < n_; ++i)
        if (a.x[i] != b.x[i]) return false;
    return true;
}

DivisionAlgebra::Elem DivisionAlgebra::random(std::mt19937_64& rng, int depth) const {
    while (true) {
        Elem e = zero();
        bool nonzero = false;
        for (unsigned i = 0; i < n_; ++i) {
            std::vector<Fq> d(static_cast<std::size_t>(depth));
            for (auto& c : d) c = static_cast<Fq>(rng() % L_->q());
            e.x[i] = Laurent(L_, 0, d);
            nonzero = nonzero || !e.x[i].is_zero();
        }
        if (nonzero) return e;
    }
}

LocalMatrix DivisionAlgebra::embed_matrix(const Elem& b) const {
    const int n = static_cast<int>(n_);
    LocalMatrix M(L_, n, n);
    // b Pi^j = sum_i Pi^{i+j} sigma^{-(i+j)}(x_i)
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M.at((i + j) % n, j) = sigma(b.x[static_cast<std::size_t>(i)], -(i + j)).shift((i + j) / n);
    return M;
}

Laurent DivisionAlgebra::to_base(const Laurent& a) const {
    std::vector<Fq> c;
    for (Fq x : a.raw()) c.push_back(emb_->to_small(x));
    return Laurent(F_, a.first_index(), c, a.precision());
}

Laurent DivisionAlgebra::to_ext(const Laurent& a) const {
    std::vector<Fq> c;
    for (Fq x : a.raw()) c.push_back(emb_->to_big(x));
    return Laurent(L_, a.first_index(), c, a.precision());
}

Laurent DivisionAlgebra::reduced_norm(const Elem& b) const {
    const Laurent d = embed_matrix(b).det();
    if (d.is_zero() && d.is_exact()) throw PreconditionError("reduced norm of zero");
    if (d.is_zero()) throw PrecisionExhausted("reduced norm is zero to the working precision");
    return to_base(d);
}

LPoly DivisionAlgebra::reduced_charpoly(const Elem& b) const {
    LPoly out;
    for (const auto& c : embed_matrix(b).charpoly()) out.push_back(to_base(c));
    return out;
}

nlohmann::json DivisionAlgebra::meta() const {
    return {{"q", q_}, {"n", n_}, {"model", "sum_i F_{q^n}((pi)) Pi^i, Pi x = x^q Pi, Pi^n = pi"},
            {"uniformizer", "Pi"}, {"sigma", "x -> x^q"}, {"ext_modulus", L_->modulus()}};
}

nlohmann::json DivisionAlgebra::to_json(const Elem& b) const {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& c : b.x) j.push_back(laurent_to_json(c));
    return j;
}

nlohmann::json ProjectiveFixedPoints::to_json() const {
    nlohmann::json lj = nlohmann::json::array();
    for (const auto& l : lines) {
        nlohmann::json v = nlohmann::json::array();
        for (const auto& c : l.line) v.push_back(lpoly_json(c));
        lj.push_back({{"eigenvalue", lpoly_json(l.eigenvalue)}, {"line", v}, {"simple", l.simple}});
    }
    return {{"modulus", lpoly_json(modulus)}, {"count", lines.size()}, {"lines", lj}, {"verified_precision", precision},
            {"certificate", certificate.to_json()}};
}

ProjectiveFixedPoints projective_fixed_points(const DivisionAlgebra& B, const DivisionAlgebra::Elem& b, int precision) {
    ProjectiveFixedPoints out;
    const LPoly chi = B.reduced_charpoly(b);
    out.certificate = require_elliptic(LocalMatrix::companion(chi), false);
    const auto& cert = out.certificate;
    const FieldPtr& L = B.ext();
    const int n = static_cast<int>(B.n());
    const LocalMatrix M = B.embed_matrix(b);
    LPoly chiL;
    for (const auto& c : chi) chiL.push_back(B.to_ext(c));
    const LPoly dchi = lpoly_derivative(chiL);

    std::vector<LPoly> roots;
    if (cert.e == 1) {
        // roots s + pi^a z, z a Hensel lift of a root of the residual polynomial
        out.modulus = {Laurent::zero(L), Laurent::constant(L, 1)};
        // the shift is an F_q code; move it into L
        const Laurent s = B.to_ext(Laurent::constant(B.base(), cert.shift));
        const LPoly f = lpoly_shift(chiL, s);
        LPoly h;
        for (int i = 0; i <= n; ++i) h.push_back(f[static_cast<std::size_t>(i)].shift(cert.a * (i - n)));
        const LPoly dh = lpoly_derivative(h);
        for (Fq z0 = 0; z0 < L->q(); ++z0) {
            Laurent z = Laurent::constant(L, z0);
            if (eval_laurent(h, z).valuation_lower_bound() < 1) continue;
            for (int it = 0; it < 12; ++it) {
                const Laurent step = eval_laurent(h, z) * eval_laurent(dh, z).inverse(precision + 2);
                z = (z - step).truncate(precision);
                if (step.valuation_lower_bound() >= precision) break;
            }
            roots.push_back({s + z.shift(cert.a)});
        }
    } else if (n == 2) {
        // adjoin a root T of chi; the other root is -chi_1 - T
        out.modulus = chiL;
        roots.push_back({Laurent::zero(L), Laurent::constant(L, 1)});
        roots.push_back({-chiL[1], Laurent::from_int(L, -1)});
    } else {
        throw PreconditionError("projective fixed points: splitting ring is constructed for unramified b or n = 2 only");
    }
    if (static_cast<int>(roots.size()) != n)
        throw CrossCheckFailure("projective fixed points: found " + std::to_string(roots.size()) + " eigenvalues, expected n");

    const LPoly& mu = out.modulus;
    const std::size_t d = mu.size() - 1;
    out.precision = kExact;
    for (const auto& lam : roots) {
        // eigenvector: a nonzero column of adj(M - lambda)
        std::vector<std::vector<LPoly>> A(static_cast<std::size_t>(n), std::vector<LPoly>(static_cast<std::size_t>(n)));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                A[i][j] = s_scalar(M.at(i, j), d, L);
                if (i == j) A[i][j] = s_sub(A[i][j], lam);
            }
        std::vector<LPoly> v;
        if (d == 1) {
            LocalMatrix Am(L, n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) Am.at(i, j) = A[i][j][0];
            const LocalMatrix adj = Am.adjugate();
            int best = -1, bestv = kExact;
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i)
                    if (!adj.at(i, j).is_zero() && adj.at(i, j).valuation() < bestv) bestv = adj.at(i, j).valuation(), best = j;
            if (best < 0) throw PrecisionExhausted("eigenline: adjugate vanishes to the working precision");
            for (int i = 0; i < n; ++i) v.push_back({adj.at(i, best)});
        } else {
            // n = 2: columns (-A01, A00) or (A11, -A10) of the adjugate
            if (!s_is_zero(A[0][1])) v = {lpoly_sub(s_scalar(Laurent::zero(L), d, L), A[0][1]), A[0][0]};
            else v = {A[1][1], lpoly_sub(s_scalar(Laurent::zero(L), d, L), A[1][0])};
        }
        for (int i = 0; i < n; ++i) {
            LPoly r = s_scalar(Laurent::zero(L), d, L);
            for (int j = 0; j < n; ++j) r = lpoly_add(r, s_mul(A[i][j], v[static_cast<std::size_t>(j)], mu, L));
            if (!s_is_zero(r)) throw CrossCheckFailure("eigenline check failed: (M - lambda) v != 0");
            out.precision = std::min(out.precision, s_precision(r));
        }
        FixedLine fl;
        fl.eigenvalue = lam;
        fl.line = v;
        fl.simple = !s_is_zero(s_eval(dchi, lam, mu, L));
        out.lines.push_back(std::move(fl));
    }
    for (std::size_t i = 0; i < out.lines.size(); ++i)
        for (std::size_t j = i + 1; j < out.lines.size(); ++j)
            if (s_is_zero(lpoly_sub(out.lines[i].eigenvalue, out.lines[j].eigenvalue)))
                throw CrossCheckFailure("projective fixed points: eigenvalues coincide");
    return out;
}

nlohmann::json FixedPointReport::to_json() const {
    nlohmann::json j = {{"n", n}, {"m", m}, {"per_fiber_count", per_fiber}, {"total", total}, {"g_b", gb.to_string()},
                        {"structured", structured.to_json()}, {"fixed_lines", fixed_lines}, {"algebra", algebra}};
    if (brute) {
        j["bruteforce"] = brute->to_json();
        j["enumeration_bound"] = brute->bound;
        j["stability"] = brute->stable;
    }
    return j;
}

LocalMatrix reduced_companion(const DivisionAlgebra& B, const DivisionAlgebra::Elem& b, FieldPtr F) {
    if (!F) F = B.base();
    if (!F->same_as(*B.base())) throw PreconditionError("reduced_companion: field differs from the base field of B");
    std::vector<Laurent> coeffs;
    for (const auto& c : B.reduced_charpoly(b)) coeffs.push_back(Laurent(F, c.first_index(), c.raw(), c.precision()));
    return LocalMatrix::companion(coeffs);
}

FixedPointReport total_fixed_points(const LocalMatrix& g, const DivisionAlgebra& B, const DivisionAlgebra::Elem& b, int m, bool run_bruteforce,
                                    std::optional<int> bound) {
    if (!g.field()->same_as(*B.base())) throw PreconditionError("g must be defined over the base field of B");
    FixedPointReport out;
    out.n = B.n();
    out.m = m;
    out.algebra = B.meta();
    out.gb = reduced_companion(B, b, g.field());
    require_elliptic(out.gb, false);
    out.structured = count_fixed_points_structured(out.gb, g, m);
    out.per_fiber = out.structured.count;
    out.total = static_cast<std::uint64_t>(out.n) * out.per_fiber;
    out.fixed_lines = projective_fixed_points(B, b).lines.size();
    if (out.fixed_lines != out.n) throw CrossCheckFailure("b has " + std::to_string(out.fixed_lines) + " fixed lines, expected n");
    if (run_bruteforce) {
        out.brute = count_fixed_points_bruteforce(out.gb, g, m, bound);
        if (out.brute->stable && out.brute->count != out.per_fiber)
            throw CrossCheckFailure("structured count " + std::to_string(out.per_fiber) + " != brute-force count " + std::to_string(out.brute->count));
    }
    return out;
}

}  // namespace ltower
