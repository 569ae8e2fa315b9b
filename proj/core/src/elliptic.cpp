#include "ltower/elliptic.hpp"

#include <algorithm>
#include <numeric>

#include "ltower/errors.hpp"

namespace ltower {

namespace {

using FqPoly = std::vector<Fq>;

void trim(FqPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

// Remainder of a modulo monic b.
FqPoly fq_mod(const FqField& F, FqPoly a, const FqPoly& b) {
    trim(a);
    const std::size_t db = b.size() - 1;
    while (a.size() > db) {
        const Fq lead = a.back();
        const std::size_t s = a.size() - 1 - db;
        for (std::size_t i = 0; i <= db; ++i) a[s + i] = F.sub(a[s + i], F.mul(lead, b[i]));
        trim(a);
    }
    return a;
}

}  // namespace

bool fq_poly_irreducible(const FqField& F, const std::vector<Fq>& f) {
    FqPoly p = f;
    trim(p);
    if (p.size() < 2) return false;
    const int d = static_cast<int>(p.size()) - 1;
    if (d == 1) return true;
    if (p[0] == 0) return false;
    const unsigned q = F.q();
    // trial division by every monic polynomial of degree <= d/2
    for (int k = 1; 2 * k <= d; ++k) {
        std::uint64_t count = 1;
        for (int i = 0; i < k; ++i) count *= q;
        for (std::uint64_t code = 0; code < count; ++code) {
            FqPoly g(static_cast<std::size_t>(k + 1));
            std::uint64_t c = code;
            for (int i = 0; i < k; ++i) g[static_cast<std::size_t>(i)] = static_cast<Fq>(c % q), c /= q;
            g[static_cast<std::size_t>(k)] = 1;
            if (fq_mod(F, p, g).empty()) return false;
        }
    }
    return true;
}

Laurent resultant(const LPoly& f, const LPoly& g) {
    const int n = static_cast<int>(f.size()) - 1, m = static_cast<int>(g.size()) - 1;
    const FieldPtr& F = f.at(0).field();
    if (n <= 0 && m <= 0) return Laurent::constant(F, 1);
    LocalMatrix S(F, n + m, n + m);
    for (int r = 0; r < m; ++r)
        for (int k = 0; k <= n; ++k) S.at(r, r + k) = f[static_cast<std::size_t>(n - k)];
    for (int r = 0; r < n; ++r)
        for (int k = 0; k <= m; ++k) S.at(m + r, r + k) = g[static_cast<std::size_t>(m - k)];
    return S.det();
}

Laurent discriminant(const LPoly& f) {
    const int n = static_cast<int>(f.size()) - 1;
    const FieldPtr& F = f.at(0).field();
    if (n <= 1) return Laurent::constant(F, 1);
    LPoly d = lpoly_derivative(f);
    d.resize(static_cast<std::size_t>(n), Laurent::zero(F));
    const Laurent r = resultant(f, d);
    return (n * (n - 1) / 2) % 2 == 0 ? r : -r;
}

nlohmann::json EllipticCertificate::to_json() const {
    nlohmann::json cp = nlohmann::json::array();
    for (const auto& c : charpoly) cp.push_back(c.to_string());
    return {{"method", method}, {"shift", shift}, {"e", e}, {"f", f}, {"slope", a},
            {"separable", separable}, {"disc_valuation", disc_valuation},
            {"charpoly", cp}, {"residual", residual}};
}

CertifyResult certify_charpoly(const LPoly& chi) {
    CertifyResult out;
    const int n = static_cast<int>(chi.size()) - 1;
    if (n < 1) throw PreconditionError("characteristic polynomial of degree 0");
    const FieldPtr& F = chi[0].field();
    EllipticCertificate& c = out.cert;
    c.charpoly = chi;
    const Laurent disc = discriminant(chi);
    c.separable = !disc.is_zero();
    c.disc_valuation = c.separable ? disc.valuation() : -1;
    if (n == 1) {
        c.method = "unramified";
        c.residual = {F->neg(chi[0].is_zero() ? 0 : chi[0].leading()), 1};
        out.irreducible = out.certified = true;
        return out;
    }
    const unsigned shifts = std::min<unsigned>(F->q(), 64);
    bool has_root = false;
    for (unsigned s = 0; s < shifts; ++s) {
        const LPoly f = s == 0 ? chi : lpoly_shift(chi, Laurent::constant(F, s));
        if (f[0].is_zero()) {
            if (f[0].is_exact()) has_root = true;
            continue;
        }
        const int v0 = f[0].valuation();
        const int g = std::gcd(std::abs(v0), n);
        const int e = n / g, a = v0 / g, d = g;
        bool single = true;
        for (int i = 1; i < n && single; ++i) {
            const long long lhs = static_cast<long long>(f[static_cast<std::size_t>(i)].valuation_lower_bound()) * n;
            single = lhs >= static_cast<long long>(v0) * (n - i);
        }
        if (!single) continue;
        std::vector<Fq> R(static_cast<std::size_t>(d + 1), 0);
        for (int k = 0; k <= d; ++k) R[static_cast<std::size_t>(d - k)] = f[static_cast<std::size_t>(n - k * e)].coeff(k * a);
        if (!fq_poly_irreducible(*F, R)) continue;
        c.shift = s;
        c.e = e;
        c.f = d;
        c.a = a;
        c.residual = R;
        c.method = e == 1 ? "unramified" : (e == n && std::abs(v0) == 1 ? "eisenstein" : "newton");
        out.irreducible = true;
        out.certified = c.separable;
        out.reason = c.separable ? "" : "characteristic polynomial is irreducible but inseparable";
        return out;
    }
    out.reason = has_root ? "characteristic polynomial has a root in F_q"
                          : "inconclusive: no shift gives a single-segment Newton polygon with irreducible residual polynomial";
    return out;
}

CertifyResult regular_elliptic_certify(const LocalMatrix& g) { return certify_charpoly(g.charpoly()); }

EllipticCertificate require_elliptic(const LocalMatrix& g, bool allow_inseparable) {
    CertifyResult r = regular_elliptic_certify(g);
    if (r.certified || (allow_inseparable && r.irreducible)) return r.cert;
    throw CertificationError("not certified regular elliptic: " + (r.reason.empty() ? std::string("rejected") : r.reason));
}

int v_spread(const LocalMatrix& gb) {
    const int n = gb.n();
    const int vd = gb.det().valuation();
    const int kappa = vd >= 0 ? vd / n : -((-vd + n - 1) / n);
    const LocalMatrix y = gb.shift(-kappa);
    const Laurent disc = discriminant(y.charpoly());
    const int dv = disc.is_zero() ? n : std::max(0, disc.valuation());
    const int lo = y.min_valuation(), hi = y.max_valuation();
    return dv + std::max(0, hi - lo);
}

}  // namespace ltower
