#include "ltower/congruence.hpp"

#include <algorithm>

#include "ltower/errors.hpp"

namespace ltower {

int ceil_div(int a, int b) { return a >= 0 ? (a + b - 1) / b : -((-a) / b); }

CongruenceSubgroup::CongruenceSubgroup(const LocalMatrix& g, int r) : n_(g.n()), r_(r) {
    if (r < 1) throw PreconditionError("K(r) needs r >= 1");
    cert_ = require_elliptic(g, false);
    const FieldPtr& F = g.field();
    e_ = cert_.e;
    f_ = cert_.f;
    const LocalMatrix y = g - LocalMatrix::scalar(F, n_, Laurent::constant(F, cert_.shift));
    // uniformizer w_E = y^u pi^{-t} with u a - t e = 1; residue generator z = y^e pi^{-a}
    LocalMatrix uni = LocalMatrix::scalar(F, n_, Laurent::pi_power(F, 1));
    if (e_ > 1) {
        int u = 0;
        while ((((u * cert_.a) % e_) + e_) % e_ != 1 % e_) ++u;
        const int t = (u * cert_.a - 1) / e_;
        uni = y.pow(static_cast<unsigned>(u)).shift(-t);
    }
    const LocalMatrix z = y.pow(static_cast<unsigned>(e_)).shift(-cert_.a);
    std::vector<std::vector<Laurent>> cols;
    std::vector<Laurent> v(static_cast<std::size_t>(n_), Laurent::zero(F));
    v[0] = Laurent::constant(F, 1);
    std::vector<Laurent> wi = v;
    for (int i = 0; i < e_; ++i) {
        std::vector<Laurent> c = wi;
        for (int k = 0; k < f_; ++k) {
            cols.push_back(c);
            c = z * c;
        }
        wi = uni * wi;
    }
    W_ = LocalMatrix::from_columns(cols);
    Winv_ = W_.inverse();
    mu_.assign(static_cast<std::size_t>(n_) * n_, 0);
    for (int a = 0; a < n_; ++a)
        for (int b = 0; b < n_; ++b) {
            const int i1 = a / f_, i2 = b / f_;
            int best = INT_MIN;
            for (int j = 0; j < e_; ++j) best = std::max(best, ceil_div(j + r_ - i1, e_) - ceil_div(j - i2, e_));
            mu_[static_cast<std::size_t>(a) * n_ + b] = best;
        }
}

bool CongruenceSubgroup::contains(const LocalMatrix& k) const {
    const LocalMatrix X = Winv_ * (k - LocalMatrix::identity(k.field(), n_)) * W_;
    for (int a = 0; a < n_; ++a)
        for (int b = 0; b < n_; ++b) {
            const Laurent& x = X.at(a, b);
            if (x.valuation_lower_bound() >= mu(a, b)) continue;
            if (x.is_zero()) throw PrecisionExhausted("K(r) membership needs precision " + std::to_string(mu(a, b)));
            return false;
        }
    return true;
}

std::vector<LocalMatrix> CongruenceSubgroup::generators() const {
    const FieldPtr& F = W_.field();
    std::vector<LocalMatrix> out;
    for (int a = 0; a < n_; ++a)
        for (int b = 0; b < n_; ++b) {
            LocalMatrix E(F, n_, n_);
            E.at(a, b) = Laurent::pi_power(F, mu(a, b));
            out.push_back(LocalMatrix::identity(F, n_) + W_ * E * Winv_);
        }
    return out;
}

bool CongruenceSubgroup::normalized_by(const LocalMatrix& x) const {
    const LocalMatrix xi = x.inverse();
    for (const auto& k : generators())
        if (!contains(x * k * xi) || !contains(xi * k * x)) return false;
    return true;
}

LocalMatrix CongruenceSubgroup::sample(std::mt19937_64& rng, int depth) const {
    const FieldPtr& F = W_.field();
    LocalMatrix X(F, n_, n_);
    for (int a = 0; a < n_; ++a)
        for (int b = 0; b < n_; ++b) {
            std::vector<Fq> d(static_cast<std::size_t>(depth));
            for (auto& c : d) c = static_cast<Fq>(rng() % F->q());
            X.at(a, b) = Laurent(F, mu(a, b), d);
        }
    return LocalMatrix::identity(F, n_) + W_ * X * Winv_;
}

nlohmann::json CongruenceSubgroup::to_json() const {
    nlohmann::json m = nlohmann::json::array();
    for (int a = 0; a < n_; ++a) {
        nlohmann::json row = nlohmann::json::array();
        for (int b = 0; b < n_; ++b) row.push_back(mu(a, b));
        m.push_back(row);
    }
    return {{"r", r_}, {"e", e_}, {"f", f_}, {"basis", W_.to_string()}, {"mu", m}, {"certificate", cert_.to_json()}};
}

}  // namespace ltower
