#pragma once

#include <nlohmann/json.hpp>
#include <random>
#include <vector>

#include "ltower/elliptic.hpp"
#include "ltower/laurent.hpp"

namespace ltower {

// K(r) = {k : (k - 1) p_E^j v in p_E^{j+r} v for all j} for E = F[g], v = e_1.
// In the basis W = [w_E^i z^k v] (0 <= i < e, 0 <= k < f) of o_E v the lattices
// p_E^j v are diagonal, so membership is a valuation bound mu(i1, i2) on
// W^{-1}(k - 1)W.
class CongruenceSubgroup {
public:
    CongruenceSubgroup(const LocalMatrix& g, int r);

    int r() const { return r_; }
    int e() const { return e_; }
    int f() const { return f_; }
    const LocalMatrix& basis() const { return W_; }
    const EllipticCertificate& certificate() const { return cert_; }
    // exponent bound for basis row a, column b
    int mu(int a, int b) const { return mu_[static_cast<std::size_t>(a) * n_ + b]; }

    bool contains(const LocalMatrix& k) const;
    // 1 + W E_ab pi^mu(a,b) W^{-1}
    std::vector<LocalMatrix> generators() const;
    // x K(r) x^{-1} = K(r), checked on generators in both directions
    bool normalized_by(const LocalMatrix& x) const;
    // 1 + W X W^{-1} with X random subject to the bounds, digits up to depth
    LocalMatrix sample(std::mt19937_64& rng, int depth = 4) const;
    nlohmann::json to_json() const;

private:
    int n_ = 0, r_ = 0, e_ = 1, f_ = 1;
    EllipticCertificate cert_;
    LocalMatrix W_, Winv_;
    std::vector<int> mu_;
};

// ceil(a / b) for b > 0
int ceil_div(int a, int b);

}  // namespace ltower
