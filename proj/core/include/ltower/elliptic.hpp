#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "ltower/laurent.hpp"

namespace ltower {

// Irreducibility proof for a characteristic polynomial over F_q((pi)).
// After the shift T -> T + c the Newton polygon is a single segment of slope
// a/e (gcd(a, e) = 1) with residual polynomial irreducible of degree f over F_q;
// then F[g] is a field with ramification e and residue degree f.
struct EllipticCertificate {
    std::string method;  // "eisenstein", "unramified" or "newton"
    Fq shift = 0;
    int e = 1, f = 1;
    int a = 0;  // roots of the shifted polynomial have valuation a/e
    bool separable = false;
    int disc_valuation = -1;  // -1 when the discriminant is zero
    LPoly charpoly;
    std::vector<Fq> residual;  // low to high, monic

    nlohmann::json to_json() const;
};

struct CertifyResult {
    // certified: irreducible and separable (regular elliptic)
    bool certified = false;
    // irreducibility alone (finite stable-lattice sets only need this)
    bool irreducible = false;
    std::string reason;
    EllipticCertificate cert;
};

CertifyResult regular_elliptic_certify(const LocalMatrix& g);
CertifyResult certify_charpoly(const LPoly& chi);
// Throws CertificationError unless g is regular elliptic (or merely
// irreducible when allow_inseparable is set).
EllipticCertificate require_elliptic(const LocalMatrix& g, bool allow_inseparable = false);

Laurent resultant(const LPoly& f, const LPoly& g);
Laurent discriminant(const LPoly& f);  // monic f
// Valuation spread used for the default brute-force search bound.
int v_spread(const LocalMatrix& gb);

// Monic polynomial over F_q, low to high.
bool fq_poly_irreducible(const FqField& F, const std::vector<Fq>& f);

}  // namespace ltower
