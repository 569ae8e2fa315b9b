#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <random>
#include <vector>

#include "ltower/elliptic.hpp"
#include "ltower/fixed_points.hpp"
#include "ltower/laurent.hpp"

namespace ltower {

// B = sum_i L((pi)) Pi^i with L = F_{q^n}, Pi x = sigma(x) Pi, Pi^n = pi.
class DivisionAlgebra {
public:
    struct Elem {
        std::vector<Laurent> x;  // coefficients of Pi^0..Pi^{n-1}, over L
    };

    DivisionAlgebra(unsigned q, unsigned n);

    unsigned q() const { return q_; }
    unsigned n() const { return n_; }
    const FieldPtr& base() const { return F_; }
    const FieldPtr& ext() const { return L_; }

    Elem zero() const;
    Elem one() const;
    Elem uniformizer() const;
    // x in F_{q^n}, as a code of ext()
    Elem from_ext(Fq x) const;
    Elem from_coords(std::vector<Laurent> x) const;
    Elem add(const Elem& a, const Elem& b) const;
    Elem mul(const Elem& a, const Elem& b) const;
    bool equal(const Elem& a, const Elem& b) const;
    // nonzero; coefficients with valuations in [0, depth) at each Pi^i
    Elem random(std::mt19937_64& rng, int depth = 3) const;

    // Left multiplication in the right L((pi))-basis Pi^0..Pi^{n-1}.
    LocalMatrix embed_matrix(const Elem& b) const;
    // det of the embedding, as an element of F_q((pi)); throws if the
    // coefficients do not descend.
    Laurent reduced_norm(const Elem& b) const;
    LPoly reduced_charpoly(const Elem& b) const;

    Laurent to_base(const Laurent& a) const;
    Laurent to_ext(const Laurent& a) const;
    nlohmann::json meta() const;
    nlohmann::json to_json(const Elem& b) const;

private:
    Laurent sigma(const Laurent& a, long long k) const;
    unsigned q_, n_;
    FieldPtr F_, L_;
    std::shared_ptr<const FieldEmbedding> emb_;
};

// A fixed point of b on projective space: an eigenline over the splitting
// ring S = L((pi))[T]/(mu). Elements of S are LPolys of length deg mu.
struct FixedLine {
    LPoly eigenvalue;
    std::vector<LPoly> line;
    bool simple = false;
};

struct ProjectiveFixedPoints {
    LPoly modulus;  // mu; T when every eigenvalue lies in L((pi))
    std::vector<FixedLine> lines;
    EllipticCertificate certificate;
    int precision = 0;  // precision to which M v = lambda v was verified
    nlohmann::json to_json() const;
};

ProjectiveFixedPoints projective_fixed_points(const DivisionAlgebra& B, const DivisionAlgebra::Elem& b, int precision = 24);

struct FixedPointReport {
    unsigned n = 0;
    int m = 0;
    std::uint64_t per_fiber = 0;
    std::uint64_t total = 0;
    StructuredCount structured;
    std::optional<BruteForceCount> brute;
    std::size_t fixed_lines = 0;
    LocalMatrix gb;
    nlohmann::json algebra;
    nlohmann::json to_json() const;
};

// n x #{h in G/pi^Z K_m : h^{-1} g_b h in g^{-1} pi^Z K_m} with g_b the
// companion matrix of the reduced characteristic polynomial of b.
FixedPointReport total_fixed_points(const LocalMatrix& g, const DivisionAlgebra& B, const DivisionAlgebra::Elem& b, int m,
                                    bool run_bruteforce = false, std::optional<int> bound = std::nullopt);

// Companion matrix of the reduced characteristic polynomial, over F (default B.base()).
LocalMatrix reduced_companion(const DivisionAlgebra& B, const DivisionAlgebra::Elem& b, FieldPtr F = nullptr);

}  // namespace ltower
