#pragma once

#include <cstdint>
#include <nlohmann/json.hpp>
#include <optional>
#include <vector>

#include "ltower/chain_ring.hpp"
#include "ltower/cyclotomic.hpp"
#include "ltower/laurent.hpp"

namespace ltower {

// Free rank-h direct summand of (o/pi^m)^n in canonical echelon form: the
// rows listed in pivots carry the identity, and above its pivot every column
// is divisible by pi. Summands of the same module have equal forms.
struct DirectSummand {
    int n = 0, m = 0, h = 0;
    std::vector<int> pivots;
    ChainMat gens;  // n x h

    bool operator==(const DirectSummand& o) const { return n == o.n && m == o.m && pivots == o.pivots && gens == o.gens; }
    bool operator<(const DirectSummand& o) const {
        return pivots != o.pivots ? pivots < o.pivots : gens.a < o.gens.a;
    }
    nlohmann::json to_json() const;
};

// Canonical form of the span of the columns of G; nullopt if the span is not
// a free direct summand.
std::optional<DirectSummand> canonical_summand(const ChainRing& R, const ChainMat& G);
DirectSummand zero_summand(int n, int m);
DirectSummand full_summand(int n, int m);

std::uint64_t gaussian_binomial(unsigned n, unsigned h, unsigned q);
// |S_{m,h}| = q^{(m-1)h(n-h)} [n choose h]_q
std::uint64_t summand_count(unsigned n, unsigned h, unsigned q, int m);
std::vector<DirectSummand> enumerate_summands(const ChainRing& R, int n, int h, std::uint64_t cap = 2000000);

bool summand_contains(const ChainRing& R, const DirectSummand& A, const std::vector<std::uint32_t>& v);
bool summand_contains(const ChainRing& R, const DirectSummand& A, const DirectSummand& B);
// A1 precedes A2 iff A1 contains A2.
inline bool precedes(const ChainRing& R, const DirectSummand& a1, const DirectSummand& a2) { return summand_contains(R, a1, a2); }
// Flat indices (sum_k v_k |R|^k) of all elements, sorted.
std::vector<std::uint64_t> summand_elements(const ChainRing& R, const DirectSummand& A);
DirectSummand reduce_summand(const ChainRing& R, const DirectSummand& A, const ChainRing& target);

// g^{-1}A at level m' for A at level m (m >= m'). With r unset the largest
// admissible r is used, which makes the bottom composite an isomorphism
// whenever one exists.
DirectSummand strata_action(const LocalMatrix& g, const DirectSummand& A, const ChainRing& Rm, const ChainRing& Rmp,
                            std::optional<int> r = std::nullopt);

// Number of A in S_{m,h} with g^{-1}A = A (no certification).
std::uint64_t count_fixed_labels(const LocalMatrix& g, const ChainRing& R, int h);

struct StrataScan {
    int h = 0;
    std::vector<std::uint64_t> labels;  // |S_{m,h}| for m = 1..m_max
    std::vector<std::uint64_t> fixed;   // fixed labels for m = 1..m_max
    // least m with no fixed labels at m..m_max, if any
    std::optional<int> threshold;
    nlohmann::json to_json() const;
};

// Certified regular elliptic g with v(det g) = 0.
std::uint64_t strata_fixed_count(const LocalMatrix& g, int m, int h);
StrataScan strata_fixed_scan(const LocalMatrix& g, int h, int m_max);

struct Flag {
    std::vector<DirectSummand> chain;  // A_0 = full, ..., A_r = 0
    bool operator==(const Flag& o) const { return chain == o.chain; }
    bool operator<(const Flag& o) const { return chain < o.chain; }
    bool is_maximal() const { return static_cast<int>(chain.size()) == chain.front().n + 1; }
    nlohmann::json to_json() const;
};

std::vector<Flag> enumerate_flags(const ChainRing& R, int n, std::uint64_t cap = 2000000);

// |phi(a)| in a rank-k value group; bottom stands for |0|.
struct ValueVector {
    bool bottom = false;
    std::vector<Rational> tiers;
    static ValueVector zero() { return {true, {}}; }
    bool operator==(const ValueVector& o) const { return bottom == o.bottom && (bottom || tiers == o.tiers); }
};

// x << y: |x| < |y|^r for every r > 0, with the lexicographic order on tiers.
bool much_less(const ValueVector& x, const ValueVector& y);
inline bool similar(const ValueVector& x, const ValueVector& y) { return !much_less(x, y) && !much_less(y, x); }

// values is indexed by flat domain index over (o/pi^m)^n.
Flag flag_of_point(const ChainRing& R, int n, const std::vector<ValueVector>& values);

}  // namespace ltower
