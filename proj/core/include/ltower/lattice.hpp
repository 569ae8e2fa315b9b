#pragma once

#include <cstdint>
#include <functional>
#include <nlohmann/json.hpp>
#include <vector>

#include "ltower/laurent.hpp"

namespace ltower {

// o-lattice in F^n held by its column Hermite normal form: upper triangular,
// diagonal pi^{e_i}, entries of row i above the diagonal reduced mod pi^{e_i}
// (Laurent polynomials with exponents < e_i). Equal lattices have equal forms.
class Lattice {
public:
    Lattice() = default;
    static Lattice standard(FieldPtr F, int n);
    // Columns of B form a basis (B square with nonzero determinant).
    static Lattice from_basis(const LocalMatrix& B);
    // Span of the columns of G, given that pi^contain * o^n lies in the span.
    static Lattice from_generators(const LocalMatrix& G, int contain);
    // Trusts H to already be in canonical form.
    static Lattice from_hnf(LocalMatrix H);

    const LocalMatrix& hnf() const { return H_; }
    int n() const { return H_.n(); }
    const FieldPtr& field() const { return H_.field(); }
    std::vector<int> diagonal_exponents() const;
    int min_elementary_divisor() const { return H_.min_valuation(); }
    int max_elementary_divisor() const;
    // v(det H) = sum of the e_i
    int volume() const;

    Lattice scaled(int k) const;  // pi^k L
    Lattice normalized() const { return scaled(-min_elementary_divisor()); }
    bool is_normalized() const { return min_elementary_divisor() == 0; }
    bool contains(const std::vector<Laurent>& v) const;
    bool contains(const Lattice& o) const;
    Lattice image(const LocalMatrix& g) const;
    Lattice sum(const Lattice& o) const;
    // Exact inverse of the HNF basis (its determinant is a pi-power).
    LocalMatrix basis_inverse() const;

    bool operator==(const Lattice& o) const { return key() == o.key(); }
    bool operator<(const Lattice& o) const { return key() < o.key(); }
    const std::vector<std::int64_t>& key() const { return key_; }
    nlohmann::json to_json() const;

private:
    void build_key();
    LocalMatrix H_;
    std::vector<std::int64_t> key_;
};

// Every normalized lattice whose elementary divisors lie in [0, B], in canonical order.
// The callback receives each lattice; returns the number visited.
std::uint64_t for_each_normalized_lattice(FieldPtr F, int n, int B, const std::function<void(const Lattice&)>& f);

struct CosetRep {
    Lattice lattice;  // normalized
    ChainMat frame;   // element of GL_n(o/pi^m): the coset is H * frame * K_m
    bool operator<(const CosetRep& o) const {
        return lattice < o.lattice || (lattice == o.lattice && frame < o.frame);
    }
    nlohmann::json to_json() const;
};

nlohmann::json laurent_to_json(const Laurent& x);
Laurent laurent_from_json(const FieldPtr& F, const nlohmann::json& j);

}  // namespace ltower
