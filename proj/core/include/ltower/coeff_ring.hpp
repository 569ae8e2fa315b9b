#pragma once

#include <cstddef>
#include <memory>
#include <nlohmann/json.hpp>
#include <utility>
#include <vector>

#include "ltower/fq_field.hpp"

namespace ltower {

class CoeffRing;
class RingElem;
class RingPoly;
using RingPtr = std::shared_ptr<const CoeffRing>;

inline constexpr std::size_t kDefaultRankCap = 5000;

// Finite F_q-algebra F[pi, w_1..w_k]/(pi^M, w_i^{e_i}) followed by a chain of
// monogenic stages R_{s+1} = R_s[theta_s]/(g_s). Coordinates are flat: pi is
// the fastest index, then the w's, then theta_1, ..., theta_s (newest slowest).
class CoeffRing : public std::enable_shared_from_this<CoeffRing> {
public:
    static RingPtr base(FieldPtr field, int precision, std::vector<int> nil_orders = {});

    const FieldPtr& field() const { return field_; }
    int precision() const { return precision_; }
    const std::vector<int>& nil_orders() const { return nil_orders_; }
    const RingPtr& parent() const { return parent_; }
    int level() const { return level_; }
    std::size_t dim() const { return dim_; }
    std::size_t base_dim() const { return base_dim_; }
    std::size_t rank() const { return dim_ / base_dim_; }
    // Degrees of all stages, oldest first.
    std::vector<std::size_t> stage_degrees() const;
    std::size_t degree() const { return degree_; }
    // Low coefficients g_0..g_{d-1} of this stage (elements of the parent).
    const std::vector<std::vector<Fq>>& stage_coeffs() const { return stage_; }
    const CoeffRing& base_ring() const;
    RingPtr ancestor(int level) const;
    bool is_ancestor_of(const CoeffRing& other) const;

    RingElem zero() const;
    RingElem one() const;
    RingElem constant(Fq c) const;
    RingElem from_int(long long v) const;
    RingElem pi() const;
    RingElem w(std::size_t i) const;
    // Generator adjoined at stage s (1-based), lifted into this ring.
    RingElem theta(int stage) const;
    RingElem gen() const;
    RingElem from_coords(std::vector<Fq> c) const;
    // Coerce an element of an ancestor ring.
    RingElem lift(const RingElem& x) const;

    // Monomial exponent vectors are [pi, w_1..w_k, theta_1..theta_s]. Exponents
    // may exceed the basis range; the result is reduced to normal form.
    RingElem from_monomials(const std::vector<std::pair<std::vector<int>, Fq>>& terms) const;
    std::vector<std::pair<std::vector<int>, Fq>> to_monomials(const RingElem& x) const;

    void mul_into(const Fq* a, const Fq* b, Fq* out) const;
    void add_into(const Fq* a, Fq* out, std::size_t len) const;
    void sub_into(const Fq* a, Fq* out, std::size_t len) const;

    nlohmann::json to_json() const;
    static RingPtr from_json(const nlohmann::json& j, std::size_t rank_cap = kDefaultRankCap);
    bool same_as(const CoeffRing& o) const;

    // Internal: construct a stage. Use ring_extend.
    CoeffRing(RingPtr parent, std::vector<std::vector<Fq>> low_coeffs);
    CoeffRing(FieldPtr field, int precision, std::vector<int> nil_orders);

private:
    FieldPtr field_;
    int precision_;
    std::vector<int> nil_orders_;
    RingPtr parent_;
    int level_ = 0;
    std::size_t degree_ = 1;
    std::size_t dim_ = 0;
    std::size_t base_dim_ = 0;
    std::vector<std::vector<Fq>> stage_;
    // Base ring only: exponent digits per index and product index table.
    std::vector<std::vector<int>> base_exps_;
    std::vector<int> base_prod_;
};

class RingElem {
public:
    RingElem() = default;
    RingElem(RingPtr ring, std::vector<Fq> coords);

    const RingPtr& ring() const { return ring_; }
    const std::vector<Fq>& coords() const { return c_; }
    bool is_zero() const;
    bool is_nilpotent() const;
    Fq constant_term() const { return c_.empty() ? 0 : c_[0]; }

    RingElem operator+(const RingElem& o) const;
    RingElem operator-(const RingElem& o) const;
    RingElem operator-() const;
    RingElem operator*(const RingElem& o) const;
    RingElem& operator+=(const RingElem& o);
    RingElem& operator-=(const RingElem& o);
    RingElem scale(Fq c) const;
    RingElem pow(std::uint64_t e) const;
    RingElem frobenius() const { return pow(ring_->field()->p()); }
    // Throws PreconditionError if not a unit.
    RingElem inverse() const;
    bool is_unit() const;
    bool operator==(const RingElem& o) const;
    bool operator!=(const RingElem& o) const { return !(*this == o); }

private:
    RingPtr ring_;
    std::vector<Fq> c_;
};

// Dense polynomial over a CoeffRing, coefficients low to high.
class RingPoly {
public:
    RingPoly() = default;
    explicit RingPoly(RingPtr ring) : ring_(std::move(ring)) {}
    RingPoly(RingPtr ring, std::vector<RingElem> coeffs);
    static RingPoly monomial(RingPtr ring, std::size_t degree, const RingElem& c);
    static RingPoly x(RingPtr ring) { return monomial(ring, 1, ring->one()); }
    static RingPoly constant(const RingElem& c);

    const RingPtr& ring() const { return ring_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<RingElem>& coeffs() const { return c_; }
    RingElem coeff(std::size_t i) const;
    RingElem leading() const { return c_.back(); }
    bool is_zero() const { return c_.empty(); }
    bool is_monic() const;
    // Nonzero coefficients only at degrees that are powers of q.
    bool is_q_linear(unsigned q) const;

    RingPoly operator+(const RingPoly& o) const;
    RingPoly operator-(const RingPoly& o) const;
    RingPoly operator*(const RingPoly& o) const;
    RingPoly operator*(const RingElem& c) const;
    bool operator==(const RingPoly& o) const;
    bool operator!=(const RingPoly& o) const { return !(*this == o); }
    RingElem eval(const RingElem& x) const;
    RingPoly compose(const RingPoly& inner) const;
    RingPoly derivative() const;
    RingPoly lift_to(const RingPtr& r) const;

private:
    void trim();
    RingPtr ring_;
    std::vector<RingElem> c_;
};

// Adjoin a root of the monic polynomial g.
RingPtr ring_extend(const RingPtr& r, const RingPoly& g, std::size_t rank_cap = kDefaultRankCap);

// Exact division f = g * q; throws NonExactDivision otherwise.
RingPoly poly_divide_exact(const RingPoly& f, const RingPoly& g);
// Long division returning (quotient, remainder).
std::pair<RingPoly, RingPoly> poly_divmod(const RingPoly& f, const RingPoly& g);

}  // namespace ltower
