#pragma once

#include <memory>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "ltower/chain_ring.hpp"
#include "ltower/coeff_ring.hpp"

namespace ltower {

// sum_i a_i T^{q^i}
class AdditivePoly {
public:
    AdditivePoly() = default;
    AdditivePoly(RingPtr ring, unsigned q, std::vector<RingElem> coeffs);
    static AdditivePoly identity(RingPtr ring, unsigned q);

    const RingPtr& ring() const { return ring_; }
    unsigned q() const { return q_; }
    const std::vector<RingElem>& coeffs() const { return a_; }
    // log_q of the degree; -1 for zero
    int height() const { return static_cast<int>(a_.size()) - 1; }
    RingElem eval(const RingElem& x) const;
    // (this o inner)(T) = this(inner(T))
    AdditivePoly compose(const AdditivePoly& inner) const;
    AdditivePoly operator+(const AdditivePoly& o) const;
    AdditivePoly operator*(const RingElem& c) const;
    bool operator==(const AdditivePoly& o) const;
    RingPoly dense(std::size_t degree_cap = 1u << 16) const;

private:
    void trim();
    RingPtr ring_;
    unsigned q_ = 0;
    std::vector<RingElem> a_;
};

// One-dimensional formal o-module with additive law and
// [pi](T) = pi T + c_1 T^q + ... + c_{n-1} T^{q^{n-1}} + T^{q^n}.
struct FormalOModule {
    RingPtr ring;
    unsigned q = 0;
    unsigned n = 0;
    FieldPtr fq;                          // the coefficient field F_q of o
    std::shared_ptr<const FieldEmbedding> embed;  // F_q -> residue field of ring
    std::vector<RingElem> c;              // c_0 = pi, c_1..c_{n-1}, c_n = 1
    RingPoly pi_poly;

    AdditivePoly pi_additive() const;
    FormalOModule lift_to(const RingPtr& r) const;
};

FormalOModule make_module(const RingPtr& ring, unsigned q, unsigned n, const std::vector<RingElem>& u);

// alpha = sum_i a_i pi^i with a_i in F_q (codes of the standalone field F_q).
AdditivePoly alpha_additive(const FormalOModule& X, const std::vector<Fq>& alpha);
RingPoly alpha_mult(const FormalOModule& X, const std::vector<Fq>& alpha, std::size_t degree_cap = 1u << 16);
AdditivePoly pi_power_additive(const FormalOModule& X, int m);
RingPoly pi_power(const FormalOModule& X, int m, std::size_t degree_cap = 1u << 16);

// Values of an o-module map (pi^{-m}o/o)^n -> nilradical. Domain vectors are
// stored as n chain-ring codes; the flat index is sum_k code_k * |o/pi^m|^k.
struct LevelStructure {
    FormalOModule module;
    int m = 1;
    std::shared_ptr<const ChainRing> domain;
    std::vector<RingElem> values;

    std::size_t index(const std::vector<std::uint32_t>& a) const;
    std::vector<std::uint32_t> vector_at(std::size_t idx) const;
    std::size_t size() const { return values.size(); }
    const RingElem& at(const std::vector<std::uint32_t>& a) const { return values[index(a)]; }
};

struct LevelCheck {
    bool ok = true;
    std::string relation;
    int witness_degree = -1;
    std::vector<Fq> witness;
};

LevelCheck check_level(const LevelStructure& phi);

struct StageInfo {
    int level;        // tower level this stage belongs to
    int basis_index;  // which standard basis vector is being extended
    std::size_t degree;
};

struct TowerAlgebra {
    RingPtr base;
    std::vector<RingPtr> rings;  // one per stage, oldest first
    int m = 0;
    LevelStructure phi;
    std::vector<StageInfo> provenance;
    const RingPtr& top() const { return rings.empty() ? base : rings.back(); }
    std::vector<std::size_t> stage_degrees() const;
    std::size_t rank() const { return top()->rank(); }

    nlohmann::json to_json() const;
    static TowerAlgebra from_json(const nlohmann::json& j, std::size_t rank_cap = kDefaultRankCap);
};

// |GL_n(o/pi^m)| computed from the closed formula.
std::uint64_t gl_order(unsigned n, unsigned q, int m);

TowerAlgebra build_tower(const FormalOModule& X, int m, std::size_t rank_cap = kDefaultRankCap);

struct QuotientResult {
    FormalOModule module;
    RingPoly psi;
    AdditivePoly psi_additive;
    // a -> psi(phi(a)), the level data transported to the quotient
    LevelStructure induced;
};

// A: flat domain indices forming an o-submodule.
QuotientResult quotient_by_subgroup(const FormalOModule& X, const LevelStructure& phi, const std::vector<std::size_t>& A);

// psi_A(T) = prod_{a in A}(T - phi(a))
RingPoly subgroup_polynomial(const LevelStructure& phi, const std::vector<std::size_t>& A);

}  // namespace ltower
