#pragma once

#include <climits>
#include <string>
#include <vector>

#include "ltower/chain_ring.hpp"
#include "ltower/fq_field.hpp"

namespace ltower {

inline constexpr int kExact = INT_MAX / 4;
inline constexpr int kDefaultRelPrecision = 40;

// Element of F_q((pi)) known modulo pi^prec (prec = kExact for exact values).
// Stored as val + coefficients from pi^val upward; the leading coefficient is
// nonzero unless the element is zero to its precision.
class Laurent {
public:
    Laurent() = default;
    Laurent(FieldPtr F, int val, std::vector<Fq> coeffs, int prec = kExact);
    static Laurent zero(FieldPtr F, int prec = kExact) { return Laurent(std::move(F), 0, {}, prec); }
    static Laurent constant(FieldPtr F, Fq c) { return Laurent(std::move(F), 0, {c}); }
    static Laurent from_int(FieldPtr F, long long v);
    static Laurent monomial(FieldPtr F, Fq c, int k) { return Laurent(std::move(F), k, {c}); }
    static Laurent pi_power(FieldPtr F, int k) { return monomial(std::move(F), 1, k); }

    const FieldPtr& field() const { return F_; }
    bool is_exact() const { return prec_ >= kExact; }
    int precision() const { return prec_; }
    // Zero to the known precision.
    bool is_zero() const { return c_.empty(); }
    // Throws PrecisionExhausted for an inexact zero; kExact for exact zero.
    int valuation() const;
    // Valuation, or the precision for an inexact zero.
    int valuation_lower_bound() const { return c_.empty() ? prec_ : val_; }
    // Coefficient of pi^k (0 above the stored range; throws beyond precision).
    Fq coeff(int k) const;
    Fq leading() const { return c_.empty() ? 0 : c_[0]; }
    int first_index() const { return val_; }
    const std::vector<Fq>& raw() const { return c_; }
    bool is_monomial() const { return c_.size() == 1; }

    Laurent operator+(const Laurent& o) const;
    Laurent operator-(const Laurent& o) const;
    Laurent operator-() const;
    Laurent operator*(const Laurent& o) const;
    Laurent& operator+=(const Laurent& o) { return *this = *this + o; }
    Laurent& operator-=(const Laurent& o) { return *this = *this - o; }
    Laurent scale(Fq c) const;
    Laurent shift(int k) const;  // times pi^k
    Laurent inverse(int rel_prec = kDefaultRelPrecision) const;
    Laurent pow(unsigned e) const;
    Laurent truncate(int prec) const;
    // Coefficientwise x -> x^(p^k).
    Laurent frobenius(unsigned k) const;
    // Equality of known values (to the smaller precision).
    bool operator==(const Laurent& o) const;
    bool operator!=(const Laurent& o) const { return !(*this == o); }
    // Residue mod pi of an integral element.
    Fq residue() const { return coeff(0); }
    std::string to_string() const;

private:
    void normalize();
    FieldPtr F_;
    int val_ = 0;
    std::vector<Fq> c_;
    int prec_ = kExact;
};

// Polynomials over F_q((pi)), low to high.
using LPoly = std::vector<Laurent>;
LPoly lpoly_mul(const LPoly& a, const LPoly& b);
LPoly lpoly_add(const LPoly& a, const LPoly& b);
LPoly lpoly_sub(const LPoly& a, const LPoly& b);
LPoly lpoly_derivative(const LPoly& a);
// f(T + c)
LPoly lpoly_shift(const LPoly& f, const Laurent& c);
std::string lpoly_to_string(const LPoly& f);

class LocalMatrix {
public:
    LocalMatrix() = default;
    LocalMatrix(FieldPtr F, int rows, int cols);
    static LocalMatrix identity(FieldPtr F, int n);
    static LocalMatrix scalar(FieldPtr F, int n, const Laurent& s);
    // Companion matrix of a monic polynomial (low to high, leading 1 included).
    static LocalMatrix companion(const LPoly& f);
    static LocalMatrix diagonal(const std::vector<Laurent>& d);
    static LocalMatrix from_chain(const ChainRing& R, const ChainMat& x);
    static LocalMatrix from_columns(const std::vector<std::vector<Laurent>>& cols);

    const FieldPtr& field() const { return F_; }
    int rows() const { return r_; }
    int cols() const { return c_; }
    int n() const { return r_; }
    Laurent& at(int i, int j) { return a_[static_cast<std::size_t>(i) * c_ + j]; }
    const Laurent& at(int i, int j) const { return a_[static_cast<std::size_t>(i) * c_ + j]; }
    std::vector<Laurent> column(int j) const;

    LocalMatrix operator*(const LocalMatrix& o) const;
    LocalMatrix operator+(const LocalMatrix& o) const;
    LocalMatrix operator-(const LocalMatrix& o) const;
    LocalMatrix operator*(const Laurent& s) const;
    std::vector<Laurent> operator*(const std::vector<Laurent>& v) const;
    LocalMatrix shift(int k) const;
    LocalMatrix transpose() const;
    bool operator==(const LocalMatrix& o) const;
    bool operator!=(const LocalMatrix& o) const { return !(*this == o); }

    // Characteristic polynomial det(T - M), low to high (division-free).
    LPoly charpoly() const;
    Laurent det() const;
    Laurent trace() const;
    LocalMatrix adjugate() const;
    LocalMatrix inverse(int rel_prec = kDefaultRelPrecision) const;
    LocalMatrix pow(unsigned e) const;
    // min over entries of the valuation lower bound (kExact for zero matrix)
    int min_valuation() const;
    int max_valuation() const;
    int min_precision() const;
    bool is_integral() const { return min_valuation() >= 0; }
    // In GL_n(o): integral with unit determinant.
    bool in_k0() const;
    ChainMat reduce(const ChainRing& R) const;
    std::string to_string() const;

private:
    FieldPtr F_;
    int r_ = 0, c_ = 0;
    std::vector<Laurent> a_;
};

}  // namespace ltower
