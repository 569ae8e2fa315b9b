#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace ltower {

// Elements of F_q are codes in [0, q): base-p digits are the coefficients of
// the residue class of x modulo the defining polynomial, lowest digit first.
using Fq = std::uint32_t;

class FqField {
public:
    // modulus: monic, low-to-high coefficients over F_p, length f+1.
    FqField(unsigned p, unsigned f, std::vector<unsigned> modulus);

    // Lexicographically smallest irreducible monic modulus of degree f.
    static std::shared_ptr<const FqField> make(unsigned p, unsigned f);

    unsigned p() const { return p_; }
    unsigned f() const { return f_; }
    unsigned q() const { return q_; }
    const std::vector<unsigned>& modulus() const { return modulus_; }

    Fq add(Fq a, Fq b) const;
    Fq sub(Fq a, Fq b) const;
    Fq neg(Fq a) const;
    Fq mul(Fq a, Fq b) const {
        if (a == 0 || b == 0) return 0;
        return exp_[log_[a] + log_[b]];
    }
    Fq inv(Fq a) const;
    Fq pow(Fq a, std::uint64_t e) const;
    Fq from_int(long long v) const;
    // x -> x^(p^k)
    Fq frobenius(Fq a, unsigned k = 1) const;
    Fq generator() const { return exp_[1]; }
    Fq primitive_root() const { return exp_[1]; }
    // Membership in the subfield of order p^d (d | f).
    bool in_subfield(Fq a, unsigned d) const;

    std::vector<unsigned> digits(Fq a) const;
    Fq from_digits(const std::vector<unsigned>& d) const;

    bool same_as(const FqField& o) const { return p_ == o.p_ && f_ == o.f_ && modulus_ == o.modulus_; }
    std::string describe() const;

private:
    unsigned p_, f_, q_;
    std::vector<unsigned> modulus_;
    std::vector<Fq> exp_;      // length 2(q-1)
    std::vector<unsigned> log_;
};

using FieldPtr = std::shared_ptr<const FqField>;

bool is_prime(unsigned p);
// q = p^f; returns false if q is not a prime power.
bool prime_power(unsigned q, unsigned& p, unsigned& f);
bool is_irreducible_mod_p(unsigned p, const std::vector<unsigned>& poly);

// Embedding of a subfield F_{p^a} into F_{p^b}, a | b; found by root search.
class FieldEmbedding {
public:
    FieldEmbedding(FieldPtr small, FieldPtr big);
    Fq to_big(Fq a) const { return image_[a]; }
    // Throws PreconditionError if x is not in the image.
    Fq to_small(Fq x) const;
    bool in_image(Fq x) const { return back_[x] != kNone; }
    const FieldPtr& small() const { return small_; }
    const FieldPtr& big() const { return big_; }

private:
    static constexpr Fq kNone = 0xffffffffu;
    FieldPtr small_, big_;
    std::vector<Fq> image_;
    std::vector<Fq> back_;
};

}  // namespace ltower
