#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace ltower {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline constexpr unsigned kDefaultConductorCap = 10000;

// Exact element of Q(zeta_N), stored in the power basis 1, zeta, ..., zeta^{phi(N)-1}.
class Cyclotomic {
public:
    Cyclotomic() : Cyclotomic(1) {}
    explicit Cyclotomic(unsigned conductor);
    static Cyclotomic from_rational(const Rational& r, unsigned conductor = 1);
    static Cyclotomic from_int(long long v, unsigned conductor = 1) { return from_rational(Rational(v), conductor); }
    // zeta_N^k
    static Cyclotomic zeta(unsigned conductor, long long k);

    unsigned conductor() const { return n_; }
    const std::vector<Rational>& coords() const { return c_; }
    // Re-expressed in Q(zeta_M) for N | M.
    Cyclotomic lift(unsigned m) const;

    Cyclotomic operator+(const Cyclotomic& o) const;
    Cyclotomic operator-(const Cyclotomic& o) const;
    Cyclotomic operator-() const;
    Cyclotomic operator*(const Cyclotomic& o) const;
    Cyclotomic operator*(const Rational& r) const;
    Cyclotomic& operator+=(const Cyclotomic& o) { return *this = *this + o; }
    Cyclotomic conj() const;
    // zeta -> zeta^k for gcd(k, N) = 1
    Cyclotomic galois(long long k) const;
    bool operator==(const Cyclotomic& o) const;
    bool operator!=(const Cyclotomic& o) const { return !(*this == o); }
    bool is_zero() const;
    bool is_rational() const;
    // Throws if not rational.
    Rational to_rational() const;
    std::string to_string() const;

    nlohmann::json to_json() const;
    static Cyclotomic from_json(const nlohmann::json& j);

    static void set_conductor_cap(unsigned cap);
    static unsigned conductor_cap();

private:
    // Reduce a vector of coefficients of zeta^0..zeta^{L-1} modulo Phi_N.
    static std::vector<Rational> reduce(unsigned n, std::vector<Rational> v);
    unsigned n_;
    std::vector<Rational> c_;
};

unsigned euler_phi(unsigned n);
// Integer coefficients of the n-th cyclotomic polynomial, low to high.
const std::vector<long long>& cyclotomic_poly(unsigned n);
unsigned lcm_u(unsigned a, unsigned b);

// <a, b> = (1/|G|) sum_k |C_k| a_k conj(b_k)
Cyclotomic class_inner_product(const std::vector<Cyclotomic>& a, const std::vector<Cyclotomic>& b,
                               const std::vector<std::size_t>& class_sizes, std::size_t group_order);

}  // namespace ltower
