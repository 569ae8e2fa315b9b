#include "ltower/cyclotomic.hpp"

#include <atomic>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

#include "ltower/errors.hpp"

namespace ltower {

namespace {

std::atomic<unsigned> g_conductor_cap{kDefaultConductorCap};

void check_cap(unsigned n) {
    if (n > g_conductor_cap.load()) throw CapExceeded("cyclotomic conductor " + std::to_string(n) + " exceeds cap");
}

std::vector<long long> poly_mul(const std::vector<long long>& a, const std::vector<long long>& b) {
    std::vector<long long> r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

// Exact division of integer polynomials by a monic divisor.
std::vector<long long> poly_div(std::vector<long long> a, const std::vector<long long>& b) {
    const std::size_t db = b.size() - 1;
    std::vector<long long> q(a.size() - db, 0);
    for (std::size_t k = a.size(); k-- > db;) {
        const long long c = a[k];
        q[k - db] = c;
        for (std::size_t j = 0; j <= db; ++j) a[k - db + j] -= c * b[j];
    }
    return q;
}

}  // namespace

unsigned euler_phi(unsigned n) {
    unsigned r = n, m = n;
    for (unsigned p = 2; p * p <= m; ++p) {
        if (m % p) continue;
        while (m % p == 0) m /= p;
        r -= r / p;
    }
    if (m > 1) r -= r / m;
    return r;
}

unsigned lcm_u(unsigned a, unsigned b) { return a / std::gcd(a, b) * b; }

const std::vector<long long>& cyclotomic_poly(unsigned n) {
    static std::recursive_mutex mu;
    static std::map<unsigned, std::vector<long long>> cache;
    std::lock_guard<std::recursive_mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    // Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d
    std::vector<long long> num(n + 1, 0);
    num[0] = -1;
    num[n] = 1;
    std::vector<long long> den{1};
    for (unsigned d = 1; d < n; ++d)
        if (n % d == 0) den = poly_mul(den, cyclotomic_poly(d));
    return cache.emplace(n, poly_div(num, den)).first->second;
}

void Cyclotomic::set_conductor_cap(unsigned cap) { g_conductor_cap = cap; }
unsigned Cyclotomic::conductor_cap() { return g_conductor_cap.load(); }

Cyclotomic::Cyclotomic(unsigned conductor) : n_(conductor) {
    if (conductor == 0) throw PreconditionError("conductor must be positive");
    check_cap(conductor);
    c_.assign(euler_phi(conductor), Rational(0));
}

std::vector<Rational> Cyclotomic::reduce(unsigned n, std::vector<Rational> v) {
    const auto& phi = cyclotomic_poly(n);
    const std::size_t d = phi.size() - 1;
    for (std::size_t k = v.size(); k-- > d;) {
        if (v[k] == 0) continue;
        const Rational c = v[k];
        for (std::size_t j = 0; j <= d; ++j) v[k - d + j] -= c * phi[j];
    }
    v.resize(d, Rational(0));
    return v;
}

Cyclotomic Cyclotomic::from_rational(const Rational& r, unsigned conductor) {
    Cyclotomic z(conductor);
    z.c_[0] = r;
    return z;
}

Cyclotomic Cyclotomic::zeta(unsigned conductor, long long k) {
    Cyclotomic z(conductor);
    long long e = k % static_cast<long long>(conductor);
    if (e < 0) e += conductor;
    std::vector<Rational> v(static_cast<std::size_t>(e) + 1, Rational(0));
    v[static_cast<std::size_t>(e)] = 1;
    z.c_ = reduce(conductor, std::move(v));
    return z;
}

Cyclotomic Cyclotomic::lift(unsigned m) const {
    if (m == n_) return *this;
    if (m % n_ != 0) throw PreconditionError("cannot lift cyclotomic to a non-multiple conductor");
    check_cap(m);
    const unsigned s = m / n_;
    std::vector<Rational> v(c_.size() * s + 1, Rational(0));
    for (std::size_t i = 0; i < c_.size(); ++i) v[i * s] = c_[i];
    Cyclotomic z(m);
    z.c_ = reduce(m, std::move(v));
    return z;
}

Cyclotomic Cyclotomic::operator+(const Cyclotomic& o) const {
    const unsigned m = lcm_u(n_, o.n_);
    Cyclotomic a = lift(m), b = o.lift(m);
    for (std::size_t i = 0; i < a.c_.size(); ++i) a.c_[i] += b.c_[i];
    return a;
}

Cyclotomic Cyclotomic::operator-(const Cyclotomic& o) const { return *this + (-o); }

Cyclotomic Cyclotomic::operator-() const {
    Cyclotomic a = *this;
    for (auto& x : a.c_) x = -x;
    return a;
}

Cyclotomic Cyclotomic::operator*(const Cyclotomic& o) const {
    const unsigned m = lcm_u(n_, o.n_);
    Cyclotomic a = lift(m), b = o.lift(m);
    std::vector<Rational> v(a.c_.size() + b.c_.size(), Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i] == 0) continue;
        for (std::size_t j = 0; j < b.c_.size(); ++j) {
            if (b.c_[j] == 0) continue;
            v[i + j] += a.c_[i] * b.c_[j];
        }
    }
    Cyclotomic z(m);
    z.c_ = reduce(m, std::move(v));
    return z;
}

Cyclotomic Cyclotomic::operator*(const Rational& r) const {
    Cyclotomic a = *this;
    for (auto& x : a.c_) x *= r;
    return a;
}

Cyclotomic Cyclotomic::galois(long long k) const {
    long long e = k % static_cast<long long>(n_);
    if (e < 0) e += n_;
    if (std::gcd(static_cast<unsigned>(e), n_) != 1 && n_ > 1) throw PreconditionError("galois exponent not coprime to conductor");
    std::vector<Rational> v(static_cast<std::size_t>(n_) * 2, Rational(0));
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        v[(i * static_cast<std::size_t>(e)) % n_] += c_[i];
    }
    Cyclotomic z(n_);
    z.c_ = reduce(n_, std::move(v));
    return z;
}

Cyclotomic Cyclotomic::conj() const { return galois(static_cast<long long>(n_) - 1); }

bool Cyclotomic::operator==(const Cyclotomic& o) const {
    const unsigned m = lcm_u(n_, o.n_);
    return lift(m).c_ == o.lift(m).c_;
}

bool Cyclotomic::is_zero() const {
    for (const auto& x : c_)
        if (x != 0) return false;
    return true;
}

bool Cyclotomic::is_rational() const {
    for (std::size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0) return false;
    return true;
}

Rational Cyclotomic::to_rational() const {
    if (!is_rational()) throw PreconditionError("cyclotomic number is not rational");
    return c_.empty() ? Rational(0) : c_[0];
}

std::string Cyclotomic::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        if (!first) os << (c_[i] > 0 ? " + " : " - ");
        else if (c_[i] < 0) os << "-";
        first = false;
        Rational a = c_[i] < 0 ? Rational(-c_[i]) : c_[i];
        if (i == 0 || a != 1) os << a;
        if (i > 0) os << (a != 1 ? "*" : "") << "z" << n_ << (i > 1 ? "^" + std::to_string(i) : "");
    }
    if (first) os << "0";
    return os.str();
}

nlohmann::json Cyclotomic::to_json() const {
    nlohmann::json coords = nlohmann::json::array();
    for (const auto& x : c_) {
        std::ostringstream os;
        os << x;
        coords.push_back(os.str());
    }
    return {{"conductor", n_}, {"coords", coords}};
}

Cyclotomic Cyclotomic::from_json(const nlohmann::json& j) {
    Cyclotomic z(j.at("conductor").get<unsigned>());
    const auto& coords = j.at("coords");
    if (coords.size() != z.c_.size()) throw PreconditionError("cyclotomic coordinate count mismatch");
    for (std::size_t i = 0; i < coords.size(); ++i) z.c_[i] = Rational(coords[i].get<std::string>());
    return z;
}

Cyclotomic class_inner_product(const std::vector<Cyclotomic>& a, const std::vector<Cyclotomic>& b,
                               const std::vector<std::size_t>& class_sizes, std::size_t group_order) {
    if (a.size() != b.size() || a.size() != class_sizes.size()) throw PreconditionError("class function length mismatch");
    Cyclotomic acc;
    for (std::size_t k = 0; k < a.size(); ++k)
        acc += (a[k] * b[k].conj()) * Rational(static_cast<long long>(class_sizes[k]));
    return acc * Rational(1, static_cast<long long>(group_order));
}

}  // namespace ltower
