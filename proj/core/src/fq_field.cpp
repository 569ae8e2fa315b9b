#include "ltower/fq_field.hpp"

#include <sstream>

#include "ltower/errors.hpp"

namespace ltower {

namespace {

using Poly = std::vector<unsigned>;

void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

// a mod b over F_p, b monic.
Poly poly_mod(Poly a, const Poly& b, unsigned p) {
    trim(a);
    const std::size_t db = b.size() - 1;
    while (a.size() > db && !a.empty()) {
        const unsigned c = a.back();
        const std::size_t shift = a.size() - 1 - db;
        for (std::size_t i = 0; i <= db; ++i) {
            a[shift + i] = (a[shift + i] + p - (c * b[i]) % p) % p;
        }
        trim(a);
    }
    return a;
}

// Multiply two residues stored as digit vectors of length f.
Poly mulmod(const Poly& a, const Poly& b, const Poly& m, unsigned p) {
    Poly r(a.size() + b.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    }
    return poly_mod(r, m, p);
}

}  // namespace

bool is_prime(unsigned p) {
    if (p < 2) return false;
    for (unsigned d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

bool prime_power(unsigned q, unsigned& p, unsigned& f) {
    if (q < 2) return false;
    unsigned d = 2;
    while (q % d != 0) ++d;
    p = d;
    f = 0;
    while (q % d == 0) {
        q /= d;
        ++f;
    }
    return q == 1;
}

bool is_irreducible_mod_p(unsigned p, const std::vector<unsigned>& poly) {
    Poly f = poly;
    trim(f);
    if (f.size() < 2) return false;
    const std::size_t deg = f.size() - 1;
    if (f.back() != 1) return false;
    // Trial division by every monic polynomial of degree 1..deg/2.
    for (std::size_t d = 1; 2 * d <= deg; ++d) {
        std::size_t count = 1;
        for (std::size_t i = 0; i < d; ++i) count *= p;
        for (std::size_t code = 0; code < count; ++code) {
            Poly g(d + 1, 0);
            std::size_t c = code;
            for (std::size_t i = 0; i < d; ++i) {
                g[i] = static_cast<unsigned>(c % p);
                c /= p;
            }
            g[d] = 1;
            if (poly_mod(f, g, p).empty()) return false;
        }
    }
    return true;
}

FqField::FqField(unsigned p, unsigned f, std::vector<unsigned> modulus) : p_(p), f_(f), modulus_(std::move(modulus)) {
    if (!is_prime(p)) throw PreconditionError("field characteristic " + std::to_string(p) + " is not prime");
    if (f == 0) throw PreconditionError("field degree must be positive");
    std::uint64_t q = 1;
    for (unsigned i = 0; i < f; ++i) {
        q *= p;
        if (q > (1u << 16)) throw CapExceeded("field size exceeds 2^16");
    }
    q_ = static_cast<unsigned>(q);
    if (modulus_.size() != f + 1 || modulus_.back() != 1)
        throw PreconditionError("field modulus must be monic of degree f");
    for (auto c : modulus_)
        if (c >= p) throw PreconditionError("modulus coefficient out of range");
    if (!is_irreducible_mod_p(p, modulus_)) throw PreconditionError("field modulus is reducible over F_p");

    // Find a primitive element and build exp/log tables.
    const unsigned order = q_ - 1;
    exp_.assign(2 * static_cast<std::size_t>(order) + 2, 0);
    log_.assign(q_, 0);
    for (Fq cand = 1; cand < q_; ++cand) {
        Poly g = digits(cand);
        Poly cur{1};
        unsigned k = 0;
        bool primitive = true;
        std::vector<Fq> powers;
        powers.reserve(order);
        do {
            cur.resize(f_, 0);
            Fq code = from_digits(cur);
            powers.push_back(code);
            cur = mulmod(cur, g, modulus_, p_);
            ++k;
            cur.resize(f_, 0);
            if (from_digits(cur) == 1 && k < order) {
                primitive = false;
                break;
            }
        } while (k < order);
        if (!primitive) continue;
        for (unsigned i = 0; i < order; ++i) {
            exp_[i] = powers[i];
            exp_[i + order] = powers[i];
            log_[powers[i]] = i;
        }
        exp_[2 * order] = powers[0];
        exp_[2 * order + 1] = powers[order > 1 ? 1 : 0];
        return;
    }
    throw PreconditionError("no primitive element found");
}

std::shared_ptr<const FqField> FqField::make(unsigned p, unsigned f) {
    if (!is_prime(p)) throw PreconditionError("field characteristic " + std::to_string(p) + " is not prime");
    std::uint64_t count = 1;
    for (unsigned i = 0; i < f; ++i) {
        count *= p;
        if (count > (1u << 16)) throw CapExceeded("field size exceeds 2^16");
    }
    for (std::uint64_t code = 0; code < count; ++code) {
        std::vector<unsigned> m(f + 1, 0);
        std::uint64_t c = code;
        for (unsigned i = 0; i < f; ++i) {
            m[i] = static_cast<unsigned>(c % p);
            c /= p;
        }
        m[f] = 1;
        if (is_irreducible_mod_p(p, m)) return std::make_shared<const FqField>(p, f, m);
    }
    throw PreconditionError("no irreducible polynomial found");
}

Fq FqField::add(Fq a, Fq b) const {
    if (p_ == 2) return a ^ b;
    if (f_ == 1) return (a + b) % p_;
    Fq r = 0, place = 1;
    while (a != 0 || b != 0) {
        r += ((a % p_ + b % p_) % p_) * place;
        a /= p_;
        b /= p_;
        place *= p_;
    }
    return r;
}

Fq FqField::neg(Fq a) const {
    if (p_ == 2) return a;
    if (f_ == 1) return a == 0 ? 0 : p_ - a;
    Fq r = 0, place = 1;
    while (a != 0) {
        r += ((p_ - a % p_) % p_) * place;
        a /= p_;
        place *= p_;
    }
    return r;
}

Fq FqField::sub(Fq a, Fq b) const { return add(a, neg(b)); }

Fq FqField::inv(Fq a) const {
    if (a == 0) throw PreconditionError("inverse of zero in F_q");
    const unsigned order = q_ - 1;
    return exp_[(order - log_[a]) % order];
}

Fq FqField::pow(Fq a, std::uint64_t e) const {
    if (e == 0) return 1;
    if (a == 0) return 0;
    const std::uint64_t order = q_ - 1;
    return exp_[static_cast<std::size_t>((static_cast<std::uint64_t>(log_[a]) * (e % order)) % order)];
}

Fq FqField::from_int(long long v) const {
    long long r = v % static_cast<long long>(p_);
    if (r < 0) r += p_;
    return static_cast<Fq>(r);
}

Fq FqField::frobenius(Fq a, unsigned k) const {
    std::uint64_t e = 1;
    for (unsigned i = 0; i < k % f_; ++i) e *= p_;
    return pow(a, e);
}

bool FqField::in_subfield(Fq a, unsigned d) const {
    if (d == 0 || f_ % d != 0) return false;
    return frobenius(a, d) == a;
}

std::vector<unsigned> FqField::digits(Fq a) const {
    std::vector<unsigned> d(f_, 0);
    for (unsigned i = 0; i < f_; ++i) {
        d[i] = a % p_;
        a /= p_;
    }
    return d;
}

Fq FqField::from_digits(const std::vector<unsigned>& d) const {
    Fq r = 0, place = 1;
    for (unsigned i = 0; i < f_ && i < d.size(); ++i) {
        r += (d[i] % p_) * place;
        place *= p_;
    }
    return r;
}

std::string FqField::describe() const {
    std::ostringstream os;
    os << "F_" << q_;
    if (f_ > 1) {
        os << " = F_" << p_ << "[x]/(";
        bool first = true;
        for (int i = static_cast<int>(f_); i >= 0; --i) {
            if (modulus_[i] == 0) continue;
            if (!first) os << " + ";
            first = false;
            if (modulus_[i] != 1 || i == 0) os << modulus_[i];
            if (i > 0) os << "x" << (i > 1 ? "^" + std::to_string(i) : "");
        }
        os << ")";
    }
    return os.str();
}

FieldEmbedding::FieldEmbedding(FieldPtr small, FieldPtr big) : small_(std::move(small)), big_(std::move(big)) {
    if (small_->p() != big_->p() || big_->f() % small_->f() != 0)
        throw PreconditionError("field embedding requires F_{p^a} inside F_{p^b} with a | b");
    if (small_->same_as(*big_)) {
        image_.resize(small_->q());
        back_.resize(small_->q());
        for (Fq a = 0; a < small_->q(); ++a) image_[a] = back_[a] = a;
        return;
    }
    const auto& mod = small_->modulus();
    const unsigned p = small_->p();
    Fq found = 0;
    bool ok = false;
    for (Fq x = 0; x < big_->q() && !ok; ++x) {
        Fq acc = 0;
        for (int i = static_cast<int>(mod.size()) - 1; i >= 0; --i) {
            acc = big_->add(big_->mul(acc, x), big_->from_int(mod[i]));
        }
        if (acc == 0 && (small_->f() == 1 || x != 0)) {
            found = x;
            ok = true;
        }
    }
    if (!ok) throw PreconditionError("no root of the subfield modulus found");
    image_.assign(small_->q(), 0);
    back_.assign(big_->q(), kNone);
    for (Fq a = 0; a < small_->q(); ++a) {
        auto d = small_->digits(a);
        Fq acc = 0;
        for (int i = static_cast<int>(d.size()) - 1; i >= 0; --i)
            acc = big_->add(big_->mul(acc, found), big_->from_int(d[i] % p));
        image_[a] = acc;
        back_[acc] = a;
    }
}

Fq FieldEmbedding::to_small(Fq x) const {
    if (back_[x] == kNone) throw PreconditionError("element is not in the subfield");
    return back_[x];
}

}  // namespace ltower
