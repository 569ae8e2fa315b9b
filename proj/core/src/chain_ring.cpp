#include "ltower/chain_ring.hpp"

#include <algorithm>

#include "ltower/errors.hpp"

namespace ltower {

ChainRing::ChainRing(FieldPtr field, int m) : field_(std::move(field)), m_(m), q_(field_->q()) {
    if (m < 1) throw PreconditionError("chain ring level must be at least 1");
    std::uint64_t s = 1;
    pow_q_.push_back(1);
    for (int i = 0; i < m; ++i) {
        s *= q_;
        if (s > (1u << 24)) throw CapExceeded("chain ring o/pi^m too large");
        pow_q_.push_back(static_cast<std::uint32_t>(s));
    }
    size_ = static_cast<std::uint32_t>(s);
    if (size_ <= 1024) {
        mul_table_.resize(static_cast<std::size_t>(size_) * size_);
        add_table_.resize(static_cast<std::size_t>(size_) * size_);
        for (std::uint32_t a = 0; a < size_; ++a)
            for (std::uint32_t b = 0; b < size_; ++b) {
                mul_table_[static_cast<std::size_t>(a) * size_ + b] = static_cast<std::uint16_t>(slow_mul(a, b));
                std::uint32_t r = 0;
                for (int i = 0; i < m_; ++i) {
                    Fq da = (a / pow_q_[i]) % q_, db = (b / pow_q_[i]) % q_;
                    r += field_->add(da, db) * pow_q_[i];
                }
                add_table_[static_cast<std::size_t>(a) * size_ + b] = static_cast<std::uint16_t>(r);
            }
    }
}

std::uint32_t ChainRing::slow_mul(std::uint32_t a, std::uint32_t b) const {
    std::vector<Fq> da = digits(a), db = digits(b), r(static_cast<std::size_t>(m_), 0);
    for (int i = 0; i < m_; ++i) {
        if (da[i] == 0) continue;
        for (int j = 0; i + j < m_; ++j) r[i + j] = field_->add(r[i + j], field_->mul(da[i], db[j]));
    }
    return from_digits(r);
}

std::uint32_t ChainRing::add(std::uint32_t a, std::uint32_t b) const {
    if (!add_table_.empty()) return add_table_[static_cast<std::size_t>(a) * size_ + b];
    if (field_->p() == 2) return a ^ b;
    std::uint32_t r = 0;
    for (int i = 0; i < m_; ++i) r += field_->add((a / pow_q_[i]) % q_, (b / pow_q_[i]) % q_) * pow_q_[i];
    return r;
}

std::uint32_t ChainRing::neg(std::uint32_t a) const {
    if (field_->p() == 2) return a;
    std::uint32_t r = 0;
    for (int i = 0; i < m_; ++i) r += field_->neg((a / pow_q_[i]) % q_) * pow_q_[i];
    return r;
}

std::uint32_t ChainRing::mul(std::uint32_t a, std::uint32_t b) const {
    if (!mul_table_.empty()) return mul_table_[static_cast<std::size_t>(a) * size_ + b];
    return slow_mul(a, b);
}

std::uint32_t ChainRing::inv(std::uint32_t a) const {
    if (!is_unit(a)) throw PreconditionError("non-unit in chain ring has no inverse");
    // Newton iteration x <- x(2 - a x) starting from the residue inverse.
    std::uint32_t x = field_->inv(a % q_);
    const std::uint32_t two = from_digits({field_->from_int(2)});
    for (int prec = 1; prec < m_; prec *= 2) x = mul(x, sub(two, mul(a, x)));
    return x;
}

int ChainRing::valuation(std::uint32_t a) const {
    if (a == 0) return m_;
    int v = 0;
    while (a % q_ == 0) {
        a /= q_;
        ++v;
    }
    return v;
}

std::uint32_t ChainRing::pi_power(int k) const { return k >= m_ ? 0 : pow_q_[static_cast<std::size_t>(k)]; }

std::vector<Fq> ChainRing::digits(std::uint32_t a) const {
    std::vector<Fq> d(static_cast<std::size_t>(m_));
    for (int i = 0; i < m_; ++i) {
        d[i] = a % q_;
        a /= q_;
    }
    return d;
}

std::uint32_t ChainRing::from_digits(const std::vector<Fq>& d) const {
    std::uint32_t r = 0;
    for (int i = 0; i < m_ && i < static_cast<int>(d.size()); ++i) r += d[i] * pow_q_[i];
    return r;
}

std::uint32_t ChainRing::shift_down(std::uint32_t a, int k) const {
    if (k <= 0) return a;
    if (k >= m_) return 0;
    return a / pow_q_[static_cast<std::size_t>(k)];
}

std::uint32_t ChainRing::shift_up(std::uint32_t a, int k) const {
    if (k <= 0) return a;
    if (k >= m_) return 0;
    return (a % pow_q_[static_cast<std::size_t>(m_ - k)]) * pow_q_[static_cast<std::size_t>(k)];
}

std::uint32_t ChainRing::reduce(std::uint32_t a, int k) const {
    if (k >= m_) return a;
    return a % pow_q_[static_cast<std::size_t>(k)];
}

ChainMat ChainMat::identity(int n) {
    ChainMat I(n, n);
    for (int i = 0; i < n; ++i) I.at(i, i) = 1;
    return I;
}

ChainMat mat_mul(const ChainRing& R, const ChainMat& x, const ChainMat& y) {
    if (x.cols != y.rows) throw PreconditionError("matrix dimension mismatch");
    ChainMat z(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            const std::uint32_t a = x.at(i, k);
            if (a == 0) continue;
            for (int j = 0; j < y.cols; ++j) {
                const std::uint32_t b = y.at(k, j);
                if (b != 0) z.at(i, j) = R.add(z.at(i, j), R.mul(a, b));
            }
        }
    return z;
}

ChainMat mat_sub(const ChainRing& R, const ChainMat& x, const ChainMat& y) {
    ChainMat z = x;
    for (std::size_t i = 0; i < z.a.size(); ++i) z.a[i] = R.sub(x.a[i], y.a[i]);
    return z;
}

std::optional<ChainMat> mat_inverse(const ChainRing& R, const ChainMat& x) {
    const int n = x.rows;
    if (x.cols != n) return std::nullopt;
    ChainMat a = x, inv = ChainMat::identity(n);
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (R.is_unit(a.at(r, col))) {
                piv = r;
                break;
            }
        if (piv < 0) return std::nullopt;
        if (piv != col)
            for (int j = 0; j < n; ++j) {
                std::swap(a.at(piv, j), a.at(col, j));
                std::swap(inv.at(piv, j), inv.at(col, j));
            }
        const std::uint32_t u = R.inv(a.at(col, col));
        for (int j = 0; j < n; ++j) {
            a.at(col, j) = R.mul(a.at(col, j), u);
            inv.at(col, j) = R.mul(inv.at(col, j), u);
        }
        for (int r = 0; r < n; ++r) {
            if (r == col || a.at(r, col) == 0) continue;
            const std::uint32_t f = a.at(r, col);
            for (int j = 0; j < n; ++j) {
                a.at(r, j) = R.sub(a.at(r, j), R.mul(f, a.at(col, j)));
                inv.at(r, j) = R.sub(inv.at(r, j), R.mul(f, inv.at(col, j)));
            }
        }
    }
    return inv;
}

bool mat_invertible(const ChainRing& R, const ChainMat& x) {
    // Invertible iff invertible mod pi, i.e. Gaussian elimination on residues succeeds.
    const int n = x.rows;
    if (x.cols != n) return false;
    const FqField& F = *R.field();
    std::vector<Fq> a(static_cast<std::size_t>(n) * n);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = x.a[i] % R.q();
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (a[static_cast<std::size_t>(r) * n + col] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) return false;
        for (int j = 0; j < n; ++j) std::swap(a[static_cast<std::size_t>(piv) * n + j], a[static_cast<std::size_t>(col) * n + j]);
        const Fq u = F.inv(a[static_cast<std::size_t>(col) * n + col]);
        for (int r = col + 1; r < n; ++r) {
            const Fq f = F.mul(a[static_cast<std::size_t>(r) * n + col], u);
            if (f == 0) continue;
            for (int j = col; j < n; ++j)
                a[static_cast<std::size_t>(r) * n + j] =
                    F.sub(a[static_cast<std::size_t>(r) * n + j], F.mul(f, a[static_cast<std::size_t>(col) * n + j]));
        }
    }
    return true;
}

ChainMat mat_reduce(const ChainRing& from, const ChainMat& x, int k) {
    ChainMat z = x;
    for (auto& v : z.a) v = from.reduce(v, k);
    return z;
}

SmithData smith_columns(const ChainRing& R, const ChainMat& A) {
    const int r = A.rows, c = A.cols, m = R.m();
    ChainMat B = A;
    SmithData out{ChainMat::identity(c), std::vector<int>(static_cast<std::size_t>(c), m)};
    const int steps = std::min(r, c);
    for (int t = 0; t < steps; ++t) {
        int best = m, bi = -1, bj = -1;
        for (int i = t; i < r; ++i)
            for (int j = t; j < c; ++j) {
                const int v = R.valuation(B.at(i, j));
                if (v < best) {
                    best = v;
                    bi = i;
                    bj = j;
                }
            }
        if (bi < 0) break;
        if (bi != t)
            for (int j = 0; j < c; ++j) std::swap(B.at(bi, j), B.at(t, j));
        if (bj != t) {
            for (int i = 0; i < r; ++i) std::swap(B.at(i, bj), B.at(i, t));
            for (int i = 0; i < c; ++i) std::swap(out.V.at(i, bj), out.V.at(i, t));
        }
        // Scale column t so the pivot is exactly pi^best.
        const std::uint32_t unit = R.shift_down(B.at(t, t), best);
        const std::uint32_t uinv = R.inv(unit);
        for (int i = 0; i < r; ++i) B.at(i, t) = R.mul(B.at(i, t), uinv);
        for (int i = 0; i < c; ++i) out.V.at(i, t) = R.mul(out.V.at(i, t), uinv);
        for (int i = t + 1; i < r; ++i) {
            if (B.at(i, t) == 0) continue;
            const std::uint32_t f = R.shift_down(B.at(i, t), best);
            for (int j = 0; j < c; ++j) B.at(i, j) = R.sub(B.at(i, j), R.mul(f, B.at(t, j)));
        }
        for (int j = t + 1; j < c; ++j) {
            if (B.at(t, j) == 0) continue;
            const std::uint32_t f = R.shift_down(B.at(t, j), best);
            for (int i = 0; i < r; ++i) B.at(i, j) = R.sub(B.at(i, j), R.mul(f, B.at(i, t)));
            for (int i = 0; i < c; ++i) out.V.at(i, j) = R.sub(out.V.at(i, j), R.mul(f, out.V.at(i, t)));
        }
        out.d[static_cast<std::size_t>(t)] = best;
    }
    return out;
}

}  // namespace ltower
