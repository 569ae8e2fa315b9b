#include "ltower/laurent.hpp"

#include <algorithm>
#include <sstream>

#include "ltower/errors.hpp"

namespace ltower {

namespace {

int clamp_prec(long long p) { return p >= kExact ? kExact : static_cast<int>(p); }

}  // namespace

Laurent::Laurent(FieldPtr F, int val, std::vector<Fq> coeffs, int prec)
    : F_(std::move(F)), val_(val), c_(std::move(coeffs)), prec_(prec) {
    normalize();
}

Laurent Laurent::from_int(FieldPtr F, long long v) {
    const Fq c = F->from_int(v);
    return Laurent(std::move(F), 0, {c});
}

void Laurent::normalize() {
    std::size_t lead = 0;
    while (lead < c_.size() && c_[lead] == 0) ++lead;
    if (lead == c_.size()) {
        c_.clear();
        val_ = 0;
        return;
    }
    if (lead > 0) {
        c_.erase(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(lead));
        val_ += static_cast<int>(lead);
    }
    if (val_ >= prec_) {
        c_.clear();
        val_ = 0;
        return;
    }
    if (prec_ < kExact) {
        const long long keep = static_cast<long long>(prec_) - val_;
        if (static_cast<long long>(c_.size()) > keep) c_.resize(static_cast<std::size_t>(keep));
    }
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

int Laurent::valuation() const {
    if (!c_.empty()) return val_;
    if (is_exact()) return kExact;
    throw PrecisionExhausted("valuation of an element that is zero to precision " + std::to_string(prec_));
}

Fq Laurent::coeff(int k) const {
    if (k >= prec_) throw PrecisionExhausted("coefficient of pi^" + std::to_string(k) + " beyond precision " + std::to_string(prec_));
    if (c_.empty() || k < val_) return 0;
    const long long i = static_cast<long long>(k) - val_;
    return i < static_cast<long long>(c_.size()) ? c_[static_cast<std::size_t>(i)] : 0;
}

Laurent Laurent::operator+(const Laurent& o) const {
    if (!F_) return o;
    if (!o.F_) return *this;
    const int prec = std::min(prec_, o.prec_);
    if (c_.empty()) return Laurent(o.F_, o.val_, o.c_, prec);
    if (o.c_.empty()) return Laurent(F_, val_, c_, prec);
    const int lo = std::min(val_, o.val_);
    long long hi = std::max(static_cast<long long>(val_) + static_cast<long long>(c_.size()),
                            static_cast<long long>(o.val_) + static_cast<long long>(o.c_.size()));
    hi = std::min<long long>(hi, prec);
    if (hi <= lo) return zero(F_, prec);
    std::vector<Fq> r(static_cast<std::size_t>(hi - lo), 0);
    for (std::size_t i = 0; i < c_.size(); ++i) {
        const long long k = val_ + static_cast<long long>(i) - lo;
        if (k < static_cast<long long>(r.size())) r[static_cast<std::size_t>(k)] = c_[i];
    }
    for (std::size_t i = 0; i < o.c_.size(); ++i) {
        const long long k = o.val_ + static_cast<long long>(i) - lo;
        if (k < static_cast<long long>(r.size())) r[static_cast<std::size_t>(k)] = F_->add(r[static_cast<std::size_t>(k)], o.c_[i]);
    }
    return Laurent(F_, lo, std::move(r), prec);
}

Laurent Laurent::operator-() const {
    Laurent r = *this;
    for (auto& x : r.c_) x = F_->neg(x);
    return r;
}

Laurent Laurent::operator-(const Laurent& o) const { return *this + (-o); }

Laurent Laurent::operator*(const Laurent& o) const {
    const long long va = valuation_lower_bound(), vb = o.valuation_lower_bound();
    const int prec = clamp_prec(std::min(va + o.prec_, vb + prec_));
    if (c_.empty() || o.c_.empty()) return zero(F_, prec);
    const int lo = val_ + o.val_;
    long long len = static_cast<long long>(c_.size() + o.c_.size()) - 1;
    if (prec < kExact) len = std::min<long long>(len, static_cast<long long>(prec) - lo);
    if (len <= 0) return zero(F_, prec);
    std::vector<Fq> r(static_cast<std::size_t>(len), 0);
    for (std::size_t i = 0; i < c_.size() && static_cast<long long>(i) < len; ++i) {
        if (c_[i] == 0) continue;
        for (std::size_t j = 0; j < o.c_.size() && static_cast<long long>(i + j) < len; ++j)
            if (o.c_[j] != 0) r[i + j] = F_->add(r[i + j], F_->mul(c_[i], o.c_[j]));
    }
    return Laurent(F_, lo, std::move(r), prec);
}

Laurent Laurent::scale(Fq c) const {
    if (c == 0) return zero(F_);
    Laurent r = *this;
    for (auto& x : r.c_) x = F_->mul(x, c);
    return r;
}

Laurent Laurent::shift(int k) const {
    Laurent r = *this;
    if (!r.c_.empty()) r.val_ += k;
    if (!is_exact()) r.prec_ += k;
    return r;
}

Laurent Laurent::inverse(int rel_prec) const {
    if (c_.empty()) throw PrecisionExhausted("inverse of an element that is zero to precision");
    if (is_exact() && c_.size() == 1) return monomial(F_, F_->inv(c_[0]), -val_);
    const long long avail = is_exact() ? kExact : static_cast<long long>(prec_) - val_;
    const int N = static_cast<int>(std::min<long long>(rel_prec, avail));
    std::vector<Fq> w(static_cast<std::size_t>(N), 0);
    const Fq inv0 = F_->inv(c_[0]);
    for (int k = 0; k < N; ++k) {
        Fq acc = k == 0 ? 1 : 0;
        for (int i = 1; i <= k && i < static_cast<int>(c_.size()); ++i)
            acc = F_->sub(acc, F_->mul(c_[static_cast<std::size_t>(i)], w[static_cast<std::size_t>(k - i)]));
        w[static_cast<std::size_t>(k)] = F_->mul(acc, inv0);
    }
    return Laurent(F_, -val_, std::move(w), -val_ + N);
}

Laurent Laurent::pow(unsigned e) const {
    Laurent r = Laurent::constant(F_, 1), b = *this;
    while (e) {
        if (e & 1u) r = r * b;
        e >>= 1;
        if (e) b = b * b;
    }
    return r;
}

Laurent Laurent::truncate(int prec) const { return Laurent(F_, val_, c_, std::min(prec, prec_)); }

Laurent Laurent::frobenius(unsigned k) const {
    Laurent r = *this;
    for (auto& x : r.c_) x = F_->frobenius(x, k);
    return r;
}

bool Laurent::operator==(const Laurent& o) const {
    if (is_exact() && o.is_exact()) return (c_.empty() && o.c_.empty()) || (val_ == o.val_ && c_ == o.c_);
    return (*this - o).is_zero();
}

std::string Laurent::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        if (!first) os << " + ";
        first = false;
        const int k = val_ + static_cast<int>(i);
        if (k == 0) {
            os << c_[i];
        } else {
            if (c_[i] != 1) os << c_[i] << '*';
            os << "pi";
            if (k != 1) os << '^' << k;
        }
    }
    if (first) os << '0';
    if (!is_exact()) os << " + O(pi^" << prec_ << ')';
    return os.str();
}

LPoly lpoly_mul(const LPoly& a, const LPoly& b) {
    if (a.empty() || b.empty()) return {};
    const FieldPtr& F = a[0].field();
    LPoly r(a.size() + b.size() - 1, Laurent::zero(F));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

LPoly lpoly_add(const LPoly& a, const LPoly& b) {
    LPoly r = a.size() >= b.size() ? a : b;
    const LPoly& s = a.size() >= b.size() ? b : a;
    for (std::size_t i = 0; i < s.size(); ++i) r[i] = a.size() >= b.size() ? r[i] + s[i] : s[i] + r[i];
    return r;
}

LPoly lpoly_sub(const LPoly& a, const LPoly& b) {
    LPoly nb = b;
    for (auto& x : nb) x = -x;
    return lpoly_add(a, nb);
}

LPoly lpoly_derivative(const LPoly& a) {
    if (a.size() <= 1) return {};
    LPoly r;
    for (std::size_t i = 1; i < a.size(); ++i) r.push_back(a[i].scale(a[i].field()->from_int(static_cast<long long>(i))));
    return r;
}

LPoly lpoly_shift(const LPoly& f, const Laurent& c) {
    // Horner in T + c.
    if (f.empty()) return {};
    const FieldPtr& F = f[0].field();
    LPoly r{f.back()};
    const LPoly lin{c, Laurent::constant(F, 1)};
    for (std::size_t k = f.size() - 1; k-- > 0;) {
        r = lpoly_mul(r, lin);
        r[0] += f[k];
    }
    return r;
}

std::string lpoly_to_string(const LPoly& f) {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = f.size(); i-- > 0;) {
        if (f[i].is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        os << '(' << f[i].to_string() << ')';
        if (i > 0) os << "*T^" << i;
    }
    if (first) os << '0';
    return os.str();
}

LocalMatrix::LocalMatrix(FieldPtr F, int rows, int cols)
    : F_(F), r_(rows), c_(cols), a_(static_cast<std::size_t>(rows) * cols, Laurent::zero(F)) {}

LocalMatrix LocalMatrix::identity(FieldPtr F, int n) { return scalar(F, n, Laurent::constant(F, 1)); }

LocalMatrix LocalMatrix::scalar(FieldPtr F, int n, const Laurent& s) {
    LocalMatrix r(F, n, n);
    for (int i = 0; i < n; ++i) r.at(i, i) = s;
    return r;
}

LocalMatrix LocalMatrix::companion(const LPoly& f) {
    if (f.size() < 2) throw PreconditionError("companion matrix needs degree >= 1");
    const FieldPtr& F = f[0].field();
    if (!(f.back() == Laurent::constant(F, 1))) throw PreconditionError("companion matrix needs a monic polynomial");
    const int n = static_cast<int>(f.size()) - 1;
    LocalMatrix r(F, n, n);
    for (int i = 1; i < n; ++i) r.at(i, i - 1) = Laurent::constant(F, 1);
    for (int i = 0; i < n; ++i) r.at(i, n - 1) = -f[static_cast<std::size_t>(i)];
    return r;
}

LocalMatrix LocalMatrix::diagonal(const std::vector<Laurent>& d) {
    const FieldPtr& F = d.at(0).field();
    const int n = static_cast<int>(d.size());
    LocalMatrix r(F, n, n);
    for (int i = 0; i < n; ++i) r.at(i, i) = d[static_cast<std::size_t>(i)];
    return r;
}

LocalMatrix LocalMatrix::from_chain(const ChainRing& R, const ChainMat& x) {
    LocalMatrix r(R.field(), x.rows, x.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) r.at(i, j) = Laurent(R.field(), 0, R.digits(x.at(i, j)));
    return r;
}

LocalMatrix LocalMatrix::from_columns(const std::vector<std::vector<Laurent>>& cols) {
    const int c = static_cast<int>(cols.size());
    const int rows = static_cast<int>(cols.at(0).size());
    LocalMatrix r(cols[0][0].field(), rows, c);
    for (int j = 0; j < c; ++j)
        for (int i = 0; i < rows; ++i) r.at(i, j) = cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    return r;
}

std::vector<Laurent> LocalMatrix::column(int j) const {
    std::vector<Laurent> v;
    v.reserve(static_cast<std::size_t>(r_));
    for (int i = 0; i < r_; ++i) v.push_back(at(i, j));
    return v;
}

LocalMatrix LocalMatrix::operator*(const LocalMatrix& o) const {
    if (c_ != o.r_) throw PreconditionError("matrix shape mismatch");
    LocalMatrix r(F_, r_, o.c_);
    for (int i = 0; i < r_; ++i)
        for (int k = 0; k < c_; ++k) {
            const Laurent& x = at(i, k);
            if (x.is_zero() && x.is_exact()) continue;
            for (int j = 0; j < o.c_; ++j) r.at(i, j) += x * o.at(k, j);
        }
    return r;
}

LocalMatrix LocalMatrix::operator+(const LocalMatrix& o) const {
    LocalMatrix r = *this;
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] += o.a_[i];
    return r;
}

LocalMatrix LocalMatrix::operator-(const LocalMatrix& o) const {
    LocalMatrix r = *this;
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] -= o.a_[i];
    return r;
}

LocalMatrix LocalMatrix::operator*(const Laurent& s) const {
    LocalMatrix r = *this;
    for (auto& x : r.a_) x = x * s;
    return r;
}

std::vector<Laurent> LocalMatrix::operator*(const std::vector<Laurent>& v) const {
    std::vector<Laurent> r(static_cast<std::size_t>(r_), Laurent::zero(F_));
    for (int i = 0; i < r_; ++i)
        for (int k = 0; k < c_; ++k) r[static_cast<std::size_t>(i)] += at(i, k) * v[static_cast<std::size_t>(k)];
    return r;
}

LocalMatrix LocalMatrix::shift(int k) const {
    LocalMatrix r = *this;
    for (auto& x : r.a_) x = x.shift(k);
    return r;
}

LocalMatrix LocalMatrix::transpose() const {
    LocalMatrix r(F_, c_, r_);
    for (int i = 0; i < r_; ++i)
        for (int j = 0; j < c_; ++j) r.at(j, i) = at(i, j);
    return r;
}

bool LocalMatrix::operator==(const LocalMatrix& o) const {
    if (r_ != o.r_ || c_ != o.c_) return false;
    for (std::size_t i = 0; i < a_.size(); ++i)
        if (a_[i] != o.a_[i]) return false;
    return true;
}

// Samuelson-Berkowitz: charpoly(A) = T_A * charpoly(A_1), coefficients high to low.
static std::vector<Laurent> berkowitz(const LocalMatrix& A, int start) {
    const FieldPtr& F = A.field();
    const int n = A.n() - start;
    if (n == 0) return {Laurent::constant(F, 1)};
    const std::vector<Laurent> inner = berkowitz(A, start + 1);
    // t = [1, -a, -R C, -R A1 C, ..., -R A1^{n-2} C]
    std::vector<Laurent> t{Laurent::constant(F, 1), -A.at(start, start)};
    std::vector<Laurent> v;  // A1^k C
    for (int i = start + 1; i < A.n(); ++i) v.push_back(A.at(i, start));
    for (int k = 0; k + 2 <= n; ++k) {
        Laurent s = Laurent::zero(F);
        for (int j = 0; j < n - 1; ++j) s += A.at(start, start + 1 + j) * v[static_cast<std::size_t>(j)];
        t.push_back(-s);
        if (k + 3 <= n) {
            std::vector<Laurent> w(v.size(), Laurent::zero(F));
            for (int i = 0; i < n - 1; ++i)
                for (int j = 0; j < n - 1; ++j)
                    w[static_cast<std::size_t>(i)] += A.at(start + 1 + i, start + 1 + j) * v[static_cast<std::size_t>(j)];
            v = std::move(w);
        }
    }
    std::vector<Laurent> out(static_cast<std::size_t>(n + 1), Laurent::zero(F));
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j < n && j <= i; ++j) out[static_cast<std::size_t>(i)] += t[static_cast<std::size_t>(i - j)] * inner[static_cast<std::size_t>(j)];
    return out;
}

LPoly LocalMatrix::charpoly() const {
    if (r_ != c_) throw PreconditionError("charpoly of a non-square matrix");
    std::vector<Laurent> hi = berkowitz(*this, 0);
    return LPoly(hi.rbegin(), hi.rend());
}

Laurent LocalMatrix::det() const {
    const LPoly p = charpoly();
    return r_ % 2 == 0 ? p[0] : -p[0];
}

Laurent LocalMatrix::trace() const {
    Laurent s = Laurent::zero(F_);
    for (int i = 0; i < r_; ++i) s += at(i, i);
    return s;
}

LocalMatrix LocalMatrix::adjugate() const {
    const LPoly p = charpoly();
    const int n = r_;
    LocalMatrix Q = identity(F_, n);
    for (int k = 1; k <= n - 1; ++k) Q = (*this) * Q + scalar(F_, n, p[static_cast<std::size_t>(n - k)]);
    return n % 2 == 1 ? Q : Q * Laurent::constant(F_, F_->neg(1));
}

LocalMatrix LocalMatrix::inverse(int rel_prec) const {
    const Laurent d = det();
    if (d.is_zero()) throw PrecisionExhausted("matrix is singular to available precision");
    return adjugate() * d.inverse(rel_prec);
}

LocalMatrix LocalMatrix::pow(unsigned e) const {
    LocalMatrix r = identity(F_, r_), b = *this;
    while (e) {
        if (e & 1u) r = r * b;
        e >>= 1;
        if (e) b = b * b;
    }
    return r;
}

int LocalMatrix::min_valuation() const {
    int v = kExact;
    for (const auto& x : a_) v = std::min(v, x.valuation_lower_bound());
    return v;
}

int LocalMatrix::max_valuation() const {
    int v = -kExact;
    for (const auto& x : a_)
        if (!x.is_zero()) v = std::max(v, x.valuation());
    return v;
}

int LocalMatrix::min_precision() const {
    int v = kExact;
    for (const auto& x : a_) v = std::min(v, x.precision());
    return v;
}

bool LocalMatrix::in_k0() const {
    if (!is_integral()) return false;
    const Laurent d = det();
    return !d.is_zero() && d.valuation() == 0;
}

ChainMat LocalMatrix::reduce(const ChainRing& R) const {
    ChainMat x(r_, c_);
    for (int i = 0; i < r_; ++i)
        for (int j = 0; j < c_; ++j) {
            const Laurent& e = at(i, j);
            if (e.valuation_lower_bound() < 0) throw PreconditionError("reduction of a non-integral matrix");
            std::vector<Fq> d(static_cast<std::size_t>(R.m()));
            for (int k = 0; k < R.m(); ++k) d[static_cast<std::size_t>(k)] = e.coeff(k);
            x.at(i, j) = R.from_digits(d);
        }
    return x;
}

std::string LocalMatrix::to_string() const {
    std::ostringstream os;
    os << '[';
    for (int i = 0; i < r_; ++i) {
        if (i) os << "; ";
        for (int j = 0; j < c_; ++j) {
            if (j) os << ", ";
            os << at(i, j).to_string();
        }
    }
    os << ']';
    return os.str();
}

}  // namespace ltower
