#include "ltower/coeff_ring.hpp"

#include <algorithm>

#include "ltower/errors.hpp"

namespace ltower {

namespace {

bool all_zero(const Fq* a, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        if (a[i] != 0) return false;
    return true;
}

}  // namespace

CoeffRing::CoeffRing(FieldPtr field, int precision, std::vector<int> nil_orders)
    : field_(std::move(field)), precision_(precision), nil_orders_(std::move(nil_orders)) {
    if (precision_ < 1) throw PreconditionError("pi-precision must be at least 1");
    std::vector<int> radix{precision_};
    for (int e : nil_orders_) {
        if (e < 1) throw PreconditionError("nilpotency orders must be positive");
        radix.push_back(e);
    }
    std::size_t bd = 1;
    for (int r : radix) bd *= static_cast<std::size_t>(r);
    if (bd > 4096) throw CapExceeded("base ring dimension exceeds 4096");
    base_dim_ = dim_ = bd;
    base_exps_.resize(bd);
    for (std::size_t i = 0; i < bd; ++i) {
        std::size_t c = i;
        for (int r : radix) {
            base_exps_[i].push_back(static_cast<int>(c % r));
            c /= r;
        }
    }
    base_prod_.assign(bd * bd, -1);
    for (std::size_t i = 0; i < bd; ++i)
        for (std::size_t j = 0; j < bd; ++j) {
            bool ok = true;
            for (std::size_t t = 0; t < radix.size() && ok; ++t)
                if (base_exps_[i][t] + base_exps_[j][t] >= radix[t]) ok = false;
            if (ok) base_prod_[i * bd + j] = static_cast<int>(i + j);
        }
}

CoeffRing::CoeffRing(RingPtr parent, std::vector<std::vector<Fq>> low_coeffs)
    : field_(parent->field_),
      precision_(parent->precision_),
      nil_orders_(parent->nil_orders_),
      parent_(std::move(parent)),
      stage_(std::move(low_coeffs)) {
    level_ = parent_->level_ + 1;
    degree_ = stage_.size();
    dim_ = parent_->dim_ * degree_;
    base_dim_ = parent_->base_dim_;
    for (const auto& c : stage_)
        if (c.size() != parent_->dim_) throw PreconditionError("stage coefficient has wrong dimension");
}

RingPtr CoeffRing::base(FieldPtr field, int precision, std::vector<int> nil_orders) {
    return std::make_shared<const CoeffRing>(std::move(field), precision, std::move(nil_orders));
}

std::vector<std::size_t> CoeffRing::stage_degrees() const {
    std::vector<std::size_t> out;
    for (const CoeffRing* r = this; r->parent_; r = r->parent_.get()) out.push_back(r->degree_);
    std::reverse(out.begin(), out.end());
    return out;
}

const CoeffRing& CoeffRing::base_ring() const {
    const CoeffRing* r = this;
    while (r->parent_) r = r->parent_.get();
    return *r;
}

RingPtr CoeffRing::ancestor(int lvl) const {
    if (lvl < 0 || lvl > level_) throw PreconditionError("no ancestor at that level");
    RingPtr r = shared_from_this();
    while (r->level_ > lvl) r = r->parent_;
    return r;
}

bool CoeffRing::is_ancestor_of(const CoeffRing& other) const {
    for (const CoeffRing* r = &other; r; r = r->parent_.get())
        if (r == this) return true;
    return false;
}

void CoeffRing::add_into(const Fq* a, Fq* out, std::size_t len) const {
    const FqField& F = *field_;
    if (F.p() == 2) {
        for (std::size_t i = 0; i < len; ++i) out[i] ^= a[i];
        return;
    }
    for (std::size_t i = 0; i < len; ++i)
        if (a[i] != 0) out[i] = F.add(out[i], a[i]);
}

void CoeffRing::sub_into(const Fq* a, Fq* out, std::size_t len) const {
    const FqField& F = *field_;
    if (F.p() == 2) {
        for (std::size_t i = 0; i < len; ++i) out[i] ^= a[i];
        return;
    }
    for (std::size_t i = 0; i < len; ++i)
        if (a[i] != 0) out[i] = F.sub(out[i], a[i]);
}

void CoeffRing::mul_into(const Fq* a, const Fq* b, Fq* out) const {
    const FqField& F = *field_;
    std::fill(out, out + dim_, Fq{0});
    if (!parent_) {
        const std::size_t bd = base_dim_;
        for (std::size_t i = 0; i < bd; ++i) {
            if (a[i] == 0) continue;
            const int* row = &base_prod_[i * bd];
            for (std::size_t j = 0; j < bd; ++j) {
                if (b[j] == 0 || row[j] < 0) continue;
                out[row[j]] = F.add(out[row[j]], F.mul(a[i], b[j]));
            }
        }
        return;
    }
    const std::size_t sub = parent_->dim_;
    const std::size_t d = degree_;
    std::vector<Fq> prod((2 * d - 1) * sub, 0);
    std::vector<Fq> tmp(sub);
    std::vector<char> az(d), bz(d);
    for (std::size_t i = 0; i < d; ++i) {
        az[i] = all_zero(a + i * sub, sub);
        bz[i] = all_zero(b + i * sub, sub);
    }
    for (std::size_t i = 0; i < d; ++i) {
        if (az[i]) continue;
        for (std::size_t j = 0; j < d; ++j) {
            if (bz[j]) continue;
            parent_->mul_into(a + i * sub, b + j * sub, tmp.data());
            add_into(tmp.data(), &prod[(i + j) * sub], sub);
        }
    }
    for (std::size_t k = 2 * d - 2; k >= d; --k) {
        const Fq* t = &prod[k * sub];
        if (all_zero(t, sub)) continue;
        std::vector<Fq> top(t, t + sub);
        for (std::size_t j = 0; j < d; ++j) {
            if (all_zero(stage_[j].data(), sub)) continue;
            parent_->mul_into(top.data(), stage_[j].data(), tmp.data());
            sub_into(tmp.data(), &prod[(k - d + j) * sub], sub);
        }
    }
    std::copy(prod.begin(), prod.begin() + static_cast<std::ptrdiff_t>(d * sub), out);
}

RingElem CoeffRing::zero() const { return RingElem(shared_from_this(), std::vector<Fq>(dim_, 0)); }

RingElem CoeffRing::one() const { return constant(1); }

RingElem CoeffRing::constant(Fq c) const {
    std::vector<Fq> v(dim_, 0);
    v[0] = c;
    return RingElem(shared_from_this(), std::move(v));
}

RingElem CoeffRing::from_int(long long v) const { return constant(field_->from_int(v)); }

RingElem CoeffRing::pi() const {
    std::vector<Fq> v(dim_, 0);
    if (precision_ > 1) v[1] = 1;
    return RingElem(shared_from_this(), std::move(v));
}

RingElem CoeffRing::w(std::size_t i) const {
    if (i >= nil_orders_.size()) throw PreconditionError("no such nilpotent variable");
    std::vector<Fq> v(dim_, 0);
    std::size_t stride = static_cast<std::size_t>(precision_);
    for (std::size_t t = 0; t < i; ++t) stride *= static_cast<std::size_t>(nil_orders_[t]);
    if (nil_orders_[i] > 1) v[stride] = 1;
    return RingElem(shared_from_this(), std::move(v));
}

RingElem CoeffRing::theta(int stage) const {
    if (stage < 1 || stage > level_) throw PreconditionError("no such tower stage");
    RingPtr r = ancestor(stage);
    std::vector<Fq> v(r->dim_, 0);
    const std::size_t sub = r->parent_->dim_;
    if (r->degree_ > 1) {
        v[sub] = 1;
    } else {
        // T + g_0 = 0
        for (std::size_t i = 0; i < sub; ++i) v[i] = field_->neg(r->stage_[0][i]);
    }
    return lift(RingElem(r, std::move(v)));
}

RingElem CoeffRing::gen() const { return theta(level_); }

RingElem CoeffRing::from_coords(std::vector<Fq> c) const {
    if (c.size() != dim_) throw PreconditionError("coordinate vector has wrong length");
    for (Fq x : c)
        if (x >= field_->q()) throw PreconditionError("coordinate out of field range");
    return RingElem(shared_from_this(), std::move(c));
}

RingElem CoeffRing::lift(const RingElem& x) const {
    if (x.ring().get() == this) return x;
    if (!x.ring()->is_ancestor_of(*this)) {
        if (x.ring()->same_as(*this)) return RingElem(shared_from_this(), x.coords());
        throw PreconditionError("element does not belong to a subring of this ring");
    }
    std::vector<Fq> v(dim_, 0);
    std::copy(x.coords().begin(), x.coords().end(), v.begin());
    return RingElem(shared_from_this(), std::move(v));
}

RingElem CoeffRing::from_monomials(const std::vector<std::pair<std::vector<int>, Fq>>& terms) const {
    const std::size_t k = nil_orders_.size();
    RingElem acc = zero();
    for (const auto& [exps, c] : terms) {
        if (exps.size() != 1 + k + static_cast<std::size_t>(level_))
            throw PreconditionError("monomial exponent vector has wrong length");
        if (c == 0) continue;
        RingElem t = constant(c);
        t = t * pi().pow(static_cast<std::uint64_t>(exps[0]));
        for (std::size_t i = 0; i < k; ++i) t = t * w(i).pow(static_cast<std::uint64_t>(exps[1 + i]));
        for (int s = 1; s <= level_; ++s) t = t * theta(s).pow(static_cast<std::uint64_t>(exps[k + s]));
        acc += t;
    }
    return acc;
}

std::vector<std::pair<std::vector<int>, Fq>> CoeffRing::to_monomials(const RingElem& x) const {
    RingElem y = lift(x);
    auto degs = stage_degrees();
    const auto& b = base_ring();
    std::vector<std::pair<std::vector<int>, Fq>> out;
    for (std::size_t idx = 0; idx < dim_; ++idx) {
        if (y.coords()[idx] == 0) continue;
        std::vector<int> e = b.base_exps_[idx % base_dim_];
        std::size_t rest = idx / base_dim_;
        for (std::size_t d : degs) {
            e.push_back(static_cast<int>(rest % d));
            rest /= d;
        }
        out.emplace_back(std::move(e), y.coords()[idx]);
    }
    return out;
}

nlohmann::json CoeffRing::to_json() const {
    nlohmann::json j;
    j["field"] = {{"p", field_->p()}, {"f", field_->f()}, {"modulus", field_->modulus()}};
    j["precision"] = precision_;
    j["nilpotent_orders"] = nil_orders_;
    std::vector<const CoeffRing*> chain;
    for (const CoeffRing* r = this; r->parent_; r = r->parent_.get()) chain.push_back(r);
    std::reverse(chain.begin(), chain.end());
    nlohmann::json stages = nlohmann::json::array();
    for (const CoeffRing* r : chain) stages.push_back(r->stage_);
    j["stages"] = stages;
    return j;
}

RingPtr CoeffRing::from_json(const nlohmann::json& j, std::size_t rank_cap) {
    const auto& fj = j.at("field");
    auto field = std::make_shared<const FqField>(fj.at("p").get<unsigned>(), fj.at("f").get<unsigned>(),
                                                 fj.at("modulus").get<std::vector<unsigned>>());
    RingPtr r = base(field, j.at("precision").get<int>(), j.at("nilpotent_orders").get<std::vector<int>>());
    for (const auto& st : j.at("stages")) {
        auto low = st.get<std::vector<std::vector<Fq>>>();
        if (r->rank() * low.size() > rank_cap) throw CapExceeded("ring rank exceeds cap");
        r = std::make_shared<const CoeffRing>(r, std::move(low));
    }
    return r;
}

bool CoeffRing::same_as(const CoeffRing& o) const {
    if (this == &o) return true;
    if (!field_->same_as(*o.field_) || precision_ != o.precision_ || nil_orders_ != o.nil_orders_) return false;
    if (level_ != o.level_) return false;
    if (!parent_) return true;
    return stage_ == o.stage_ && parent_->same_as(*o.parent_);
}

// ---------------------------------------------------------------------------

RingElem::RingElem(RingPtr ring, std::vector<Fq> coords) : ring_(std::move(ring)), c_(std::move(coords)) {}

bool RingElem::is_zero() const {
    for (Fq x : c_)
        if (x != 0) return false;
    return true;
}

namespace {

// Bring two elements into a common ring (the larger of an ancestor pair).
RingPtr common_ring(const RingPtr& a, const RingPtr& b) {
    if (a.get() == b.get()) return a;
    if (a->is_ancestor_of(*b)) return b;
    if (b->is_ancestor_of(*a)) return a;
    if (a->same_as(*b)) return a;
    throw PreconditionError("ring elements belong to unrelated rings");
}

}  // namespace

RingElem RingElem::operator+(const RingElem& o) const {
    RingElem r = *this;
    r += o;
    return r;
}

RingElem RingElem::operator-(const RingElem& o) const {
    RingElem r = *this;
    r -= o;
    return r;
}

RingElem RingElem::operator-() const {
    RingElem r = ring_->zero();
    r -= *this;
    return r;
}

RingElem& RingElem::operator+=(const RingElem& o) {
    RingPtr R = common_ring(ring_, o.ring_);
    if (R.get() != ring_.get()) *this = R->lift(*this);
    if (o.ring_.get() != R.get()) {
        RingElem t = R->lift(o);
        R->add_into(t.c_.data(), c_.data(), c_.size());
    } else {
        R->add_into(o.c_.data(), c_.data(), c_.size());
    }
    return *this;
}

RingElem& RingElem::operator-=(const RingElem& o) {
    RingPtr R = common_ring(ring_, o.ring_);
    if (R.get() != ring_.get()) *this = R->lift(*this);
    if (o.ring_.get() != R.get()) {
        RingElem t = R->lift(o);
        R->sub_into(t.c_.data(), c_.data(), c_.size());
    } else {
        R->sub_into(o.c_.data(), c_.data(), c_.size());
    }
    return *this;
}

RingElem RingElem::operator*(const RingElem& o) const {
    RingPtr R = common_ring(ring_, o.ring_);
    RingElem a = R->lift(*this);
    RingElem b = R->lift(o);
    std::vector<Fq> out(R->dim());
    R->mul_into(a.c_.data(), b.c_.data(), out.data());
    return RingElem(R, std::move(out));
}

RingElem RingElem::scale(Fq c) const {
    RingElem r = *this;
    const FqField& F = *ring_->field();
    for (auto& x : r.c_) x = F.mul(x, c);
    return r;
}

RingElem RingElem::pow(std::uint64_t e) const {
    RingElem result = ring_->one();
    RingElem base = *this;
    while (e > 0) {
        if (e & 1) result = result * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return result;
}

bool RingElem::is_nilpotent() const {
    RingElem x = *this;
    std::size_t e = 1;
    while (e < ring_->dim()) {
        if (x.is_zero()) return true;
        x = x * x;
        e *= 2;
    }
    return x.is_zero();
}

RingElem RingElem::inverse() const {
    const FqField& F = *ring_->field();
    const Fq c0 = c_[0];
    if (c0 != 0) {
        // x = c0 (1 - n); if n is nilpotent the geometric series terminates.
        RingElem n = ring_->one() - scale(F.inv(c0));
        RingElem sum = ring_->one();
        RingElem term = ring_->one();
        bool done = false;
        for (std::size_t i = 0; i <= ring_->dim(); ++i) {
            term = term * n;
            if (term.is_zero()) {
                done = true;
                break;
            }
            sum += term;
        }
        if (done) return sum.scale(F.inv(c0));
    }
    // General fallback: solve x * y = 1 by linear algebra over F_q.
    const std::size_t d = ring_->dim();
    std::vector<std::vector<Fq>> cols(d);
    for (std::size_t j = 0; j < d; ++j) {
        std::vector<Fq> e(d, 0);
        e[j] = 1;
        cols[j] = (*this * RingElem(ring_, e)).c_;
    }
    // Augmented system rows: A y = e_0 where A[i][j] = cols[j][i].
    std::vector<std::vector<Fq>> A(d, std::vector<Fq>(d + 1, 0));
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) A[i][j] = cols[j][i];
        A[i][d] = i == 0 ? 1 : 0;
    }
    std::size_t row = 0;
    std::vector<std::size_t> pivcol;
    for (std::size_t col = 0; col < d && row < d; ++col) {
        std::size_t piv = row;
        while (piv < d && A[piv][col] == 0) ++piv;
        if (piv == d) continue;
        std::swap(A[piv], A[row]);
        const Fq inv = F.inv(A[row][col]);
        for (auto& v : A[row]) v = F.mul(v, inv);
        for (std::size_t i = 0; i < d; ++i) {
            if (i == row || A[i][col] == 0) continue;
            const Fq f = A[i][col];
            for (std::size_t j = 0; j <= d; ++j) A[i][j] = F.sub(A[i][j], F.mul(f, A[row][j]));
        }
        pivcol.push_back(col);
        ++row;
    }
    if (row < d) throw PreconditionError("ring element is not a unit");
    std::vector<Fq> y(d, 0);
    for (std::size_t i = 0; i < d; ++i) y[pivcol[i]] = A[i][d];
    return RingElem(ring_, std::move(y));
}

bool RingElem::is_unit() const {
    try {
        (void)inverse();
        return true;
    } catch (const PreconditionError&) {
        return false;
    }
}

bool RingElem::operator==(const RingElem& o) const {
    if (ring_.get() == o.ring_.get()) return c_ == o.c_;
    RingPtr R = common_ring(ring_, o.ring_);
    return R->lift(*this).c_ == R->lift(o).c_;
}

// ---------------------------------------------------------------------------

RingPoly::RingPoly(RingPtr ring, std::vector<RingElem> coeffs) : ring_(std::move(ring)) {
    c_.reserve(coeffs.size());
    for (auto& c : coeffs) c_.push_back(ring_->lift(c));
    trim();
}

RingPoly RingPoly::monomial(RingPtr ring, std::size_t degree, const RingElem& c) {
    std::vector<RingElem> v(degree + 1, ring->zero());
    v[degree] = ring->lift(c);
    return RingPoly(ring, std::move(v));
}

RingPoly RingPoly::constant(const RingElem& c) { return RingPoly(c.ring(), {c}); }

void RingPoly::trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

RingElem RingPoly::coeff(std::size_t i) const { return i < c_.size() ? c_[i] : ring_->zero(); }

bool RingPoly::is_monic() const {
    return !c_.empty() && c_.back() == ring_->one();
}

bool RingPoly::is_q_linear(unsigned q) const {
    std::size_t next = 1;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (i == next) {
            next *= q;
            continue;
        }
        if (!c_[i].is_zero()) return false;
    }
    return true;
}

RingPoly RingPoly::operator+(const RingPoly& o) const {
    RingPtr R = common_ring(ring_, o.ring_);
    std::vector<RingElem> v(std::max(c_.size(), o.c_.size()), R->zero());
    for (std::size_t i = 0; i < c_.size(); ++i) v[i] += c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i) v[i] += o.c_[i];
    return RingPoly(R, std::move(v));
}

RingPoly RingPoly::operator-(const RingPoly& o) const {
    RingPtr R = common_ring(ring_, o.ring_);
    std::vector<RingElem> v(std::max(c_.size(), o.c_.size()), R->zero());
    for (std::size_t i = 0; i < c_.size(); ++i) v[i] += c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i) v[i] -= o.c_[i];
    return RingPoly(R, std::move(v));
}

RingPoly RingPoly::operator*(const RingPoly& o) const {
    RingPtr R = common_ring(ring_, o.ring_);
    if (c_.empty() || o.c_.empty()) return RingPoly(R);
    std::vector<RingElem> v(c_.size() + o.c_.size() - 1, R->zero());
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_zero()) continue;
        for (std::size_t j = 0; j < o.c_.size(); ++j) {
            if (o.c_[j].is_zero()) continue;
            v[i + j] += c_[i] * o.c_[j];
        }
    }
    return RingPoly(R, std::move(v));
}

RingPoly RingPoly::operator*(const RingElem& c) const {
    RingPtr R = common_ring(ring_, c.ring());
    std::vector<RingElem> v;
    v.reserve(c_.size());
    for (const auto& a : c_) v.push_back(a * c);
    return RingPoly(R, std::move(v));
}

bool RingPoly::operator==(const RingPoly& o) const {
    if (c_.size() != o.c_.size()) return false;
    for (std::size_t i = 0; i < c_.size(); ++i)
        if (c_[i] != o.c_[i]) return false;
    return true;
}

RingElem RingPoly::eval(const RingElem& x) const {
    RingPtr R = common_ring(ring_, x.ring());
    RingElem acc = R->zero();
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
}

RingPoly RingPoly::compose(const RingPoly& inner) const {
    RingPtr R = common_ring(ring_, inner.ring_);
    RingPoly acc(R);
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * inner + RingPoly::constant(R->lift(c_[i]));
    return acc;
}

RingPoly RingPoly::derivative() const {
    std::vector<RingElem> v;
    for (std::size_t i = 1; i < c_.size(); ++i) v.push_back(c_[i].scale(ring_->field()->from_int(static_cast<long long>(i))));
    return RingPoly(ring_, std::move(v));
}

RingPoly RingPoly::lift_to(const RingPtr& r) const { return RingPoly(r, c_); }

RingPtr ring_extend(const RingPtr& r, const RingPoly& g0, std::size_t rank_cap) {
    RingPoly g = g0.lift_to(r);
    if (g.degree() < 1) throw PreconditionError("extension polynomial must have degree at least 1");
    if (!g.is_monic()) throw PreconditionError("extension polynomial must be monic");
    const std::size_t d = static_cast<std::size_t>(g.degree());
    if (r->rank() * d > rank_cap)
        throw CapExceeded("ring rank " + std::to_string(r->rank() * d) + " exceeds cap " + std::to_string(rank_cap));
    std::vector<std::vector<Fq>> low;
    low.reserve(d);
    for (std::size_t i = 0; i < d; ++i) low.push_back(g.coeff(i).coords());
    return std::make_shared<const CoeffRing>(r, std::move(low));
}

std::pair<RingPoly, RingPoly> poly_divmod(const RingPoly& f0, const RingPoly& g0) {
    RingPtr R = common_ring(f0.ring(), g0.ring());
    RingPoly f = f0.lift_to(R), g = g0.lift_to(R);
    if (g.is_zero()) throw PreconditionError("division by the zero polynomial");
    const RingElem lc_inv = g.leading().inverse();
    const int dg = g.degree();
    std::vector<RingElem> rem = f.coeffs();
    if (f.degree() < dg) return {RingPoly(R), f};
    std::vector<RingElem> quo(static_cast<std::size_t>(f.degree() - dg + 1), R->zero());
    for (int k = f.degree(); k >= dg; --k) {
        RingElem c = rem[static_cast<std::size_t>(k)] * lc_inv;
        if (c.is_zero()) continue;
        quo[static_cast<std::size_t>(k - dg)] = c;
        for (int j = 0; j <= dg; ++j) rem[static_cast<std::size_t>(k - dg + j)] -= c * g.coeffs()[static_cast<std::size_t>(j)];
    }
    rem.resize(static_cast<std::size_t>(dg));
    return {RingPoly(R, std::move(quo)), RingPoly(R, std::move(rem))};
}

RingPoly poly_divide_exact(const RingPoly& f, const RingPoly& g) {
    if (!g.is_zero() && !g.leading().is_unit()) throw PreconditionError("divisor leading coefficient is not a unit");
    auto [q, r] = poly_divmod(f, g);
    for (std::size_t i = 0; i < r.coeffs().size(); ++i)
        if (!r.coeffs()[i].is_zero()) throw NonExactDivision(static_cast<int>(i), r.coeffs()[i].coords());
    return q;
}

}  // namespace ltower
