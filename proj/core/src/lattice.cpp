#include "ltower/lattice.hpp"

#include <algorithm>

#include "ltower/errors.hpp"

namespace ltower {

namespace {

using Col = std::vector<Laurent>;

Laurent exact_of(const Laurent& x) { return Laurent(x.field(), x.first_index(), x.raw()); }

// Part of x with exponents >= e, divided by pi^e.
Laurent high_part(const Laurent& x, int e) {
    if (x.is_zero()) return Laurent::zero(x.field());
    std::vector<Fq> c;
    const int v = x.first_index();
    for (std::size_t i = 0; i < x.raw().size(); ++i)
        if (v + static_cast<int>(i) >= e) c.push_back(x.raw()[i]);
    if (c.empty()) return Laurent::zero(x.field());
    return Laurent(x.field(), std::max(v, e) - e, std::move(c));
}

// Howell-style echelon form of the integral columns G modulo pi^P, lifted.
LocalMatrix hnf_integral(const LocalMatrix& G, int P) {
    const FieldPtr& F = G.field();
    const int n = G.rows();
    if (P <= 0) return LocalMatrix::identity(F, n);
    std::vector<Col> active;
    for (int j = 0; j < G.cols(); ++j) {
        Col c(static_cast<std::size_t>(n));
        bool nonzero = false;
        for (int i = 0; i < n; ++i) {
            const Laurent& x = G.at(i, j);
            if (x.precision() < P && x.valuation_lower_bound() < P)
                throw PrecisionExhausted("lattice generator known only to precision " + std::to_string(x.precision()));
            c[static_cast<std::size_t>(i)] = x.truncate(P);
            nonzero = nonzero || !c[static_cast<std::size_t>(i)].is_zero();
        }
        if (nonzero) active.push_back(std::move(c));
    }
    std::vector<Col> Hc(static_cast<std::size_t>(n));
    std::vector<int> e(static_cast<std::size_t>(n), P);
    for (int i = n - 1; i >= 0; --i) {
        const auto row = static_cast<std::size_t>(i);
        int best = -1, bv = P;
        for (std::size_t k = 0; k < active.size(); ++k) {
            const int v = active[k][row].valuation_lower_bound();
            if (v < bv) bv = v, best = static_cast<int>(k);
        }
        if (best < 0) {
            Col c(static_cast<std::size_t>(n), Laurent::zero(F));
            c[row] = Laurent::pi_power(F, P);
            Hc[row] = std::move(c);
            continue;
        }
        Col c = std::move(active[static_cast<std::size_t>(best)]);
        active.erase(active.begin() + best);
        // exact lifts: a different lift changes c by a multiple of the aug column below
        const Laurent uinv = exact_of(c[row].shift(-bv)).inverse(P);
        for (auto& x : c) x = (x * uinv).truncate(P);
        c[row] = Laurent::pi_power(F, bv);
        for (auto& x : active) {
            if (x[row].is_zero()) continue;
            const Laurent t = exact_of(x[row]).shift(-bv);
            for (int r = 0; r < i; ++r) x[static_cast<std::size_t>(r)] = (x[static_cast<std::size_t>(r)] - t * c[static_cast<std::size_t>(r)]).truncate(P);
            x[row] = Laurent::zero(F, P);
        }
        // pi^{P-v} c vanishes in row i but is still in the span.
        Col aug(static_cast<std::size_t>(n), Laurent::zero(F, P));
        bool nonzero = false;
        for (int r = 0; r < i; ++r) {
            aug[static_cast<std::size_t>(r)] = c[static_cast<std::size_t>(r)].shift(P - bv).truncate(P);
            nonzero = nonzero || !aug[static_cast<std::size_t>(r)].is_zero();
        }
        if (nonzero) active.push_back(std::move(aug));
        e[row] = bv;
        Hc[row] = std::move(c);
    }
    LocalMatrix H(F, n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i <= j; ++i) H.at(i, j) = exact_of(Hc[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]);
    for (int j = 0; j < n; ++j)
        for (int i = j - 1; i >= 0; --i) {
            const Laurent t = high_part(H.at(i, j), e[static_cast<std::size_t>(i)]);
            if (t.is_zero()) continue;
            for (int r = 0; r <= i; ++r) H.at(r, j) = H.at(r, j) - t * H.at(r, i);
        }
    return H;
}

}  // namespace

Lattice Lattice::from_hnf(LocalMatrix H) {
    Lattice L;
    L.H_ = std::move(H);
    L.build_key();
    return L;
}

Lattice Lattice::standard(FieldPtr F, int n) { return from_hnf(LocalMatrix::identity(std::move(F), n)); }

Lattice Lattice::from_generators(const LocalMatrix& G, int contain) {
    const int s = G.min_valuation();
    if (s >= kExact) throw PreconditionError("lattice generators are all zero");
    const LocalMatrix H = hnf_integral(G.shift(-s), contain - s);
    return from_hnf(H.shift(s));
}

Lattice Lattice::from_basis(const LocalMatrix& B) {
    if (B.rows() != B.cols()) throw PreconditionError("lattice basis must be square");
    const Laurent d = B.det();
    if (d.is_zero()) throw PrecisionExhausted("lattice basis is singular to available precision");
    const int s = B.min_valuation();
    return from_generators(B, d.valuation() - (B.n() - 1) * s);
}

std::vector<int> Lattice::diagonal_exponents() const {
    std::vector<int> e;
    for (int i = 0; i < n(); ++i) e.push_back(H_.at(i, i).valuation());
    return e;
}

int Lattice::volume() const {
    int s = 0;
    for (int x : diagonal_exponents()) s += x;
    return s;
}

LocalMatrix Lattice::basis_inverse() const { return H_.inverse(); }

int Lattice::max_elementary_divisor() const { return -basis_inverse().min_valuation(); }

Lattice Lattice::scaled(int k) const { return k == 0 ? *this : from_hnf(H_.shift(k)); }

bool Lattice::contains(const std::vector<Laurent>& v) const {
    const int N = n();
    std::vector<Laurent> x(static_cast<std::size_t>(N), Laurent::zero(field()));
    for (int i = N - 1; i >= 0; --i) {
        Laurent r = v[static_cast<std::size_t>(i)];
        for (int k = i + 1; k < N; ++k) r -= H_.at(i, k) * x[static_cast<std::size_t>(k)];
        x[static_cast<std::size_t>(i)] = r.shift(-H_.at(i, i).valuation());
        if (x[static_cast<std::size_t>(i)].valuation_lower_bound() < 0) return false;
    }
    return true;
}

bool Lattice::contains(const Lattice& o) const {
    for (int j = 0; j < o.n(); ++j)
        if (!contains(o.H_.column(j))) return false;
    return true;
}

Lattice Lattice::image(const LocalMatrix& g) const { return from_basis(g * H_); }

Lattice Lattice::sum(const Lattice& o) const {
    const int N = n();
    LocalMatrix G(field(), N, 2 * N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            G.at(i, j) = H_.at(i, j);
            G.at(i, N + j) = o.H_.at(i, j);
        }
    return from_generators(G, std::min(max_elementary_divisor(), o.max_elementary_divisor()));
}

void Lattice::build_key() {
    key_.clear();
    key_.push_back(H_.n());
    for (int i = 0; i < H_.n(); ++i)
        for (int j = 0; j < H_.n(); ++j) {
            const Laurent& x = H_.at(i, j);
            if (x.is_zero()) {
                key_.push_back(INT64_MIN);
                continue;
            }
            key_.push_back(x.first_index());
            key_.push_back(static_cast<std::int64_t>(x.raw().size()));
            for (Fq c : x.raw()) key_.push_back(c);
        }
}

nlohmann::json laurent_to_json(const Laurent& x) {
    nlohmann::json c = nlohmann::json::array();
    if (!x.is_zero()) {
        c.push_back(x.first_index());
        for (Fq d : x.raw()) c.push_back(d);
    }
    if (x.is_exact()) return c;
    return {{"terms", c}, {"prec", x.precision()}};
}

Laurent laurent_from_json(const FieldPtr& F, const nlohmann::json& j) {
    const nlohmann::json& c = j.is_object() ? j.at("terms") : j;
    const int prec = j.is_object() ? j.at("prec").get<int>() : kExact;
    if (c.empty()) return Laurent::zero(F, prec);
    std::vector<Fq> d;
    for (std::size_t i = 1; i < c.size(); ++i) d.push_back(c[i].get<Fq>());
    return Laurent(F, c[0].get<int>(), std::move(d), prec);
}

nlohmann::json Lattice::to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < n(); ++i) {
        nlohmann::json r = nlohmann::json::array();
        for (int j = 0; j < n(); ++j) r.push_back(laurent_to_json(H_.at(i, j)));
        rows.push_back(r);
    }
    return rows;
}

nlohmann::json CosetRep::to_json() const {
    nlohmann::json fr = nlohmann::json::array();
    for (int i = 0; i < frame.rows; ++i) {
        nlohmann::json r = nlohmann::json::array();
        for (int j = 0; j < frame.cols; ++j) r.push_back(frame.at(i, j));
        fr.push_back(r);
    }
    return {{"lattice", lattice.to_json()}, {"frame", fr}};
}

std::uint64_t for_each_normalized_lattice(FieldPtr F, int n, int B, const std::function<void(const Lattice&)>& f) {
    const unsigned q = F->q();
    std::uint64_t visited = 0;
    LocalMatrix H(F, n, n);
    std::vector<int> e(static_cast<std::size_t>(n), 0);
    // Column j: entries of rows i < j (polynomials of degree < e_i), then e_j.
    std::function<void(int, int)> fill = [&](int j, int i) {
        if (j == n) {
            if (H.min_valuation() != 0) return;
            Lattice L = Lattice::from_hnf(H);
            if (L.max_elementary_divisor() > B) return;
            ++visited;
            f(L);
            return;
        }
        if (i == j) {
            for (int d = 0; d <= B; ++d) {
                e[static_cast<std::size_t>(j)] = d;
                H.at(j, j) = Laurent::pi_power(F, d);
                fill(j + 1, 0);
            }
            return;
        }
        const int ei = e[static_cast<std::size_t>(i)];
        std::uint64_t count = 1;
        for (int k = 0; k < ei; ++k) count *= q;
        for (std::uint64_t code = 0; code < count; ++code) {
            std::vector<Fq> d(static_cast<std::size_t>(ei));
            std::uint64_t c = code;
            for (int k = 0; k < ei; ++k) d[static_cast<std::size_t>(k)] = static_cast<Fq>(c % q), c /= q;
            H.at(i, j) = Laurent(F, 0, std::move(d));
            fill(j, i + 1);
        }
    };
    fill(0, 0);
    return visited;
}

}  // namespace ltower
