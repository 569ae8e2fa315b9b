#include "ltower/strata.hpp"

#include <algorithm>
#include <functional>

#include "ltower/elliptic.hpp"
#include "ltower/errors.hpp"

namespace ltower {

namespace {

std::uint64_t upow(std::uint64_t b, unsigned e) {
    std::uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

std::vector<std::uint32_t> column_of(const ChainMat& X, int j) {
    std::vector<std::uint32_t> v(static_cast<std::size_t>(X.rows));
    for (int i = 0; i < X.rows; ++i) v[static_cast<std::size_t>(i)] = X.at(i, j);
    return v;
}

std::uint64_t flat_index(const ChainRing& R, const std::vector<std::uint32_t>& v) {
    std::uint64_t idx = 0;
    for (std::size_t k = v.size(); k-- > 0;) idx = idx * R.size() + v[k];
    return idx;
}

std::vector<std::uint32_t> flat_vector(const ChainRing& R, int n, std::uint64_t idx) {
    std::vector<std::uint32_t> v(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) v[static_cast<std::size_t>(k)] = static_cast<std::uint32_t>(idx % R.size()), idx /= R.size();
    return v;
}

// v - C v[I]
bool residual_zero(const ChainRing& R, const DirectSummand& A, const std::vector<std::uint32_t>& v) {
    for (int i = 0; i < A.n; ++i) {
        std::uint32_t acc = v[static_cast<std::size_t>(i)];
        for (int j = 0; j < A.h; ++j) {
            const std::uint32_t c = v[static_cast<std::size_t>(A.pivots[static_cast<std::size_t>(j)])];
            if (c) acc = R.sub(acc, R.mul(A.gens.at(i, j), c));
        }
        if (acc) return false;
    }
    return true;
}

std::optional<DirectSummand> summand_from_set(const ChainRing& R, int n, const std::vector<std::uint64_t>& elems) {
    ChainMat G(n, static_cast<int>(elems.size()));
    for (std::size_t j = 0; j < elems.size(); ++j) {
        const auto v = flat_vector(R, n, elems[j]);
        for (int i = 0; i < n; ++i) G.at(i, static_cast<int>(j)) = v[static_cast<std::size_t>(i)];
    }
    auto A = canonical_summand(R, G);
    if (!A) return std::nullopt;
    if (upow(R.size(), static_cast<unsigned>(A->h)) != elems.size()) return std::nullopt;
    return A;
}

}  // namespace

nlohmann::json DirectSummand::to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < n; ++i) {
        nlohmann::json r = nlohmann::json::array();
        for (int j = 0; j < h; ++j) r.push_back(gens.at(i, j));
        rows.push_back(r);
    }
    return {{"n", n}, {"m", m}, {"h", h}, {"pivots", pivots}, {"gens", rows}};
}

DirectSummand zero_summand(int n, int m) { return {n, m, 0, {}, ChainMat(n, 0)}; }

DirectSummand full_summand(int n, int m) {
    DirectSummand A{n, m, n, {}, ChainMat::identity(n)};
    for (int i = 0; i < n; ++i) A.pivots.push_back(i);
    return A;
}

std::optional<DirectSummand> canonical_summand(const ChainRing& R, const ChainMat& G) {
    const FqField& F = *R.field();
    const unsigned q = R.q();
    const int n = G.rows;
    // Pick columns whose residues are independent.
    std::vector<std::vector<Fq>> basis;
    std::vector<int> basis_pivot;
    std::vector<int> chosen;
    for (int j = 0; j < G.cols; ++j) {
        std::vector<Fq> v(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = G.at(i, j) % q;
        for (std::size_t b = 0; b < basis.size(); ++b) {
            const Fq c = v[static_cast<std::size_t>(basis_pivot[b])];
            if (!c) continue;
            for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = F.sub(v[static_cast<std::size_t>(i)], F.mul(c, basis[b][static_cast<std::size_t>(i)]));
        }
        int p = -1;
        for (int i = 0; i < n && p < 0; ++i)
            if (v[static_cast<std::size_t>(i)]) p = i;
        if (p < 0) continue;
        const Fq inv = F.inv(v[static_cast<std::size_t>(p)]);
        for (auto& x : v) x = F.mul(x, inv);
        basis.push_back(std::move(v));
        basis_pivot.push_back(p);
        chosen.push_back(j);
    }
    const int h = static_cast<int>(chosen.size());
    DirectSummand A{n, R.m(), h, {}, ChainMat(n, h)};
    if (h == 0) {
        for (int j = 0; j < G.cols; ++j)
            for (int i = 0; i < n; ++i)
                if (G.at(i, j)) return std::nullopt;
        return A;
    }
    // Pivot rows of the reduced column echelon form: topmost rule.
    std::vector<std::vector<Fq>> rem;
    for (int j : chosen) {
        std::vector<Fq> v(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = G.at(i, j) % q;
        rem.push_back(std::move(v));
    }
    std::vector<bool> used(rem.size(), false);
    for (int r = 0; r < n; ++r) {
        int s = -1;
        for (std::size_t k = 0; k < rem.size() && s < 0; ++k)
            if (!used[k] && rem[k][static_cast<std::size_t>(r)]) s = static_cast<int>(k);
        if (s < 0) continue;
        used[static_cast<std::size_t>(s)] = true;
        A.pivots.push_back(r);
        const Fq inv = F.inv(rem[static_cast<std::size_t>(s)][static_cast<std::size_t>(r)]);
        for (std::size_t k = 0; k < rem.size(); ++k) {
            if (used[k] || !rem[k][static_cast<std::size_t>(r)]) continue;
            const Fq c = F.mul(rem[k][static_cast<std::size_t>(r)], inv);
            for (int i = 0; i < n; ++i)
                rem[k][static_cast<std::size_t>(i)] = F.sub(rem[k][static_cast<std::size_t>(i)], F.mul(c, rem[static_cast<std::size_t>(s)][static_cast<std::size_t>(i)]));
        }
    }
    ChainMat B(n, h), Bi(h, h);
    for (int j = 0; j < h; ++j)
        for (int i = 0; i < n; ++i) B.at(i, j) = G.at(i, chosen[static_cast<std::size_t>(j)]);
    for (int k = 0; k < h; ++k)
        for (int j = 0; j < h; ++j) Bi.at(k, j) = B.at(A.pivots[static_cast<std::size_t>(k)], j);
    const auto inv = mat_inverse(R, Bi);
    if (!inv) return std::nullopt;
    A.gens = mat_mul(R, B, *inv);
    for (int j = 0; j < G.cols; ++j)
        if (!residual_zero(R, A, column_of(G, j))) return std::nullopt;
    return A;
}

std::uint64_t gaussian_binomial(unsigned n, unsigned h, unsigned q) {
    if (h > n) return 0;
    std::uint64_t num = 1, den = 1;
    for (unsigned i = 0; i < h; ++i) {
        num *= upow(q, n - i) - 1;
        den *= upow(q, i + 1) - 1;
    }
    return num / den;
}

std::uint64_t summand_count(unsigned n, unsigned h, unsigned q, int m) {
    return upow(q, static_cast<unsigned>((m - 1)) * h * (n - h)) * gaussian_binomial(n, h, q);
}

std::vector<DirectSummand> enumerate_summands(const ChainRing& R, int n, int h, std::uint64_t cap) {
    if (h < 0 || h > n) throw PreconditionError("summand rank out of range");
    const std::uint64_t expected = summand_count(static_cast<unsigned>(n), static_cast<unsigned>(h), R.q(), R.m());
    if (expected > cap) throw CapExceeded("summand enumeration would produce " + std::to_string(expected) + " labels");
    std::vector<DirectSummand> out;
    out.reserve(expected);
    const std::uint32_t small = R.size() / R.q();
    std::vector<int> I(static_cast<std::size_t>(h));
    std::function<void(int, int)> choose = [&](int k, int start) {
        if (k == h) {
            DirectSummand A{n, R.m(), h, I, ChainMat(n, h)};
            struct Slot { int row, col; bool pi_multiple; };
            std::vector<Slot> slots;
            std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
            for (int j = 0; j < h; ++j) is_pivot[static_cast<std::size_t>(I[static_cast<std::size_t>(j)])] = true;
            for (int j = 0; j < h; ++j) {
                A.gens.at(I[static_cast<std::size_t>(j)], j) = 1;
                for (int r = 0; r < n; ++r)
                    if (!is_pivot[static_cast<std::size_t>(r)]) slots.push_back({r, j, r < I[static_cast<std::size_t>(j)]});
            }
            std::vector<std::uint32_t> t(slots.size(), 0);
            while (true) {
                for (std::size_t s = 0; s < slots.size(); ++s)
                    A.gens.at(slots[s].row, slots[s].col) = slots[s].pi_multiple ? t[s] * R.q() : t[s];
                out.push_back(A);
                std::size_t s = 0;
                while (s < slots.size()) {
                    if (++t[s] < (slots[s].pi_multiple ? small : R.size())) break;
                    t[s] = 0;
                    ++s;
                }
                if (s == slots.size()) break;
            }
            return;
        }
        for (int r = start; r < n; ++r) {
            I[static_cast<std::size_t>(k)] = r;
            choose(k + 1, r + 1);
        }
    };
    choose(0, 0);
    std::sort(out.begin(), out.end());
    return out;
}

bool summand_contains(const ChainRing& R, const DirectSummand& A, const std::vector<std::uint32_t>& v) {
    return residual_zero(R, A, v);
}

bool summand_contains(const ChainRing& R, const DirectSummand& A, const DirectSummand& B) {
    for (int j = 0; j < B.h; ++j)
        if (!residual_zero(R, A, column_of(B.gens, j))) return false;
    return true;
}

std::vector<std::uint64_t> summand_elements(const ChainRing& R, const DirectSummand& A) {
    std::vector<std::uint64_t> out;
    std::vector<std::uint32_t> c(static_cast<std::size_t>(A.h), 0), v(static_cast<std::size_t>(A.n));
    while (true) {
        for (int i = 0; i < A.n; ++i) {
            std::uint32_t acc = 0;
            for (int j = 0; j < A.h; ++j)
                if (c[static_cast<std::size_t>(j)]) acc = R.add(acc, R.mul(A.gens.at(i, j), c[static_cast<std::size_t>(j)]));
            v[static_cast<std::size_t>(i)] = acc;
        }
        out.push_back(flat_index(R, v));
        int j = 0;
        while (j < A.h) {
            if (++c[static_cast<std::size_t>(j)] < R.size()) break;
            c[static_cast<std::size_t>(j)] = 0;
            ++j;
        }
        if (j == A.h) break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

DirectSummand reduce_summand(const ChainRing& R, const DirectSummand& A, const ChainRing& target) {
    if (target.m() > R.m() || target.m() < 1) throw PreconditionError("reduction target level out of range");
    DirectSummand B = A;
    B.m = target.m();
    for (auto& x : B.gens.a) x = R.reduce(x, target.m());
    return B;
}

namespace {

// Matrix of the inverse of the bottom composite pi^{m-m'} pi^{-r} g on (o/pi^{m'})^n.
ChainMat label_map_inverse(const LocalMatrix& g, int m, const ChainRing& Rmp, std::optional<int> r) {
    const int mp = Rmp.m();
    if (mp < 1 || mp > m) throw PreconditionError("strata_action needs m >= m' >= 1");
    const int lo = -g.inverse().min_valuation();
    const int hi = g.min_valuation() + (m - mp);
    int rr = hi;
    if (r) {
        rr = *r;
        if (rr < lo || rr > hi)
            throw PreconditionError("r = " + std::to_string(rr) + " violates o^n in pi^-r g o^n in pi^-(m-m') o^n (admissible ["
                                    + std::to_string(lo) + ", " + std::to_string(hi) + "])");
    } else if (hi < lo) {
        throw PreconditionError("no r with o^n in pi^-r g o^n in pi^-(m-m') o^n at these levels");
    }
    const LocalMatrix M = g.shift(m - mp - rr);
    const auto inv = mat_inverse(Rmp, M.reduce(Rmp));
    if (!inv) throw PreconditionError("the label map is not an isomorphism for this g at these levels");
    return *inv;
}

DirectSummand apply_label_map(const ChainRing& Rm, const ChainRing& Rmp, const ChainMat& Minv, const DirectSummand& A) {
    const DirectSummand Ar = A.m == Rmp.m() ? A : reduce_summand(Rm, A, Rmp);
    auto out = canonical_summand(Rmp, mat_mul(Rmp, Minv, Ar.gens));
    if (!out || out->h != A.h) throw CrossCheckFailure("label image is not a free summand of the same rank");
    return *out;
}

}  // namespace

DirectSummand strata_action(const LocalMatrix& g, const DirectSummand& A, const ChainRing& Rm, const ChainRing& Rmp, std::optional<int> r) {
    if (A.m != Rm.m() || A.n != g.n()) throw PreconditionError("label does not match the level or dimension");
    const ChainMat Minv = label_map_inverse(g, Rm.m(), Rmp, r);
    return apply_label_map(Rm, Rmp, Minv, A);
}

std::uint64_t count_fixed_labels(const LocalMatrix& g, const ChainRing& R, int h) {
    const ChainMat Minv = label_map_inverse(g, R.m(), R, std::nullopt);
    std::uint64_t c = 0;
    for (const auto& A : enumerate_summands(R, g.n(), h))
        if (apply_label_map(R, R, Minv, A) == A) ++c;
    return c;
}

std::uint64_t strata_fixed_count(const LocalMatrix& g, int m, int h) {
    require_elliptic(g);
    const Laurent d = g.det();
    if (d.valuation() != 0) throw PreconditionError("strata_fixed_count needs v(det g) = 0, got " + std::to_string(d.valuation()));
    if (h < 1 || h > g.n() - 1) throw PreconditionError("h must lie in [1, n-1]");
    const ChainRing R(g.field(), m);
    return count_fixed_labels(g, R, h);
}

StrataScan strata_fixed_scan(const LocalMatrix& g, int h, int m_max) {
    if (m_max < 1 || m_max > 8) throw CapExceeded("strata scan range must lie in [1, 8]");
    StrataScan s;
    s.h = h;
    for (int m = 1; m <= m_max; ++m) {
        s.labels.push_back(summand_count(static_cast<unsigned>(g.n()), static_cast<unsigned>(h), g.field()->q(), m));
        s.fixed.push_back(strata_fixed_count(g, m, h));
    }
    for (int m = m_max; m >= 1 && s.fixed[static_cast<std::size_t>(m - 1)] == 0; --m) s.threshold = m;
    return s;
}

nlohmann::json StrataScan::to_json() const {
    nlohmann::json j = {{"h", h}, {"labels", labels}, {"fixed", fixed}};
    j["threshold"] = threshold ? nlohmann::json(*threshold) : nlohmann::json(nullptr);
    return j;
}

nlohmann::json Flag::to_json() const {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& A : chain) a.push_back(A.to_json());
    return a;
}

std::vector<Flag> enumerate_flags(const ChainRing& R, int n, std::uint64_t cap) {
    std::vector<std::vector<DirectSummand>> by_rank(static_cast<std::size_t>(n + 1));
    for (int h = 1; h < n; ++h) by_rank[static_cast<std::size_t>(h)] = enumerate_summands(R, n, h, cap);
    std::vector<Flag> out;
    Flag cur;
    cur.chain.push_back(full_summand(n, R.m()));
    std::function<void(int)> extend = [&](int rank) {
        cur.chain.push_back(zero_summand(n, R.m()));
        out.push_back(cur);
        cur.chain.pop_back();
        if (out.size() > cap) throw CapExceeded("flag enumeration exceeded cap");
        for (int h = rank - 1; h >= 1; --h)
            for (const auto& B : by_rank[static_cast<std::size_t>(h)]) {
                if (!summand_contains(R, cur.chain.back(), B)) continue;
                cur.chain.push_back(B);
                extend(h);
                cur.chain.pop_back();
            }
    };
    extend(n);
    std::sort(out.begin(), out.end());
    return out;
}

bool much_less(const ValueVector& x, const ValueVector& y) {
    if (x.bottom) return !y.bottom;
    if (y.bottom) return false;
    const std::size_t k = std::max(x.tiers.size(), y.tiers.size());
    auto at = [k](const ValueVector& v, std::size_t i) { return i < v.tiers.size() ? v.tiers[i] : Rational(0); };
    std::size_t lx = k, ly = k;
    for (std::size_t i = 0; i < k && lx == k; ++i)
        if (at(x, i) != 0) lx = i;
    for (std::size_t i = 0; i < k && ly == k; ++i)
        if (at(y, i) != 0) ly = i;
    if (lx == k && ly == k) return false;
    if (lx < ly) return at(x, lx) < 0;
    if (lx > ly) return at(y, ly) > 0;
    return at(y, ly) > 0 && at(x, lx) < 0;
}

Flag flag_of_point(const ChainRing& R, int n, const std::vector<ValueVector>& values) {
    const std::uint64_t total = upow(R.size(), static_cast<unsigned>(n));
    if (values.size() != total) throw PreconditionError("value table must have one entry per domain vector");
    if (!values[0].bottom) throw PreconditionError("value of 0 must be the bottom element");
    Flag fl;
    fl.chain.push_back(full_summand(n, R.m()));
    std::vector<std::uint64_t> cur(total);
    for (std::uint64_t i = 0; i < total; ++i) cur[i] = i;
    while (cur.size() > 1) {
        std::vector<std::uint64_t> top;
        for (auto t : cur) {
            if (t == 0) continue;
            bool maximal = true;
            for (auto u : cur)
                if (much_less(values[t], values[u])) {
                    maximal = false;
                    break;
                }
            if (maximal) top.push_back(t);
        }
        std::vector<std::uint64_t> next{0};
        for (auto a : cur) {
            if (a == 0) continue;
            bool below = true;
            for (auto t : top)
                if (!much_less(values[a], values[t])) {
                    below = false;
                    break;
                }
            if (below) next.push_back(a);
        }
        std::sort(next.begin(), next.end());
        auto A = summand_from_set(R, n, next);
        if (!A) throw NotAFlag("step " + std::to_string(fl.chain.size()) + ": the " + std::to_string(next.size())
                               + " elements strictly below the top class do not form a free direct summand");
        fl.chain.push_back(*A);
        cur = std::move(next);
    }
    return fl;
}

}  // namespace ltower
