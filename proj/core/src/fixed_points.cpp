#include "ltower/fixed_points.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>

#include "ltower/errors.hpp"
#include "ltower/formal_module.hpp"
#include "ltower/strata.hpp"

namespace ltower {

std::vector<ChainMat> enumerate_gl(const ChainRing& R, int n, std::uint64_t cap) {
    const std::uint64_t order = gl_order(static_cast<unsigned>(n), R.q(), R.m());
    if (order > cap) throw CapExceeded("|GL_" + std::to_string(n) + "(o/pi^" + std::to_string(R.m()) + ")| = " + std::to_string(order) + " exceeds cap");
    std::vector<ChainMat> out;
    out.reserve(order);
    ChainMat x(n, n);
    const std::size_t N = x.a.size();
    while (true) {
        if (mat_invertible(R, x)) out.push_back(x);
        std::size_t i = 0;
        while (i < N) {
            if (++x.a[i] < R.size()) break;
            x.a[i] = 0;
            ++i;
        }
        if (i == N) break;
    }
    return out;
}

std::pair<int, LocalMatrix> split_normalizer(const LocalMatrix& g) {
    const int a = g.min_valuation();
    if (a >= kExact) throw PreconditionError("g is zero");
    LocalMatrix g0 = g.shift(-a);
    if (!g0.in_k0()) throw PreconditionError("g does not normalize K_m: it is not in F^x GL_n(o)");
    return {a, g0};
}

std::vector<Lattice> stable_lattices(const LocalMatrix& y, std::size_t cap) {
    const FieldPtr& F = y.field();
    const int n = y.n();
    const LPoly chi = y.charpoly();
    for (const auto& c : chi)
        if (c.valuation_lower_bound() < 0) throw PreconditionError("stable_lattices: y is not integral over o");
    if (chi[0].valuation() != 0) throw PreconditionError("stable_lattices: v(det y) must be 0");

    // o[y] e_1
    std::vector<std::vector<Laurent>> cols;
    std::vector<Laurent> v(static_cast<std::size_t>(n), Laurent::zero(F));
    v[0] = Laurent::constant(F, 1);
    for (int k = 0; k < n; ++k) {
        cols.push_back(v);
        v = y * v;
    }
    const Lattice start = Lattice::from_basis(LocalMatrix::from_columns(cols)).normalized();

    const ChainRing R1(F, 1);
    std::vector<DirectSummand> subspaces;
    for (int h = 1; h < n; ++h)
        for (auto& W : enumerate_summands(R1, n, h)) subspaces.push_back(std::move(W));

    std::set<Lattice> seen{start};
    std::deque<Lattice> queue{start};
    while (!queue.empty()) {
        const Lattice L = queue.front();
        queue.pop_front();
        const LocalMatrix& H = L.hnf();
        const LocalMatrix Y = L.basis_inverse() * y * H;
        if (!Y.is_integral()) throw CrossCheckFailure("lattice in the walk is not y-stable");
        const ChainMat Ybar = Y.reduce(R1);
        const int contain = L.max_elementary_divisor() + 1;
        for (const auto& W : subspaces) {
            const ChainMat img = mat_mul(R1, Ybar, W.gens);
            bool invariant = true;
            for (int j = 0; j < W.h && invariant; ++j) {
                std::vector<std::uint32_t> c(static_cast<std::size_t>(n));
                for (int i = 0; i < n; ++i) c[static_cast<std::size_t>(i)] = img.at(i, j);
                invariant = summand_contains(R1, W, c);
            }
            if (!invariant) continue;
            LocalMatrix G(F, n, W.h + n);
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < W.h; ++j) G.at(i, j) = Laurent::constant(F, W.gens.at(i, j));
                G.at(i, W.h + i) = Laurent::pi_power(F, 1);
            }
            Lattice next = Lattice::from_generators(H * G, contain).normalized();
            if (seen.insert(next).second) {
                if (seen.size() > cap) throw CapExceeded("stable lattice walk exceeded " + std::to_string(cap) + " lattices");
                queue.push_back(std::move(next));
            }
        }
    }
    return {seen.begin(), seen.end()};
}

int default_bound(const LocalMatrix& gb, int m) { return m + v_spread(gb) + 2; }

BruteForceCount count_fixed_points_bruteforce(const LocalMatrix& gb, const LocalMatrix& g, int m, std::optional<int> bound, bool keep_fixed) {
    if (m < 1) throw PreconditionError("level m must be at least 1");
    require_elliptic(gb, true);
    split_normalizer(g);
    const FieldPtr& F = gb.field();
    const int n = gb.n();
    BruteForceCount out;
    out.bound = bound.value_or(default_bound(gb, m));
    if (out.bound < 2) throw PreconditionError("search bound must be at least 2");
    // guard on the number of HNFs visited
    double est = 1;
    for (int j = 0; j < n; ++j) est *= (out.bound + 1) * std::pow(static_cast<double>(F->q()), out.bound * std::max(0, n - 1 - j));
    if (est > 2e7) throw CapExceeded("brute-force lattice search too large at bound " + std::to_string(out.bound));

    const ChainRing R(F, m);
    const std::vector<ChainMat> frames = enumerate_gl(R, n);
    std::vector<LocalMatrix> lifted;
    lifted.reserve(frames.size());
    for (const auto& k : frames) lifted.push_back(LocalMatrix::from_chain(R, k));

    std::map<int, std::uint64_t> by_divisor;
    bool any_candidate = false;
    out.lattices_scanned = for_each_normalized_lattice(F, n, out.bound, [&](const Lattice& L) {
        const LocalMatrix Y = L.basis_inverse() * gb * L.hnf();
        const int jy = Y.min_valuation();
        if (!Y.shift(-jy).in_k0()) return;
        any_candidate = true;
        const int ed = L.max_elementary_divisor();
        std::uint64_t c = 0;
        for (std::size_t f = 0; f < frames.size(); ++f) {
            const LocalMatrix& k = lifted[f];
            const LocalMatrix X = Y * k * g;
            const int j = X.min_valuation();
            const LocalMatrix D = X - k.shift(j);
            bool fixed = true;
            for (int r = 0; r < n && fixed; ++r)
                for (int s = 0; s < n && fixed; ++s) {
                    const Laurent& d = D.at(r, s);
                    if (d.valuation_lower_bound() >= j + m) continue;
                    if (d.is_zero()) throw PrecisionExhausted("brute-force test needs precision " + std::to_string(j + m));
                    fixed = false;
                }
            if (!fixed) continue;
            ++c;
            if (keep_fixed) out.fixed.push_back({L, frames[f]});
        }
        by_divisor[ed] += c;
    });
    for (int b = out.bound - 2; b <= out.bound; ++b) {
        std::uint64_t s = 0;
        for (const auto& [ed, c] : by_divisor)
            if (ed <= b) s += c;
        out.history.push_back(s);
    }
    out.count = out.history.back();
    out.stable = any_candidate && out.history[0] == out.history[1] && out.history[1] == out.history[2];
    std::sort(out.fixed.begin(), out.fixed.end());
    return out;
}

StructuredCount count_fixed_points_structured(const LocalMatrix& gb, const LocalMatrix& g, int m) {
    if (m < 1) throw PreconditionError("level m must be at least 1");
    StructuredCount out;
    out.certificate = require_elliptic(gb, true);
    const auto [a, g0] = split_normalizer(g);
    const int n = gb.n();
    const int vdb = gb.det().valuation();
    const int vdg = g.det().valuation();
    if (((vdb + vdg) % n + n) % n != 0) {
        out.early_zero = true;
        return out;
    }
    const int kappa = vdb >= 0 ? vdb / n : -((-vdb) / n);
    if (kappa * n != vdb) {
        // v(det g) = n a, so this cannot happen once the sum is divisible by n
        throw CrossCheckFailure("determinant valuation bookkeeping");
    }
    const LocalMatrix y = gb.shift(-kappa);
    const std::vector<Lattice> lattices = stable_lattices(y);
    out.stable_lattices = lattices.size();
    const ChainRing R(gb.field(), m);
    const ChainMat gm = g0.reduce(R);
    const int N = n * n;
    for (const auto& L : lattices) {
        const ChainMat Y0 = (L.basis_inverse() * y * L.hnf()).reduce(R);
        ChainMat A(N, N);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int p = 0; p < n; ++p)
                    for (int s = 0; s < n; ++s) {
                        std::uint32_t v = R.mul(Y0.at(i, p), gm.at(s, j));
                        if (i == p && j == s) v = R.sub(v, 1);
                        A.at(i * n + j, p * n + s) = v;
                    }
        std::uint64_t c = 0;
        ChainMat k(n, n);
        for_each_kernel_vector(R, A, [&](const std::vector<std::uint32_t>& x) {
            for (int t = 0; t < N; ++t) k.a[static_cast<std::size_t>(t)] = x[static_cast<std::size_t>(t)];
            if (mat_invertible(R, k)) ++c;
        });
        out.per_lattice.push_back(c);
        out.count += c;
    }
    return out;
}

nlohmann::json BruteForceCount::to_json() const {
    nlohmann::json j = {{"count", count}, {"bound", bound}, {"stable", stable}, {"history", history}, {"lattices_scanned", lattices_scanned}};
    if (!fixed.empty()) {
        nlohmann::json f = nlohmann::json::array();
        for (const auto& c : fixed) f.push_back(c.to_json());
        j["fixed"] = f;
    }
    return j;
}

nlohmann::json StructuredCount::to_json() const {
    return {{"count", count}, {"stable_lattices", stable_lattices}, {"per_lattice", per_lattice},
            {"early_zero", early_zero}, {"certificate", certificate.to_json()}};
}

}  // namespace ltower
