#include "instances.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace ltower::testing {

LocalMatrix random_k0(const FieldPtr& F, int n, std::mt19937_64& rng, int deg) {
    while (true) {
        LocalMatrix x(F, n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                std::vector<Fq> d(static_cast<std::size_t>(deg));
                for (auto& v : d) v = static_cast<Fq>(rng() % F->q());
                x.at(i, j) = Laurent(F, 0, d);
            }
        if (x.in_k0()) return x;
    }
}

LocalMatrix companion_digits(const FieldPtr& F, const std::vector<std::vector<Fq>>& low) {
    LPoly f;
    for (const auto& c : low) f.push_back(Laurent(F, 0, c));
    f.push_back(Laurent::constant(F, 1));
    return LocalMatrix::companion(f);
}

std::vector<EllipticInstance> elliptic_unit_candidates(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<EllipticInstance> out;
    for (unsigned q : {2u, 3u}) {
        const FieldPtr F = FqField::make(q, 1);
        const Fq m1 = F->neg(1);
        // unramified: residually irreducible; ramified: 1 + an Eisenstein root
        struct Base {
            std::string label;
            LocalMatrix g;
            bool residual;
        };
        std::vector<Base> base;
        if (q == 2) {
            base.push_back({"T^2+T+1", companion_digits(F, {{1}, {1}}), true});
            base.push_back({"T^2+T+1+pi", companion_digits(F, {{1, 1}, {1}}), true});
            base.push_back({"1+[T^2+piT+pi]", LocalMatrix::identity(F, 2) + companion_digits(F, {{0, 1}, {0, 1}}), false});
            base.push_back({"T^3+T+1", companion_digits(F, {{1}, {1}, {}}), true});
            base.push_back({"T^3+T^2+1", companion_digits(F, {{1}, {}, {1}}), true});
            base.push_back({"1+[T^3+pi]", LocalMatrix::identity(F, 3) + companion_digits(F, {{0, 1}, {}, {}}), false});
        } else {
            base.push_back({"T^2+1", companion_digits(F, {{1}, {}}), true});
            base.push_back({"T^2+T+2", companion_digits(F, {{2}, {1}}), true});
            base.push_back({"1+[T^2-pi]", LocalMatrix::identity(F, 2) + companion_digits(F, {{0, m1}, {}}), false});
            base.push_back({"T^3+2T+1", companion_digits(F, {{1}, {2}, {}}), true});
            base.push_back({"T^3+2T+2", companion_digits(F, {{2}, {2}, {}}), true});
            base.push_back({"1+[T^3+piT+pi]", LocalMatrix::identity(F, 3) + companion_digits(F, {{0, 1}, {0, 1}, {}}), false});
        }
        for (const auto& [label, g, residual] : base) {
            out.push_back({q, g, label, residual});
            const LocalMatrix x = random_k0(F, g.n(), rng);
            out.push_back({q, x * g * x.inverse(), label + " conjugated", residual});
        }
    }
    return out;
}

std::vector<FixedPointInstance> fixed_point_candidates(std::uint64_t seed, int count) {
    std::mt19937_64 rng(seed);
    std::vector<FixedPointInstance> out;
    for (int trial = 0; trial < count; ++trial) {
        const unsigned q = trial % 2 ? 3 : 2;
        const FieldPtr F = FqField::make(q, 1);
        // residually elliptic shapes, plus ramified ones at q = 3
        LocalMatrix C;
        std::string shape;
        if (q == 2) {
            const bool plain = trial % 4 == 0;
            C = plain ? companion_digits(F, {{1}, {1}}) : companion_digits(F, {{1, 1}, {0, 0, 1}});
            shape = plain ? "T^2+T+1" : "T^2+pi^2 T+1+pi";
        } else {
            const bool plain = trial % 4 == 1;
            C = plain ? companion_digits(F, {{1}, {}}) : companion_digits(F, {{0, 2}, {}});
            shape = plain ? "T^2+1" : "T^2-pi";
        }
        // k = 1 gives c + pi C with c a unit scalar: again elliptic, different lattices
        const int k = (trial / 4) % 2;
        LocalMatrix gb0 = C;
        if (k == 1) gb0 = LocalMatrix::scalar(F, 2, Laurent::constant(F, static_cast<Fq>(1 + rng() % (q - 1)))) + C.shift(1);
        const LocalMatrix x = random_k0(F, 2, rng);
        const LocalMatrix gb = x * gb0 * x.inverse();
        const int mode = trial % 4;
        LocalMatrix g;
        std::string gl;
        // g must normalize K_m, so it lies in F^x GL_2(o)
        if (mode == 3) {
            g = random_k0(F, 2, rng).shift(1);
            gl = "g in pi GL_2(o)";
        } else if (mode == 0 || gb.det().valuation() != 0) {
            g = random_k0(F, 2, rng);
            gl = "g in GL_2(o)";
        } else {
            const LocalMatrix z = random_k0(F, 2, rng);
            g = (z * gb * z.inverse()).inverse();
            gl = "g in the inverse class";
        }
        const int m = 1 + (trial / 2) % 2;
        out.push_back({q, m, gb, g, shape + (k ? " (c + pi C)" : "") + ", " + gl + ", m=" + std::to_string(m)});
    }
    return out;
}

namespace {

// Rank of an n x k matrix over F_p by elimination (column list of vectors).
unsigned rank_mod_p(std::vector<std::vector<unsigned>> rows, unsigned p) {
    auto inv = [p](unsigned a) {
        for (unsigned b = 1; b < p; ++b)
            if (a * b % p == 1) return b;
        return 0u;
    };
    unsigned r = 0;
    const std::size_t cols = rows.empty() ? 0 : rows[0].size();
    for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
        std::size_t piv = r;
        while (piv < rows.size() && rows[piv][c] % p == 0) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[r], rows[piv]);
        const unsigned s = inv(rows[r][c] % p);
        for (auto& v : rows[r]) v = v * s % p;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || rows[i][c] % p == 0) continue;
            const unsigned f = rows[i][c] % p;
            for (std::size_t j = 0; j < cols; ++j) rows[i][j] = (rows[i][j] + (p - f) * rows[r][j]) % p;
        }
        ++r;
    }
    return r;
}

std::vector<unsigned> vec_of(std::uint64_t code, unsigned n, unsigned p) {
    std::vector<unsigned> v(n);
    for (auto& x : v) {
        x = static_cast<unsigned>(code % p);
        code /= p;
    }
    return v;
}

std::uint64_t upow(std::uint64_t b, unsigned e) {
    std::uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

// All subspaces of F_p^n as sorted sets of vector codes.
std::vector<std::set<std::uint64_t>> all_subspaces(unsigned n, unsigned p) {
    const std::uint64_t V = upow(p, n);
    std::set<std::set<std::uint64_t>> seen;
    for (unsigned h = 0; h <= n; ++h) {
        const std::uint64_t tuples = upow(V, h);
        for (std::uint64_t t = 0; t < tuples; ++t) {
            std::vector<std::vector<unsigned>> gens;
            std::uint64_t c = t;
            for (unsigned i = 0; i < h; ++i) {
                gens.push_back(vec_of(c % V, n, p));
                c /= V;
            }
            std::set<std::uint64_t> span;
            for (std::uint64_t coeff = 0; coeff < upow(p, h); ++coeff) {
                const auto a = vec_of(coeff, h, p);
                std::uint64_t code = 0, scale = 1;
                for (unsigned k = 0; k < n; ++k) {
                    unsigned s = 0;
                    for (unsigned i = 0; i < h; ++i) s += a[i] * gens[i][k];
                    code += (s % p) * scale;
                    scale *= p;
                }
                span.insert(code);
            }
            seen.insert(span);
        }
    }
    return {seen.begin(), seen.end()};
}

}  // namespace

std::uint64_t brute_gl_order(unsigned n, unsigned p, int m) {
    const std::uint64_t cells = upow(p, n * n);
    std::uint64_t invertible = 0;
    for (std::uint64_t code = 0; code < cells; ++code) {
        std::vector<std::vector<unsigned>> rows;
        std::uint64_t c = code;
        for (unsigned i = 0; i < n; ++i) {
            rows.push_back(vec_of(c % upow(p, n), n, p));
            c /= upow(p, n);
        }
        if (rank_mod_p(rows, p) == n) ++invertible;
    }
    // units of o/pi^m are the residue units times 1 + pi(o/pi^m)
    return invertible * upow(p, static_cast<unsigned>((m - 1)) * n * n);
}

std::uint64_t brute_subspace_count(unsigned n, unsigned h, unsigned p) {
    std::uint64_t c = 0;
    for (const auto& s : all_subspaces(n, p)) c += s.size() == upow(p, h);
    return c;
}

std::uint64_t brute_flag_count(unsigned n, unsigned p, bool maximal_only) {
    const auto subs = all_subspaces(n, p);
    const std::uint64_t full = upow(p, n);
    // chains from the full space down to {0}; count[i] = chains from subs[i] to {0}
    std::map<std::size_t, std::uint64_t> memo;
    std::function<std::uint64_t(std::size_t)> chains = [&](std::size_t i) -> std::uint64_t {
        if (subs[i].size() == 1) return 1;
        if (auto it = memo.find(i); it != memo.end()) return it->second;
        std::uint64_t total = 0;
        for (std::size_t j = 0; j < subs.size(); ++j) {
            if (subs[j].size() >= subs[i].size()) continue;
            if (!std::includes(subs[i].begin(), subs[i].end(), subs[j].begin(), subs[j].end())) continue;
            if (maximal_only && subs[j].size() * p != subs[i].size()) continue;
            total += chains(j);
        }
        return memo[i] = total;
    };
    for (std::size_t i = 0; i < subs.size(); ++i)
        if (subs[i].size() == full) return chains(i);
    return 0;
}

}  // namespace ltower::testing
