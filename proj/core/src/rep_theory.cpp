#include "ltower/rep_theory.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "ltower/chain_ring.hpp"
#include "ltower/errors.hpp"
#include "ltower/fixed_points.hpp"
#include "ltower/formal_module.hpp"
#include "ltower/lattice.hpp"

namespace ltower {

namespace {

using u64 = std::uint64_t;

u64 powmod(u64 a, u64 e, u64 p) {
    u64 r = 1;
    a %= p;
    while (e) {
        if (e & 1) r = r * a % p;
        a = a * a % p;
        e >>= 1;
    }
    return r;
}

u64 invmod(u64 a, u64 p) { return powmod(a, p - 2, p); }

bool prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

using ModMat = std::vector<std::vector<u64>>;

// Faddeev-LeVerrier; needs p > n. Coefficients low to high, monic.
std::vector<u64> charpoly_mod(const ModMat& A, u64 p) {
    const std::size_t n = A.size();
    std::vector<u64> c(n + 1, 0);
    c[n] = 1;
    ModMat M(n, std::vector<u64>(n, 0));
    for (std::size_t k = 1; k <= n; ++k) {
        ModMat AM(n, std::vector<u64>(n, 0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l) {
                if (A[i][l] == 0) continue;
                for (std::size_t j = 0; j < n; ++j) AM[i][j] = (AM[i][j] + A[i][l] * M[l][j]) % p;
            }
        for (std::size_t i = 0; i < n; ++i) AM[i][i] = (AM[i][i] + c[n - k + 1]) % p;
        M = AM;
        u64 tr = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l) tr = (tr + A[i][l] * M[l][i]) % p;
        c[n - k] = (p - tr) % p * invmod(k % p, p) % p;
    }
    return c;
}

// Basis of the null space of A (rows x cols) mod p.
std::vector<std::vector<u64>> nullspace_mod(ModMat A, u64 p) {
    const std::size_t rows = A.size(), cols = rows ? A[0].size() : 0;
    std::vector<std::size_t> pivcol;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && A[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(A[piv], A[r]);
        const u64 iv = invmod(A[r][c], p);
        for (auto& x : A[r]) x = x * iv % p;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || A[i][c] == 0) continue;
            const u64 f = A[i][c];
            for (std::size_t j = 0; j < cols; ++j) A[i][j] = (A[i][j] + (p - f) * A[r][j]) % p;
        }
        pivcol.push_back(c);
        ++r;
    }
    std::vector<std::vector<u64>> out;
    std::vector<bool> is_piv(cols, false);
    for (auto c : pivcol) is_piv[c] = true;
    for (std::size_t fcol = 0; fcol < cols; ++fcol) {
        if (is_piv[fcol]) continue;
        std::vector<u64> v(cols, 0);
        v[fcol] = 1;
        for (std::size_t i = 0; i < pivcol.size(); ++i) v[pivcol[i]] = (p - A[i][fcol]) % p;
        out.push_back(v);
    }
    return out;
}

u64 primitive_root_mod(u64 p) {
    std::vector<u64> fac;
    u64 n = p - 1;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) {
            fac.push_back(d);
            while (n % d == 0) n /= d;
        }
    if (n > 1) fac.push_back(n);
    for (u64 g = 2;; ++g) {
        bool ok = true;
        for (auto f : fac) ok = ok && powmod(g, (p - 1) / f, p) != 1;
        if (ok) return g;
    }
}

FieldPtr field_of_order(unsigned q) {
    unsigned p = 0, f = 0;
    if (!prime_power(q, p, f)) throw PreconditionError("q = " + std::to_string(q) + " is not a prime power");
    return FqField::make(p, f);
}

}  // namespace

FiniteGroup::FiniteGroup(std::string name, std::vector<Key> elements, MulFn mul_fn, nlohmann::json meta)
    : name_(std::move(name)), meta_(std::move(meta)), elems_(std::move(elements)), mul_(std::move(mul_fn)) {
    std::sort(elems_.begin(), elems_.end());
    elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
    const std::size_t N = elems_.size();
    if (N == 0) throw PreconditionError("empty group");
    if (N <= kTableCap) {
        table_.resize(N * N);
        for (std::size_t a = 0; a < N; ++a)
            for (std::size_t b = 0; b < N; ++b) table_[a * N + b] = static_cast<std::uint32_t>(index_of(mul_(elems_[a], elems_[b])));
    }
    // the unique idempotent is the identity
    bool found = false;
    for (std::size_t a = 0; a < N && !found; ++a) {
        if (mul(a, a) != a) continue;
        id_ = a;
        found = true;
    }
    if (!found) throw PreconditionError(name_ + ": no identity element");
    inv_.assign(N, N);
    for (std::size_t a = 0; a < N; ++a) {
        if (inv_[a] != N) continue;
        // powers of a reach the identity; the last one before it is the inverse
        std::size_t x = a, prev = id_;
        while (x != id_) {
            prev = x;
            x = mul(x, a);
        }
        inv_[a] = prev;
        inv_[prev] = a;
    }
}

std::size_t FiniteGroup::index_of(const Key& k) const {
    auto it = std::lower_bound(elems_.begin(), elems_.end(), k);
    if (it == elems_.end() || *it != k) throw PreconditionError(name_ + ": key is not a group element");
    return static_cast<std::size_t>(it - elems_.begin());
}

bool FiniteGroup::contains(const Key& k) const { return std::binary_search(elems_.begin(), elems_.end(), k); }

std::size_t FiniteGroup::mul(std::size_t a, std::size_t b) const {
    if (!table_.empty()) return table_[a * elems_.size() + b];
    return index_of(mul_(elems_[a], elems_[b]));
}

std::size_t FiniteGroup::element_order(std::size_t a) const {
    std::size_t k = 1, x = a;
    while (x != id_) {
        x = mul(x, a);
        ++k;
    }
    return k;
}

bool FiniteGroup::verify(std::mt19937_64& rng, int samples) const {
    const std::size_t N = order();
    for (int s = 0; s < samples; ++s) {
        const std::size_t a = rng() % N, b = rng() % N, c = rng() % N;
        if (!contains(mul_(elems_[a], elems_[b]))) return false;
        if (mul(mul(a, b), c) != mul(a, mul(b, c))) return false;
        if (mul(a, inverse(a)) != id_ || mul(id_, a) != a || mul(a, id_) != a) return false;
    }
    return true;
}

GroupPtr group_gl(unsigned n, unsigned q, int m, std::uint64_t cap) {
    if (n < 1 || m < 1) throw PreconditionError("group_gl needs n >= 1 and m >= 1");
    const FieldPtr F = field_of_order(q);
    auto R = std::make_shared<const ChainRing>(F, m);
    const std::uint64_t ord = gl_order(n, q, m);
    if (ord > cap) throw CapExceeded("|GL_" + std::to_string(n) + "(o/pi^" + std::to_string(m) + ")| = " + std::to_string(ord) + " exceeds cap " + std::to_string(cap));
    std::vector<FiniteGroup::Key> keys;
    for (auto& x : enumerate_gl(*R, static_cast<int>(n), cap)) keys.push_back(std::move(x.a));
    const int nn = static_cast<int>(n);
    auto mul = [R, nn](const FiniteGroup::Key& a, const FiniteGroup::Key& b) {
        ChainMat x(nn, nn), y(nn, nn);
        x.a = a;
        y.a = b;
        return mat_mul(*R, x, y).a;
    };
    return std::make_shared<const FiniteGroup>("GL_" + std::to_string(n) + "(o/pi^" + std::to_string(m) + "), q=" + std::to_string(q),
                                               std::move(keys), mul,
                                               nlohmann::json{{"kind", "gl"}, {"n", n}, {"q", q}, {"m", m}});
}

GroupPtr group_quaternion_quotient(unsigned q, int k) {
    if (k != 1 && k != 2) throw PreconditionError("quaternion quotient supports level k in {1, 2}");
    const FieldPtr F = field_of_order(q);
    const FieldPtr L = FqField::make(F->p(), 2 * F->f());
    const unsigned fq = F->f();
    std::vector<FiniteGroup::Key> keys;
    for (std::uint32_t s = 0; s < 2; ++s)
        for (Fq a0 = 1; a0 < L->q(); ++a0) {
            if (k == 1) {
                keys.push_back({s, a0});
                continue;
            }
            for (Fq a1 = 0; a1 < L->q(); ++a1) keys.push_back({s, a0, a1});
        }
    auto mul = [L, fq, k](const FiniteGroup::Key& x, const FiniteGroup::Key& y) {
        const std::uint32_t s = x[0], t = y[0];
        // sigma^s applied to the coefficients of y
        auto sig = [&](Fq c) { return s ? L->frobenius(c, fq) : c; };
        FiniteGroup::Key out(x.size());
        out[0] = (s + t) % 2;  // Pi^2 = pi is trivial in the quotient
        out[1] = L->mul(x[1], sig(y[1]));
        if (k == 2) out[2] = L->add(L->mul(x[1], sig(y[2])), L->mul(x[2], L->frobenius(sig(y[1]), fq)));
        return out;
    };
    return std::make_shared<const FiniteGroup>(
        "B^x/pi^Z(1+P_B^" + std::to_string(k) + "), q=" + std::to_string(q), std::move(keys), mul,
        nlohmann::json{{"kind", "quaternion"}, {"q", q}, {"k", k}, {"model", "F_{q^2}((pi))<Pi>, Pi x = x^q Pi, Pi^2 = pi"},
                       {"field_modulus", L->modulus()}});
}

GroupPtr group_cyclic(unsigned n) {
    std::vector<FiniteGroup::Key> keys;
    for (std::uint32_t i = 0; i < n; ++i) keys.push_back({i});
    return std::make_shared<const FiniteGroup>("C_" + std::to_string(n), std::move(keys),
                                               [n](const FiniteGroup::Key& a, const FiniteGroup::Key& b) { return FiniteGroup::Key{(a[0] + b[0]) % n}; },
                                               nlohmann::json{{"kind", "cyclic"}, {"n", n}});
}

GroupPtr group_symmetric(unsigned n) {
    FiniteGroup::Key p(n);
    std::iota(p.begin(), p.end(), 0u);
    std::vector<FiniteGroup::Key> keys;
    do keys.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    // (a b)(i) = a(b(i))
    auto mul = [](const FiniteGroup::Key& a, const FiniteGroup::Key& b) {
        FiniteGroup::Key c(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[b[i]];
        return c;
    };
    return std::make_shared<const FiniteGroup>("S_" + std::to_string(n), std::move(keys), mul, nlohmann::json{{"kind", "symmetric"}, {"n", n}});
}

std::vector<ConjugacyClass> conjugacy_classes(const FiniteGroup& G, std::vector<std::size_t>* class_of) {
    const std::size_t N = G.order();
    std::vector<std::size_t> cls(N, N);
    std::vector<std::vector<std::size_t>> members;
    // classes are discovered in element order, so each least key comes first
    for (std::size_t x = 0; x < N; ++x) {
        if (cls[x] != N) continue;
        const std::size_t c = members.size();
        members.emplace_back();
        for (std::size_t g = 0; g < N; ++g) {
            const std::size_t y = G.mul(G.mul(g, x), G.inverse(g));
            if (cls[y] == N) {
                cls[y] = c;
                members[c].push_back(y);
            }
        }
    }
    std::vector<std::size_t> perm(members.size());
    std::iota(perm.begin(), perm.end(), 0);
    const std::size_t idc = cls[G.identity()];
    std::stable_partition(perm.begin(), perm.end(), [&](std::size_t c) { return c == idc; });
    std::vector<std::size_t> rank(members.size());
    for (std::size_t i = 0; i < perm.size(); ++i) rank[perm[i]] = i;
    std::vector<ConjugacyClass> out(members.size());
    for (std::size_t c = 0; c < members.size(); ++c) {
        auto& o = out[rank[c]];
        o.rep = *std::min_element(members[c].begin(), members[c].end());
        o.size = members[c].size();
        o.order = G.element_order(o.rep);
    }
    if (class_of) {
        class_of->resize(N);
        for (std::size_t x = 0; x < N; ++x) (*class_of)[x] = rank[cls[x]];
    }
    return out;
}

std::vector<std::size_t> CharacterTable::class_sizes() const {
    std::vector<std::size_t> s;
    for (const auto& c : classes) s.push_back(c.size);
    return s;
}

std::size_t CharacterTable::class_index(const FiniteGroup::Key& k) const {
    if (!group) {
        for (std::size_t i = 0; i < class_reps.size(); ++i)
            if (class_reps[i] == k) return i;
        throw PreconditionError("imported table: key is not a class representative");
    }
    return class_of[group->index_of(k)];
}

bool CharacterTable::orthogonality_holds() const {
    const auto sizes = class_sizes();
    const std::size_t r = classes.size();
    if (chars.size() != r) return false;
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) {
            const Cyclotomic ip = class_inner_product(chars[i], chars[j], sizes, order);
            if (ip != Cyclotomic::from_int(i == j ? 1 : 0)) return false;
        }
    for (std::size_t k = 0; k < r; ++k)
        for (std::size_t l = 0; l < r; ++l) {
            Cyclotomic s;
            for (std::size_t i = 0; i < r; ++i) s += chars[i][k] * chars[i][l].conj();
            const Rational expect = k == l ? Rational(static_cast<long long>(order)) / static_cast<long long>(sizes[k]) : Rational(0);
            if (s != Cyclotomic::from_rational(expect)) return false;
        }
    return true;
}

nlohmann::json CharacterTable::to_json() const {
    nlohmann::json cls = nlohmann::json::array();
    for (std::size_t i = 0; i < classes.size(); ++i)
        cls.push_back({{"rep", class_reps[i]}, {"size", classes[i].size}, {"order", classes[i].order}});
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : chars) {
        nlohmann::json r = nlohmann::json::array();
        for (const auto& v : row) r.push_back(v.to_json());
        rows.push_back(r);
    }
    return {{"group", group_name}, {"order", order}, {"conductor", conductor}, {"classes", cls}, {"chars", rows}};
}

CharacterTable CharacterTable::from_json(const nlohmann::json& j) {
    CharacterTable t;
    t.group_name = j.at("group").get<std::string>();
    t.order = j.at("order").get<std::size_t>();
    t.conductor = j.at("conductor").get<unsigned>();
    for (const auto& c : j.at("classes")) {
        t.class_reps.push_back(c.at("rep").get<FiniteGroup::Key>());
        t.classes.push_back({0, c.at("size").get<std::size_t>(), c.at("order").get<std::size_t>()});
    }
    for (const auto& row : j.at("chars")) {
        std::vector<Cyclotomic> r;
        for (const auto& v : row) r.push_back(Cyclotomic::from_json(v));
        t.chars.push_back(std::move(r));
    }
    return t;
}

CharacterTable character_table(const GroupPtr& G, std::size_t cap) {
    const std::size_t N = G->order();
    if (N > cap) throw CapExceeded("character table: |G| = " + std::to_string(N) + " exceeds cap " + std::to_string(cap));
    CharacterTable T;
    T.group = G;
    T.group_name = G->name();
    T.order = N;
    T.classes = conjugacy_classes(*G, &T.class_of);
    const std::size_t r = T.classes.size();
    for (const auto& c : T.classes) T.class_reps.push_back(G->element(c.rep));

    u64 e = 1;
    for (const auto& c : T.classes) e = std::lcm(e, static_cast<u64>(c.order));
    T.conductor = static_cast<unsigned>(e);
    // p = 1 mod e, large enough to recover degrees and eigenvalue multiplicities
    u64 p = e * ((4 * N + 100) / e + 1) + 1;
    while (!prime_u64(p)) p += e;
    const u64 z = powmod(primitive_root_mod(p), (p - 1) / e, p);

    // a[i][j][k] = #{x in C_i : x^{-1} z_k in C_j}
    std::vector<u64> a(r * r * r, 0);
    for (std::size_t k = 0; k < r; ++k) {
        const std::size_t zk = T.classes[k].rep;
        for (std::size_t x = 0; x < N; ++x) {
            const std::size_t y = G->mul(G->inverse(x), zk);
            ++a[(T.class_of[x] * r + T.class_of[y]) * r + k];
        }
    }
    std::vector<std::size_t> inv_class(r);
    for (std::size_t k = 0; k < r; ++k) inv_class[k] = T.class_of[G->inverse(T.classes[k].rep)];

    std::mt19937_64 rng(0x5eed);
    std::vector<std::vector<u64>> omegas;
    for (int attempt = 0; attempt < 50 && omegas.empty(); ++attempt) {
        ModMat M(r, std::vector<u64>(r, 0));
        for (std::size_t i = 0; i < r; ++i) {
            const u64 c = rng() % p;
            for (std::size_t j = 0; j < r; ++j)
                for (std::size_t k = 0; k < r; ++k) M[j][k] = (M[j][k] + c * (a[(i * r + j) * r + k] % p)) % p;
        }
        const auto cp = charpoly_mod(M, p);
        std::vector<u64> roots;
        for (u64 lam = 0; lam < p && roots.size() <= r; ++lam) {
            u64 v = 0;
            for (std::size_t d = cp.size(); d-- > 0;) v = (v * lam + cp[d]) % p;
            if (v == 0) roots.push_back(lam);
        }
        if (roots.size() != r) continue;
        std::vector<std::vector<u64>> found;
        for (u64 lam : roots) {
            ModMat B = M;
            for (std::size_t i = 0; i < r; ++i) B[i][i] = (B[i][i] + p - lam) % p;
            auto ns = nullspace_mod(B, p);
            if (ns.size() != 1 || ns[0][0] == 0) break;
            const u64 s = invmod(ns[0][0], p);
            for (auto& x : ns[0]) x = x * s % p;
            found.push_back(ns[0]);
        }
        if (found.size() == r) omegas = std::move(found);
    }
    if (omegas.empty()) throw CrossCheckFailure("character table: class matrices did not split");

    // power maps
    std::vector<std::vector<std::size_t>> power(r, std::vector<std::size_t>(e));
    for (std::size_t k = 0; k < r; ++k) {
        std::size_t x = G->identity();
        for (u64 l = 0; l < e; ++l) {
            power[k][l] = T.class_of[x];
            x = G->mul(x, T.classes[k].rep);
        }
    }
    const u64 einv = invmod(e % p, p);
    const u64 root_bound = static_cast<u64>(std::sqrt(static_cast<double>(N))) + 1;
    std::vector<std::pair<std::vector<std::string>, std::vector<Cyclotomic>>> rows;
    for (const auto& w : omegas) {
        u64 S = 0;
        for (std::size_t k = 0; k < r; ++k) S = (S + w[k] * w[inv_class[k]] % p * invmod(T.classes[k].size % p, p)) % p;
        if (S == 0) throw CrossCheckFailure("character table: degenerate eigenvector");
        const u64 d2 = N % p * invmod(S, p) % p;
        u64 d = 0;
        for (u64 t = 1; t <= root_bound; ++t)
            if (t * t % p == d2) {
                d = t;
                break;
            }
        if (d == 0) throw CrossCheckFailure("character table: degree recovery failed");
        std::vector<u64> chi(r);
        for (std::size_t k = 0; k < r; ++k) chi[k] = w[k] * d % p * invmod(T.classes[k].size % p, p) % p;
        std::vector<Cyclotomic> vals;
        std::vector<std::string> key;
        for (std::size_t k = 0; k < r; ++k) {
            Cyclotomic v(static_cast<unsigned>(e));
            for (u64 s = 0; s < e; ++s) {
                u64 ms = 0;
                for (u64 l = 0; l < e; ++l) ms = (ms + chi[power[k][l]] * powmod(z, (e - (s * l) % e) % e, p)) % p;
                ms = ms * einv % p;
                if (ms > d) throw CrossCheckFailure("character table: eigenvalue multiplicity out of range");
                if (ms) v += Cyclotomic::zeta(static_cast<unsigned>(e), static_cast<long long>(s)) * Rational(static_cast<long long>(ms));
            }
            key.push_back(v.to_string());
            vals.push_back(std::move(v));
        }
        rows.emplace_back(std::move(key), std::move(vals));
    }
    auto trivial = [](const std::vector<Cyclotomic>& v) {
        return std::all_of(v.begin(), v.end(), [](const Cyclotomic& c) { return c == Cyclotomic::from_int(1); });
    };
    std::sort(rows.begin(), rows.end(), [&](const auto& x, const auto& y) {
        const Rational dx = x.second[0].to_rational(), dy = y.second[0].to_rational();
        if (dx != dy) return dx < dy;
        const bool tx = trivial(x.second), ty = trivial(y.second);
        if (tx != ty) return tx;
        return x.first < y.first;
    });
    for (auto& row : rows) T.chars.push_back(std::move(row.second));
    if (!T.orthogonality_holds()) throw CrossCheckFailure("character table of " + G->name() + " fails orthogonality");
    return T;
}

std::vector<std::size_t> cuspidal_characters(const CharacterTable& T) {
    if (!T.group || T.group->meta().value("kind", "") != "gl" || T.group->meta().value("n", 0u) != 2u || T.group->meta().value("m", 0) != 1)
        throw PreconditionError("cuspidal_characters needs a table of GL_2(F_q)");
    const unsigned q = T.group->meta().at("q").get<unsigned>();
    const FieldPtr F = field_of_order(q);
    // discrete log in F_q^x
    std::vector<unsigned> lg(q, 0);
    Fq x = 1;
    for (unsigned i = 0; i + 1 < q; ++i) {
        lg[x] = i;
        x = F->mul(x, F->primitive_root());
    }
    const unsigned N = std::lcm(T.conductor, q - 1);
    std::vector<std::size_t> borel;
    for (std::size_t i = 0; i < T.group->order(); ++i) {
        const auto& k = T.group->element(i);
        if (k[2] == 0) borel.push_back(i);
    }
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < T.chars.size(); ++c) {
        bool cusp = true;
        for (unsigned k1 = 0; k1 + 1 < q && cusp; ++k1)
            for (unsigned k2 = 0; k2 + 1 < q && cusp; ++k2) {
                Cyclotomic s(N);
                for (auto b : borel) {
                    const auto& key = T.group->element(b);
                    const long long ex = static_cast<long long>(k1) * lg[key[0]] + static_cast<long long>(k2) * lg[key[3]];
                    const Cyclotomic mu = Cyclotomic::zeta(q - 1, ex).lift(N);
                    s += T.chars[c][T.class_of[b]].lift(N) * mu.conj();
                }
                cusp = s.is_zero();
            }
        if (cusp) out.push_back(c);
    }
    if (out.size() != static_cast<std::size_t>(q) * (q - 1) / 2)
        throw CrossCheckFailure("found " + std::to_string(out.size()) + " cuspidal characters, expected q(q-1)/2");
    return out;
}

nlohmann::json HcValue::to_json() const {
    return {{"value", value.to_json()}, {"value_text", value.to_string()}, {"support", support}, {"stable_lattices", stable_lattices},
            {"early_zero", early_zero}, {"certificate", certificate.to_json()}};
}

HcValue hc_character(const InducedCharSpec& spec, const LocalMatrix& g) {
    HcValue out;
    out.certificate = require_elliptic(g, false);
    const FieldPtr& F = g.field();
    const int n = g.n();
    const int vd = g.det().valuation();
    if ((vd % n + n) % n != 0) {
        out.early_zero = true;
        out.value = Cyclotomic::from_int(0);
        return out;
    }
    const LocalMatrix y = g.shift(-(vd / n));
    const std::vector<Lattice> lattices = stable_lattices(y);
    out.stable_lattices = lattices.size();
    if (spec.shape == InducedCharSpec::Shape::K0Inflated) {
        const CharacterTable* T = spec.table;
        if (!T || !T->group || T->group->meta().value("kind", "") != "gl" || T->group->meta().value("m", 0) != 1 ||
            T->group->meta().value("n", 0) != n || T->group->meta().value("q", 0u) != F->q())
            throw PreconditionError("hc_character: lambda must come from a table of GL_n(F_q) matching g");
        if (spec.character >= T->chars.size()) throw PreconditionError("hc_character: character index out of range");
        const ChainRing R1(F, 1);
        Cyclotomic s(T->conductor);
        for (const auto& L : lattices) {
            const ChainMat Y0 = (L.basis_inverse() * y * L.hnf()).reduce(R1);
            s += T->value(spec.character, Y0.a);
            ++out.support;
        }
        out.value = s;
        return out;
    }
    if (spec.m < 1) throw PreconditionError("hc_character: level m must be at least 1");
    const ChainRing R(F, spec.m);
    const std::vector<ChainMat> frames = enumerate_gl(R, n);
    for (const auto& L : lattices) {
        const ChainMat Y0 = (L.basis_inverse() * y * L.hnf()).reduce(R);
        // frames k with k^{-1} Y0 k = 1 mod pi^m
        for (const auto& k : frames)
            if (mat_mul(R, Y0, k) == k) ++out.support;
    }
    out.value = Cyclotomic::from_int(static_cast<long long>(out.support));
    return out;
}

nlohmann::json JlMatch::to_json() const {
    nlohmann::json pj = nlohmann::json::array();
    for (const auto& [a, b] : pairs) pj.push_back({{"gl_character", a}, {"quotient_character", b}, {"degree", gl_table.degree(a).str()}});
    nlohmann::json cj = nlohmann::json::array();
    for (const auto& c : classes) {
        nlohmann::json pv = nlohmann::json::array(), rv = nlohmann::json::array();
        for (const auto& v : c.pi_values) pv.push_back(v.to_string());
        for (const auto& v : c.rho_values) rv.push_back(v.to_string());
        cj.push_back({{"eigenvalue", c.x}, {"central", c.central}, {"charpoly", lpoly_to_string(c.charpoly)}, {"pi_values", pv}, {"rho_values", rv}});
    }
    return {{"q", q}, {"convention", convention}, {"cuspidal", cuspidal}, {"matching", pj}, {"matching_size", pairs.size()},
            {"classes", cj}, {"sign_checks", sign_checks}, {"gl_order", gl_table.order}, {"quotient_order", b_table.order}};
}

CharacterTable attach_group(const GroupPtr& G, const CharacterTable& imported) {
    CharacterTable T = imported;
    T.group = G;
    if (T.order != G->order()) throw PreconditionError("imported table has order " + std::to_string(T.order) + ", group has " + std::to_string(G->order()));
    const std::vector<ConjugacyClass> cls = conjugacy_classes(*G, &T.class_of);
    if (cls.size() != T.classes.size()) throw PreconditionError("imported table has the wrong number of classes");
    for (std::size_t i = 0; i < cls.size(); ++i) {
        const std::size_t rep = G->index_of(T.class_reps[i]);
        const ConjugacyClass& c = cls[T.class_of[rep]];
        if (c.size != T.classes[i].size || c.order != T.classes[i].order) throw PreconditionError("imported class data does not match the group");
        T.classes[i].rep = rep;
    }
    // class_of must index the table's own class order
    std::vector<std::size_t> perm(cls.size());
    for (std::size_t i = 0; i < cls.size(); ++i) perm[T.class_of[T.classes[i].rep]] = i;
    for (auto& c : T.class_of) c = perm[c];
    return T;
}

JlMatch jl_match(unsigned q, unsigned q_cap, const TableFn& tables) {
    if (q > q_cap) throw CapExceeded("jl_match: q = " + std::to_string(q) + " exceeds cap " + std::to_string(q_cap));
    JlMatch out;
    out.q = q;
    out.convention = "pi acts trivially on both sides: lambda extended to pi^Z K_0 by pi -> 1, rho trivial on Pi^2 = pi";
    const FieldPtr F = field_of_order(q);
    const FieldPtr L = FqField::make(F->p(), 2 * F->f());
    const FieldEmbedding emb(F, L);
    const GroupPtr G = group_gl(2, q, 1);
    const GroupPtr B = group_quaternion_quotient(q, 1);
    out.gl_table = tables ? tables(G) : character_table(G);
    out.b_table = tables ? tables(B) : character_table(B);
    out.cuspidal = cuspidal_characters(out.gl_table);
    const std::size_t nb = out.b_table.chars.size();

    for (Fq x = 1; x < L->q(); ++x) {
        const Fq xq = L->frobenius(x, F->f());
        if (x == xq || xq < x) continue;  // one representative per orbit {x, x^q}
        const Fq t = emb.to_small(L->add(x, xq));
        const Fq nm = emb.to_small(L->mul(x, xq));
        const LPoly chi{Laurent::constant(F, nm), Laurent::constant(F, F->neg(t)), Laurent::constant(F, 1)};
        for (int central = 0; central <= 1; ++central) {
            JlClass c;
            c.x = x;
            c.central = central;
            c.charpoly = chi;
            const LocalMatrix g = LocalMatrix::companion(chi).shift(central);
            for (auto cu : out.cuspidal) {
                InducedCharSpec spec;
                spec.shape = InducedCharSpec::Shape::K0Inflated;
                spec.table = &out.gl_table;
                spec.character = cu;
                c.pi_values.push_back(hc_character(spec, g).value);
            }
            for (std::size_t r = 0; r < nb; ++r) c.rho_values.push_back(out.b_table.value(r, {0u, x}));
            out.classes.push_back(std::move(c));
        }
    }
    for (std::size_t i = 0; i < out.cuspidal.size(); ++i) {
        std::vector<std::size_t> hits;
        for (std::size_t r = 0; r < nb; ++r) {
            bool ok = true;
            for (const auto& c : out.classes) ok = ok && (c.rho_values[r] + c.pi_values[i]).is_zero();
            if (ok) hits.push_back(r);
        }
        if (hits.size() != 1) {
            // report the first class that rules out the best single candidate
            std::string where = "no class";
            for (const auto& c : out.classes)
                if (hits.empty() && !(c.rho_values[0] + c.pi_values[i]).is_zero()) {
                    where = "eigenvalue " + std::to_string(c.x) + " (central " + std::to_string(c.central) + ")";
                    break;
                }
            throw CrossCheckFailure("jl_match: cuspidal character " + std::to_string(out.cuspidal[i]) + " has " + std::to_string(hits.size()) +
                                    " partners under the fixed convention; first failing class: " + where);
        }
        for (const auto& [a, b] : out.pairs)
            if (b == hits[0]) throw CrossCheckFailure("jl_match: quotient character " + std::to_string(b) + " matched twice");
        out.pairs.emplace_back(out.cuspidal[i], hits[0]);
        out.sign_checks += out.classes.size();
    }
    return out;
}

}  // namespace ltower
