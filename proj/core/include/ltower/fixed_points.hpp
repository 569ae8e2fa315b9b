#pragma once

#include <cstdint>
#include <nlohmann/json.hpp>
#include <optional>
#include <vector>

#include "ltower/elliptic.hpp"
#include "ltower/lattice.hpp"

namespace ltower {

// All elements of GL_n(o/pi^m), in code order.
std::vector<ChainMat> enumerate_gl(const ChainRing& R, int n, std::uint64_t cap = 1000000);

// Normalized lattices stable under y, up to pi^Z, found by walking
// y-invariant subspaces of L/pi L from o[y]v. y must be integral over o
// with v(det y) = 0 and irreducible characteristic polynomial.
std::vector<Lattice> stable_lattices(const LocalMatrix& y, std::size_t cap = 100000);

struct BruteForceCount {
    std::uint64_t count = 0;
    int bound = 0;
    bool stable = false;
    std::vector<std::uint64_t> history;  // counts at bound-2, bound-1, bound
    std::uint64_t lattices_scanned = 0;
    std::vector<CosetRep> fixed;  // canonical order (kept when requested)
    nlohmann::json to_json() const;
};

struct StructuredCount {
    std::uint64_t count = 0;
    std::size_t stable_lattices = 0;
    std::vector<std::uint64_t> per_lattice;
    bool early_zero = false;  // v(det g) + v(det g_b) not divisible by n
    EllipticCertificate certificate;
    nlohmann::json to_json() const;
};

// Default bound m + v_spread(g_b) + 2.
int default_bound(const LocalMatrix& gb, int m);

// #{h in G / pi^Z K_m : h^{-1} g_b h in g^{-1} pi^Z K_m}
BruteForceCount count_fixed_points_bruteforce(const LocalMatrix& gb, const LocalMatrix& g, int m,
                                              std::optional<int> bound = std::nullopt, bool keep_fixed = false);
StructuredCount count_fixed_points_structured(const LocalMatrix& gb, const LocalMatrix& g, int m);

// Checks g in F^x GL_n(o) (the normalizer of K_m for m >= 1); returns
// (a, g_0) with g = pi^a g_0, g_0 in GL_n(o).
std::pair<int, LocalMatrix> split_normalizer(const LocalMatrix& g);

}  // namespace ltower
