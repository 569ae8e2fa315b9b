#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ltower/fq_field.hpp"

namespace ltower {

// o/pi^m = F_q[pi]/(pi^m). Elements are codes sum_i d_i q^i with digits d_i in F_q.
class ChainRing {
public:
    ChainRing(FieldPtr field, int m);

    const FieldPtr& field() const { return field_; }
    int m() const { return m_; }
    unsigned q() const { return q_; }
    std::uint32_t size() const { return size_; }

    std::uint32_t add(std::uint32_t a, std::uint32_t b) const;
    std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return add(a, neg(b)); }
    std::uint32_t neg(std::uint32_t a) const;
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const;
    bool is_unit(std::uint32_t a) const { return a % q_ != 0; }
    std::uint32_t inv(std::uint32_t a) const;
    // m for zero
    int valuation(std::uint32_t a) const;
    std::uint32_t pi_power(int k) const;
    std::uint32_t from_fq(Fq c) const { return c; }
    std::vector<Fq> digits(std::uint32_t a) const;
    std::uint32_t from_digits(const std::vector<Fq>& d) const;
    // a / pi^k for a of valuation >= k (result defined mod pi^{m-k}, lifted with zero top digits)
    std::uint32_t shift_down(std::uint32_t a, int k) const;
    std::uint32_t shift_up(std::uint32_t a, int k) const;
    // Reduction to o/pi^k.
    std::uint32_t reduce(std::uint32_t a, int k) const;

private:
    std::uint32_t slow_mul(std::uint32_t a, std::uint32_t b) const;
    FieldPtr field_;
    int m_;
    unsigned q_;
    std::uint32_t size_;
    std::vector<std::uint32_t> pow_q_;
    std::vector<std::uint16_t> mul_table_;
    std::vector<std::uint16_t> add_table_;
};

// n x k matrix over a chain ring, row-major.
struct ChainMat {
    int rows = 0, cols = 0;
    std::vector<std::uint32_t> a;
    ChainMat() = default;
    ChainMat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0) {}
    std::uint32_t& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    std::uint32_t at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
    bool operator==(const ChainMat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
    bool operator<(const ChainMat& o) const { return a < o.a; }
    static ChainMat identity(int n);
};

ChainMat mat_mul(const ChainRing& R, const ChainMat& x, const ChainMat& y);
ChainMat mat_sub(const ChainRing& R, const ChainMat& x, const ChainMat& y);
// Inverse of a square matrix; nullopt if not invertible.
std::optional<ChainMat> mat_inverse(const ChainRing& R, const ChainMat& x);
bool mat_invertible(const ChainRing& R, const ChainMat& x);
ChainMat mat_reduce(const ChainRing& from, const ChainMat& x, int k);

// Smith form data for kernels: A V = U^{-1} D, returns column transform V and
// the diagonal valuations d_i (m for zero). Columns beyond the rank get m.
struct SmithData {
    ChainMat V;
    std::vector<int> d;
};
SmithData smith_columns(const ChainRing& R, const ChainMat& A);
// Enumerate kernel {x : A x = 0} calling f(x) for each vector; returns count.
template <class F>
std::uint64_t for_each_kernel_vector(const ChainRing& R, const ChainMat& A, F&& f);

}  // namespace ltower

#include "ltower/chain_ring_impl.hpp"
