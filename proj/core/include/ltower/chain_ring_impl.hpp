#pragma once

// Template bodies for chain_ring.hpp.

namespace ltower {

template <class F>
std::uint64_t for_each_kernel_vector(const ChainRing& R, const ChainMat& A, F&& f) {
    const SmithData s = smith_columns(R, A);
    const int c = A.cols;
    const int m = R.m();
    std::vector<std::uint32_t> range(static_cast<std::size_t>(c));
    for (int i = 0; i < c; ++i) {
        std::uint32_t r = 1;
        for (int k = 0; k < s.d[static_cast<std::size_t>(i)]; ++k) r *= R.q();
        range[static_cast<std::size_t>(i)] = r;
    }
    std::vector<std::uint32_t> t(static_cast<std::size_t>(c), 0);
    std::vector<std::uint32_t> y(static_cast<std::size_t>(c), 0), x(static_cast<std::size_t>(c), 0);
    std::uint64_t count = 0;
    while (true) {
        for (int i = 0; i < c; ++i) y[i] = R.shift_up(t[i], m - s.d[static_cast<std::size_t>(i)]);
        for (int i = 0; i < c; ++i) {
            std::uint32_t acc = 0;
            for (int j = 0; j < c; ++j)
                if (y[j] != 0) acc = R.add(acc, R.mul(s.V.at(i, j), y[j]));
            x[i] = acc;
        }
        f(x);
        ++count;
        int i = 0;
        while (i < c) {
            if (++t[i] < range[i]) break;
            t[i] = 0;
            ++i;
        }
        if (i == c) break;
    }
    return count;
}

}  // namespace ltower
