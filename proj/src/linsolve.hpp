#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace ness::detail {

// Dense Gaussian elimination with partial pivoting, in place.
// a is n*n row-major, b the right-hand side; the solution lands in b.
// Returns false when a pivot degenerates (singular system).
inline bool solve_dense(std::vector<double>& a, std::vector<double>& b, int n) {
    const auto at = [&](int r, int c) -> double& { return a[std::size_t(r) * n + c]; };
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        double best = std::fabs(at(col, col));
        for (int r = col + 1; r < n; ++r) {
            double v = std::fabs(at(r, col));
            if (v > best) {
                best = v;
                pivot = r;
            }
        }
        if (!(best > 0.0) || !std::isfinite(best)) return false;
        if (pivot != col) {
            for (int c = col; c < n; ++c) std::swap(at(pivot, c), at(col, c));
            std::swap(b[pivot], b[col]);
        }
        const double d = at(col, col);
        for (int r = col + 1; r < n; ++r) {
            const double factor = at(r, col) / d;
            if (factor == 0.0) continue;
            at(r, col) = 0.0;
            for (int c = col + 1; c < n; ++c) at(r, c) -= factor * at(col, c);
            b[r] -= factor * b[col];
        }
    }
    for (int r = n - 1; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < n; ++c) s -= at(r, c) * b[c];
        b[r] = s / at(r, r);
    }
    return true;
}

}  // namespace ness::detail
