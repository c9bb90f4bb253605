#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace absa {

/// Solves the n x n system A x = b in place by Gaussian elimination with
/// partial pivoting. A is row-major. Throws on a (numerically) singular A.
inline std::vector<double> solve_linear_system(std::vector<double> a, std::vector<double> b) {
    const std::size_t n = b.size();
    if (a.size() != n * n) throw std::invalid_argument("solve_linear_system: shape mismatch");
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        double best = std::abs(a[col * n + col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            double v = std::abs(a[r * n + col]);
            if (v > best) {
                best = v;
                pivot = r;
            }
        }
        if (!(best > 0.0) || !std::isfinite(best))
            throw std::runtime_error("solve_linear_system: singular matrix");
        if (pivot != col) {
            for (std::size_t c = col; c < n; ++c) std::swap(a[pivot * n + c], a[col * n + c]);
            std::swap(b[pivot], b[col]);
        }
        double diag = a[col * n + col];
        for (std::size_t r = col + 1; r < n; ++r) {
            double factor = a[r * n + col] / diag;
            if (factor == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r * n + c] -= factor * a[col * n + c];
            b[r] -= factor * b[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t ri = n; ri-- > 0;) {
        double acc = b[ri];
        for (std::size_t c = ri + 1; c < n; ++c) acc -= a[ri * n + c] * x[c];
        x[ri] = acc / a[ri * n + ri];
    }
    return x;
}

}  // namespace absa
