#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "entprod/qmat.hpp"

namespace entprod::testing {

// Characteristic polynomial by Faddeev-LeVerrier; coefficients c[0..n], c[n] = 1.
inline std::vector<double> char_poly(const ComplexMatrix& a) {
    const auto n = a.rows();
    std::vector<complex> c(static_cast<std::size_t>(n) + 1);
    c[static_cast<std::size_t>(n)] = 1.0;
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    for (Eigen::Index k = 1; k <= n; ++k) {
        m = a * m + c[static_cast<std::size_t>(n - k + 1)] * ComplexMatrix::Identity(n, n);
        c[static_cast<std::size_t>(n - k)] = -(a * m).trace() / static_cast<double>(k);
    }
    std::vector<double> out;
    for (auto z : c) out.push_back(z.real());
    return out;
}

inline double horner(const std::vector<double>& c, double x) {
    double v = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
    return v;
}

// All real roots by a sign-change scan followed by bisection.
inline std::vector<double> real_roots(const std::vector<double>& c, double radius) {
    std::vector<double> roots;
    const int scan = 400000;
    double prev_x = -radius, prev = horner(c, prev_x);
    for (int i = 1; i <= scan; ++i) {
        const double x = -radius + 2.0 * radius * i / scan;
        const double v = horner(c, x);
        if (prev == 0.0) roots.push_back(prev_x);
        else if ((prev < 0.0) != (v < 0.0)) {
            double lo = prev_x, hi = x, flo = prev;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = horner(c, mid);
                if ((fm < 0.0) == (flo < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            roots.push_back(0.5 * (lo + hi));
        }
        prev_x = x;
        prev = v;
    }
    return roots;
}

// First zero of G on the oscillatory branch, by bisection on
// cos(x) + (lambda/w) sin(x) over x = w t / 2 in (pi/2, pi).
inline double first_zero_of_G(double lambda, double gamma0) {
    const double w = std::sqrt(2.0 * gamma0 * lambda - lambda * lambda);
    auto f = [&](double x) { return std::cos(x) + (lambda / w) * std::sin(x); };
    double lo = 0.5 * std::numbers::pi, hi = std::numbers::pi;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if ((f(mid) > 0.0) == (f(lo) > 0.0)) lo = mid;
        else hi = mid;
    }
    return 2.0 * (0.5 * (lo + hi)) / w;
}

}  // namespace entprod::testing
