#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

namespace entprod {

struct NelderMeadOptions {
    int max_evaluations = 2000;
    double diameter_tol = 1e-8;  // stop once every vertex is this close to the best
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    int evaluations = 0;
    bool converged = false;
};

// Downhill simplex (reflection 1, expansion 2, contraction 1/2, shrink 1/2).
// The initial simplex is x0 plus one axis step per coordinate.
inline NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                    std::vector<double> x0, const std::vector<double>& steps,
                                    const NelderMeadOptions& opt = {}) {
    const std::size_t n = x0.size();
    std::vector<std::vector<double>> x(n + 1, x0);
    for (std::size_t i = 0; i < n; ++i) x[i + 1][i] += steps[i];

    NelderMeadResult out;
    std::vector<double> fx(n + 1);
    auto eval = [&](const std::vector<double>& p) {
        ++out.evaluations;
        return f(p);
    };
    for (std::size_t j = 0; j <= n; ++j) fx[j] = eval(x[j]);

    std::vector<std::size_t> order(n + 1);
    auto sort_simplex = [&] {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fx[a] < fx[b]; });
        std::vector<std::vector<double>> xs(n + 1);
        std::vector<double> fs(n + 1);
        for (std::size_t k = 0; k <= n; ++k) {
            xs[k] = std::move(x[order[k]]);
            fs[k] = fx[order[k]];
        }
        x.swap(xs);
        fx.swap(fs);
    };
    auto diameter = [&] {
        double d = 0.0;
        for (std::size_t j = 1; j <= n; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += (x[j][i] - x[0][i]) * (x[j][i] - x[0][i]);
            d = std::max(d, std::sqrt(s));
        }
        return d;
    };
    auto along = [&](const std::vector<double>& c, const std::vector<double>& p, double scale) {
        std::vector<double> r(n);
        for (std::size_t i = 0; i < n; ++i) r[i] = c[i] + scale * (p[i] - c[i]);
        return r;
    };

    while (true) {
        sort_simplex();
        if (diameter() < opt.diameter_tol) {
            out.converged = true;
            break;
        }
        if (out.evaluations >= opt.max_evaluations) break;

        std::vector<double> c(n, 0.0);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i) c[i] += x[j][i] / static_cast<double>(n);

        const auto xr = along(c, x[n], -1.0);
        const double fr = eval(xr);
        if (fr < fx[0]) {
            const auto xe = along(c, x[n], -2.0);
            const double fe = eval(xe);
            if (fe < fr) {
                x[n] = xe;
                fx[n] = fe;
            } else {
                x[n] = xr;
                fx[n] = fr;
            }
        } else if (fr < fx[n - 1]) {
            x[n] = xr;
            fx[n] = fr;
        } else {
            const bool outside = fr < fx[n];
            const auto xc = outside ? along(c, xr, 0.5) : along(c, x[n], 0.5);
            const double fc = eval(xc);
            if (fc < (outside ? fr : fx[n])) {
                x[n] = xc;
                fx[n] = fc;
            } else {
                for (std::size_t j = 1; j <= n; ++j) {
                    x[j] = along(x[0], x[j], 0.5);
                    fx[j] = eval(x[j]);
                }
            }
        }
    }
    out.x = x[0];
    out.value = fx[0];
    return out;
}

}  // namespace entprod
