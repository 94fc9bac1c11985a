#include "entprod/entropy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "entprod/nelder_mead.hpp"

namespace entprod {

namespace {

constexpr int kThetaCells = 64;
constexpr int kPhiCells = 128;
constexpr int kRefineStarts = 3;
constexpr double kDiscordClamp = 1e-6;
constexpr double kPurityTol = 1e-10;

// sum_i p_i S(rho_i) = sum over eigenvalues mu of M of -mu log2(mu / p), p = tr M.
double weighted_conditional_entropy(const ComplexMatrix& m) {
    const double p = m.trace().real();
    if (p <= 1e-14) return 0.0;
    double s = 0.0;
    auto add = [&](double mu) {
        if (mu > 0.0) s -= mu * std::log2(mu / p);
    };
    if (m.rows() == 2) {
        const double a = m(0, 0).real(), d = m(1, 1).real();
        const double r = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(m(0, 1)));
        add(std::clamp(0.5 * (a + d) + r, 0.0, p));
        add(std::clamp(0.5 * (a + d) - r, 0.0, p));
    } else {
        for (double mu : hermitian_eig(m)) add(std::clamp(mu, 0.0, p));
    }
    return std::max(s, 0.0);
}

// Blocks rho_{kl} (first-factor operators) of a state whose second factor is a qubit.
struct QubitBlocks {
    std::array<ComplexMatrix, 4> block;  // index 2k + l
    ComplexMatrix marginal;             // rho_00 + rho_11

    QubitBlocks(const ComplexMatrix& rho, int dx) {
        for (int k = 0; k < 2; ++k)
            for (int l = 0; l < 2; ++l) {
                ComplexMatrix b(dx, dx);
                for (int a = 0; a < dx; ++a)
                    for (int c = 0; c < dx; ++c) b(a, c) = rho(a * 2 + k, c * 2 + l);
                block[static_cast<std::size_t>(2 * k + l)] = std::move(b);
            }
        marginal = block[0] + block[3];
    }

    // Average conditional entropy after measuring along Bloch direction (theta, phi).
    double conditional(double theta, double phi) const {
        const double nz = std::cos(theta);
        const double nx = std::sin(theta) * std::cos(phi);
        const double ny = std::sin(theta) * std::sin(phi);
        // M = sum_{kl} Pi_{kl} rho_{lk} with Pi = (I + n.sigma)/2
        const complex pi01(0.5 * nx, -0.5 * ny);
        const ComplexMatrix plus = 0.5 * (1.0 + nz) * block[0] + 0.5 * (1.0 - nz) * block[3] +
                                   pi01 * block[2] + std::conj(pi01) * block[1];
        const ComplexMatrix minus = marginal - plus;
        return weighted_conditional_entropy(plus) + weighted_conditional_entropy(minus);
    }
};

struct GridCell {
    double value;
    int i;
    int j;
};

double minimize_conditional_entropy(const QubitBlocks& blocks, MeasurementBasis& argmin) {
    const double dtheta = std::numbers::pi / kThetaCells;
    const double dphi = 2.0 * std::numbers::pi / kPhiCells;

    std::vector<GridCell> cells;
    cells.reserve(kThetaCells * kPhiCells);
    for (int i = 0; i < kThetaCells; ++i)
        for (int j = 0; j < kPhiCells; ++j)
            cells.push_back({blocks.conditional(i * dtheta, j * dphi), i, j});
    // min-reduction with ties broken by smaller theta, then smaller phi
    std::partial_sort(cells.begin(), cells.begin() + kRefineStarts, cells.end(),
                      [](const GridCell& a, const GridCell& b) {
                          if (a.value != b.value) return a.value < b.value;
                          if (a.i != b.i) return a.i < b.i;
                          return a.j < b.j;
                      });

    double best = cells.front().value;
    double best_theta = cells.front().i * dtheta, best_phi = cells.front().j * dphi;
    auto objective = [&](const std::vector<double>& x) { return blocks.conditional(x[0], x[1]); };
    for (int k = 0; k < kRefineStarts; ++k) {
        const auto& cell = cells[static_cast<std::size_t>(k)];
        const auto res = nelder_mead(objective, {cell.i * dtheta, cell.j * dphi}, {dtheta, dphi});
        if (res.value < best) {
            best = res.value;
            best_theta = res.x[0];
            best_phi = res.x[1];
        }
    }
    argmin = MeasurementBasis::canonical(best_theta, best_phi);
    return best;
}

}  // namespace

MeasurementBasis MeasurementBasis::canonical(double theta, double phi) {
    const double nx = std::sin(theta) * std::cos(phi);
    const double ny = std::sin(theta) * std::sin(phi);
    const double nz = std::cos(theta);
    MeasurementBasis b;
    b.theta = std::acos(std::clamp(nz, -1.0, 1.0));
    if (std::hypot(nx, ny) < 1e-15) return b;
    double p = std::atan2(ny, nx);
    if (p < 0.0) p += 2.0 * std::numbers::pi;
    if (p >= 2.0 * std::numbers::pi) p = 0.0;
    b.phi = p;
    return b;
}

ComplexMatrix w_matrix(const DensityMatrix& rho, const KrausFamily& k) {
    if (k.dim() != rho.dim()) throw std::invalid_argument("w_matrix: Kraus dimension does not match the state");
    const auto r = static_cast<Eigen::Index>(k.size());
    std::vector<ComplexMatrix> left;
    left.reserve(k.size());
    for (const auto& op : k.ops()) left.push_back(op * rho.matrix());
    ComplexMatrix w(r, r);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < r; ++j) {
            // Tr(K_i rho K_j^dagger) = sum_ab (K_i rho)_ab conj((K_j)_ab)
            const auto& kj = k.ops()[static_cast<std::size_t>(j)];
            w(i, j) = (left[static_cast<std::size_t>(i)].array() * kj.array().conjugate()).sum();
        }
    const double norm = w.trace().real();
    if (!(norm > 0.0)) throw NumericalFailure("w_matrix: channel output has zero trace");
    w /= norm;
    return 0.5 * (w + w.adjoint());
}

double entropy_exchange(const DensityMatrix& rho, const KrausFamily& k) {
    return entropy_of_spectrum(hermitian_eig(w_matrix(rho, k)));
}

double mutual_information(const DensityMatrix& rho_xy, BipartiteDims dims) {
    const double sx = vn_entropy(partial_trace(rho_xy, dims, Keep::first));
    const double sy = vn_entropy(partial_trace(rho_xy, dims, Keep::second));
    return std::max(0.0, sx + sy - vn_entropy(rho_xy));
}

ClassicalCorrelation classical_correlation(const DensityMatrix& rho_xy, BipartiteDims dims) {
    if (dims.second != 2) throw std::invalid_argument("classical_correlation: measured factor must be a qubit");
    if (dims.total() != rho_xy.dim()) throw std::invalid_argument("classical_correlation: dims do not match state");
    const QubitBlocks blocks(rho_xy.matrix(), dims.first);
    ClassicalCorrelation out;
    const double conditional = minimize_conditional_entropy(blocks, out.basis);
    const double sx = vn_entropy(DensityMatrix::unchecked(blocks.marginal));
    out.bits = std::max(0.0, sx - conditional);
    return out;
}

Correlations correlations(const DensityMatrix& rho_xy, BipartiteDims dims) {
    Correlations out;
    out.mutual = mutual_information(rho_xy, dims);
    const auto j = classical_correlation(rho_xy, dims);
    out.classical = j.bits;
    out.basis = j.basis;
    double d = out.mutual - out.classical;
    if (d < -kDiscordClamp) throw NumericalFailure("discord evaluated below -1e-6");
    out.discord = std::max(0.0, d);
    return out;
}

double discord(const DensityMatrix& rho_xy, BipartiteDims dims) { return correlations(rho_xy, dims).discord; }

double tep(const DensityMatrix& initial, const DensityMatrix& evolved, double env_entropy) {
    if (std::abs(initial.purity() - 1.0) > kPurityTol)
        throw std::invalid_argument("tep: initial system-apparatus state must be pure");
    if (initial.dim() != evolved.dim()) throw std::invalid_argument("tep: initial and evolved dimensions differ");
    // S(rho^SA) = S(rho^E) = 0 before the interaction
    return vn_entropy(evolved) + env_entropy;
}

double tep(const PureState& initial, const DensityMatrix& evolved, double env_entropy) {
    return tep(initial.density(), evolved, env_entropy);
}

}  // namespace entprod
