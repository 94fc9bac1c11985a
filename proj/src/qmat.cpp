#include "entprod/qmat.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace entprod {

namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kTraceTol = 1e-12;
constexpr double kNegativeEigTol = 1e-10;
constexpr double kEigInputHermitianTol = 1e-10;
constexpr double kJacobiOffNorm = 1e-14;
constexpr int kJacobiMaxSweeps = 100;

double off_diagonal_norm(const ComplexMatrix& h) {
    double sum = 0.0;
    const auto n = h.rows();
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
            if (i != j) sum += std::norm(h(i, j));
    return std::sqrt(sum);
}

// Cyclic Jacobi with complex Givens rotations. `vectors`, when non-null,
// accumulates the product of rotations so that h_in = V diag(h) V^dagger.
void jacobi_diagonalize(ComplexMatrix& h, ComplexMatrix* vectors) {
    const auto n = h.rows();
    const double scale = std::max(1.0, h.norm());
    for (int sweep = 0; sweep < kJacobiMaxSweeps; ++sweep) {
        if (off_diagonal_norm(h) <= kJacobiOffNorm * scale) return;
        for (Eigen::Index p = 0; p < n - 1; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const complex c = h(p, q);
                const double mag = std::abs(c);
                if (mag < 1e-300) continue;
                const double a = h(p, p).real();
                const double b = h(q, q).real();
                const complex phase = std::conj(c) / mag;  // e^{-i arg c}
                const double theta = (b - a) / (2.0 * mag);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double cs = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * cs;

                // h <- h J, with J[:,p] = cs e_p - sn phase e_q, J[:,q] = sn e_p + cs phase e_q
                ComplexVector colp = h.col(p);
                ComplexVector colq = h.col(q);
                h.col(p) = cs * colp - sn * phase * colq;
                h.col(q) = sn * colp + cs * phase * colq;
                // h <- J^dagger h
                ComplexVector rowp = h.row(p).transpose();
                ComplexVector rowq = h.row(q).transpose();
                h.row(p) = (cs * rowp - sn * std::conj(phase) * rowq).transpose();
                h.row(q) = (sn * rowp + cs * std::conj(phase) * rowq).transpose();
                h(p, q) = 0.0;
                h(q, p) = 0.0;
                h(p, p) = h(p, p).real();
                h(q, q) = h(q, q).real();

                if (vectors != nullptr) {
                    ComplexVector vp = vectors->col(p);
                    ComplexVector vq = vectors->col(q);
                    vectors->col(p) = cs * vp - sn * phase * vq;
                    vectors->col(q) = sn * vp + cs * phase * vq;
                }
            }
        }
    }
    if (off_diagonal_norm(h) > kJacobiOffNorm * scale)
        throw NumericalFailure("Jacobi eigensolver did not converge in 100 sweeps");
}

ComplexMatrix checked_hermitian_copy(const ComplexMatrix& h) {
    if (h.rows() != h.cols()) throw std::invalid_argument("hermitian_eig: matrix is not square");
    if (!is_hermitian(h, kEigInputHermitianTol))
        throw std::invalid_argument("hermitian_eig: matrix is not Hermitian within 1e-10");
    return (h + h.adjoint()) * 0.5;
}

}  // namespace

bool is_hermitian(const ComplexMatrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = i; j < m.cols(); ++j)
            if (std::abs(m(i, j) - std::conj(m(j, i))) > tol) return false;
    return true;
}

DensityMatrix::DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
    if (m_.rows() == 0 || m_.rows() != m_.cols())
        throw std::invalid_argument("density matrix must be square and non-empty");
    if (!is_hermitian(m_, kHermitianTol))
        throw std::invalid_argument("density matrix is not Hermitian within 1e-12");
    if (std::abs(m_.trace() - complex(1.0)) > kTraceTol)
        throw std::invalid_argument("density matrix trace differs from 1 by more than 1e-12");
    const auto spectrum = hermitian_eig(m_);
    if (spectrum.front() < -kNegativeEigTol)
        throw std::invalid_argument("density matrix has an eigenvalue below -1e-10");
}

DensityMatrix DensityMatrix::unchecked(ComplexMatrix m) { return DensityMatrix(std::move(m), Trusted{}); }

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
    return DensityMatrix(identity(dim) / static_cast<double>(dim), Trusted{});
}

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

PureState::PureState(ComplexVector amplitudes) : psi_(std::move(amplitudes)) {
    if (psi_.size() == 0) throw std::invalid_argument("pure state must have at least one amplitude");
    if (std::abs(psi_.squaredNorm() - 1.0) > 1e-12)
        throw std::invalid_argument("pure state is not normalized within 1e-12");
}

DensityMatrix PureState::density() const { return DensityMatrix::unchecked(psi_ * psi_.adjoint()); }

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
    const auto ra = a.rows(), ca = a.cols(), rb = b.rows(), cb = b.cols();
    ComplexMatrix out(ra * rb, ca * cb);
    for (Eigen::Index i = 0; i < ra; ++i)
        for (Eigen::Index j = 0; j < ca; ++j)
            out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
    return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, BipartiteDims dims, Keep keep) {
    if (dims.first <= 0 || dims.second <= 0 || m.rows() != dims.total() || m.cols() != dims.total())
        throw std::invalid_argument("partial_trace: dims do not multiply to the matrix dimension");
    const int d1 = dims.first, d2 = dims.second;
    if (keep == Keep::first) {
        ComplexMatrix out = ComplexMatrix::Zero(d1, d1);
        for (int i = 0; i < d1; ++i)
            for (int j = 0; j < d1; ++j)
                for (int k = 0; k < d2; ++k) out(i, j) += m(i * d2 + k, j * d2 + k);
        return out;
    }
    ComplexMatrix out = ComplexMatrix::Zero(d2, d2);
    for (int k = 0; k < d1; ++k) out += m.block(k * d2, k * d2, d2, d2);
    return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, BipartiteDims dims, Keep keep) {
    return DensityMatrix::unchecked(partial_trace(rho.matrix(), dims, keep));
}

std::vector<double> hermitian_eig(const ComplexMatrix& h) {
    ComplexMatrix work = checked_hermitian_copy(h);
    jacobi_diagonalize(work, nullptr);
    std::vector<double> values(static_cast<std::size_t>(work.rows()));
    for (Eigen::Index i = 0; i < work.rows(); ++i) values[static_cast<std::size_t>(i)] = work(i, i).real();
    std::sort(values.begin(), values.end());
    return values;
}

EigenDecomposition hermitian_eigensystem(const ComplexMatrix& h) {
    ComplexMatrix work = checked_hermitian_copy(h);
    const auto n = work.rows();
    ComplexMatrix v = ComplexMatrix::Identity(n, n);
    jacobi_diagonalize(work, &v);

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index i, Eigen::Index j) { return work(i, i).real() < work(j, j).real(); });

    EigenDecomposition out;
    out.vectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const auto src = order[static_cast<std::size_t>(k)];
        out.values.push_back(work(src, src).real());
        out.vectors.col(k) = v.col(src);
    }
    return out;
}

double entropy_of_spectrum(std::span<const double> eigenvalues) {
    double s = 0.0;
    for (double lambda : eigenvalues) {
        if (lambda < -kNegativeEigTol)
            throw NumericalFailure("negative eigenvalue " + std::to_string(lambda) + " in entropy evaluation");
        const double p = std::clamp(lambda, 0.0, 1.0);
        if (p > 0.0) s -= p * std::log2(p);
    }
    return std::max(s, 0.0);
}

double vn_entropy(const DensityMatrix& rho) {
    const auto spectrum = hermitian_eig(rho.matrix());
    return entropy_of_spectrum(spectrum);
}

double binary_entropy(double p) {
    const std::array<double, 2> spectrum{p, 1.0 - p};
    return entropy_of_spectrum(spectrum);
}

ComplexMatrix identity(int dim) { return ComplexMatrix::Identity(dim, dim); }

ComplexMatrix sigma_x() {
    ComplexMatrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

ComplexMatrix sigma_y() {
    ComplexMatrix m(2, 2);
    m << 0.0, complex(0.0, -1.0), complex(0.0, 1.0), 0.0;
    return m;
}

ComplexMatrix sigma_z() {
    ComplexMatrix m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

}  // namespace entprod
