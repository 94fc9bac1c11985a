#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace entprod {

using complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Raised when an iterative or analytic evaluation cannot produce a trustworthy
// number (non-convergence, pole, genuinely negative spectrum).
class NumericalFailure : public std::runtime_error {
public:
    explicit NumericalFailure(const std::string& what, double where = 0.0)
        : std::runtime_error(what), where_(where) {}

    // Time or abscissa the failure is attached to, when meaningful.
    double where() const noexcept { return where_; }

private:
    double where_;
};

enum class Keep { first, second };

struct BipartiteDims {
    int first = 2;
    int second = 2;

    int total() const { return first * second; }
};

/// Hermitian, positive semidefinite, unit-trace matrix.
///
/// The public constructor validates the matrix (Hermitian within 1e-12
/// entrywise, trace one within 1e-12, spectrum >= -1e-10). Code paths that
/// produce a density matrix by a known-valid map (complete Kraus families,
/// partial traces) use `unchecked` to avoid paying an eigendecomposition.
class DensityMatrix {
public:
    explicit DensityMatrix(ComplexMatrix m);

    static DensityMatrix unchecked(ComplexMatrix m);
    static DensityMatrix maximally_mixed(int dim);

    const ComplexMatrix& matrix() const noexcept { return m_; }
    int dim() const noexcept { return static_cast<int>(m_.rows()); }
    double purity() const;

private:
    struct Trusted {};
    DensityMatrix(ComplexMatrix m, Trusted) : m_(std::move(m)) {}

    ComplexMatrix m_;
};

/// Normalized state vector.
class PureState {
public:
    explicit PureState(ComplexVector amplitudes);

    const ComplexVector& amplitudes() const noexcept { return psi_; }
    int dim() const noexcept { return static_cast<int>(psi_.size()); }
    DensityMatrix density() const;

private:
    ComplexVector psi_;
};

struct EigenDecomposition {
    std::vector<double> values;  // ascending
    ComplexMatrix vectors;       // columns match `values`
};

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix partial_trace(const ComplexMatrix& m, BipartiteDims dims, Keep keep);
DensityMatrix partial_trace(const DensityMatrix& rho, BipartiteDims dims, Keep keep);

/// Eigenvalues of a Hermitian matrix in ascending order (cyclic complex
/// Jacobi). Throws std::invalid_argument when `h` is not Hermitian within 1e-10.
std::vector<double> hermitian_eig(const ComplexMatrix& h);
EigenDecomposition hermitian_eigensystem(const ComplexMatrix& h);

/// von Neumann entropy in bits of a spectrum; entries in [-1e-10, 0) are
/// treated as zero, anything more negative is a NumericalFailure.
double entropy_of_spectrum(std::span<const double> eigenvalues);
double vn_entropy(const DensityMatrix& rho);

double binary_entropy(double p);

// Pauli matrices and identity.
ComplexMatrix identity(int dim);
ComplexMatrix sigma_x();
ComplexMatrix sigma_y();
ComplexMatrix sigma_z();

bool is_hermitian(const ComplexMatrix& m, double tol);

}  // namespace entprod
