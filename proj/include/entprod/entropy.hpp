#pragma once

#include "entprod/channels.hpp"
#include "entprod/qmat.hpp"

namespace entprod {

/// Bloch direction of a rank-1 projective measurement on a qubit; the pair
/// of projectors is (I +/- n.sigma)/2.
struct MeasurementBasis {
    double theta = 0.0;  // [0, pi]
    double phi = 0.0;    // [0, 2 pi)

    /// Maps arbitrary angles onto the canonical ranges without changing the
    /// projector pair's direction.
    static MeasurementBasis canonical(double theta, double phi);
};

struct ClassicalCorrelation {
    double bits = 0.0;
    MeasurementBasis basis;
};

struct InfoQuantities {
    double mutual = 0.0;
    double classical = 0.0;
    double discord = 0.0;
    double entropy_exchange = 0.0;
    double tep = 0.0;
};

/// W_ij = Tr(K_i rho K_j^dagger) / Tr(Lambda[rho]), Hermitian PSD unit-trace.
ComplexMatrix w_matrix(const DensityMatrix& rho, const KrausFamily& k);

/// Entropy acquired by an initially pure environment: S(W) in bits.
double entropy_exchange(const DensityMatrix& rho, const KrausFamily& k);

/// S(X) + S(Y) - S(XY).
double mutual_information(const DensityMatrix& rho_xy, BipartiteDims dims);

/// Classical correlation J with a projective measurement on the second
/// factor, which must be a qubit. Coarse 64 x 128 grid over the Bloch sphere,
/// then Nelder-Mead refinement of the three best cells.
ClassicalCorrelation classical_correlation(const DensityMatrix& rho_xy, BipartiteDims dims);

/// I - J; values in [-1e-6, 0) are clamped to zero, below that a
/// NumericalFailure is raised.
double discord(const DensityMatrix& rho_xy, BipartiteDims dims);

/// Mutual information, classical correlation and discord in one pass.
struct Correlations {
    double mutual = 0.0;
    double classical = 0.0;
    double discord = 0.0;
    MeasurementBasis basis;
};
Correlations correlations(const DensityMatrix& rho_xy, BipartiteDims dims);

/// Total entropy production S(rho^SA~) + S(rho^E~) - S(rho^SA) - S(rho^E)
/// for a pure initial SA state and a pure initial environment.
/// Throws std::invalid_argument when `initial` is not a pure state.
double tep(const DensityMatrix& initial, const DensityMatrix& evolved, double env_entropy);
double tep(const PureState& initial, const DensityMatrix& evolved, double env_entropy);

}  // namespace entprod
