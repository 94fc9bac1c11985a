#pragma once

#include <array>
#include <stdexcept>
#include <string>

#include "entprod/channels.hpp"
#include "entprod/qmat.hpp"

namespace entprod {

// An entropic identity that should hold exactly did not, beyond 1e-9.
class CheckFailure : public std::runtime_error {
public:
    CheckFailure(const std::string& identity, double t, double residual);

    const std::string& identity() const noexcept { return identity_; }
    double time() const noexcept { return t_; }
    double residual() const noexcept { return residual_; }

private:
    std::string identity_;
    double t_;
    double residual_;
};

/// V = sum_i K_i (x) |i>_E, a (d_in * d_env) x d_in matrix with V^dagger V = I.
class Isometry {
public:
    Isometry(ComplexMatrix v, int d_in, int d_env);

    const ComplexMatrix& matrix() const noexcept { return v_; }
    int d_in() const noexcept { return d_in_; }
    int d_env() const noexcept { return d_env_; }

    /// Tr_E[V rho V^dagger]
    DensityMatrix channel(const DensityMatrix& rho) const;

private:
    ComplexMatrix v_;
    int d_in_;
    int d_env_;
};

/// Minimal Stinespring dilation, environment dimension = Kraus count.
/// Throws std::invalid_argument for families that are not complete.
Isometry stinespring(const KrausFamily& k);

/// (I_S (x) V)|psi><psi|(I_S (x) V)^dagger on S (x) A (x) E, for a
/// two-qubit SA state and a channel on the apparatus qubit.
DensityMatrix dilated_state(const PureState& initial, const KrausFamily& k);

inline constexpr double kOracleTol = 1e-9;

struct OracleReport {
    double t = 0.0;
    int env_dim = 0;

    double s_env = 0.0;             // S(rho^E~), dilation route
    double s_sa = 0.0;              // S(rho^SA~), Kraus route
    double s_exchange = 0.0;        // S(W)
    double s_ae = 0.0;              // S(rho^A~E~), dilation route
    double s_system = 0.0;          // S(rho^S)
    double delta_mutual = 0.0;      // I(S:A~) - I(S:A)
    double tep = 0.0;               // Delta S_P
    double mutual_ae = 0.0;         // I(A~:E~), dilation route

    static constexpr std::array<const char*, 4> names{"env_vs_sa", "env_vs_exchange", "ae_vs_s",
                                                     "mutual_balance"};
    std::array<double, 4> residuals{};

    bool passed(double tol = kOracleTol) const;
};

/// Computes every identity without throwing. `dilation` builds the SAE state,
/// `kraus_route` feeds the reduced-channel quantities; they are the same
/// family except in negative tests.
OracleReport evaluate_oracle(const PureState& initial, const KrausFamily& dilation, const KrausFamily& kraus_route,
                             double t = 0.0);

/// Runs the four identities for `model` at time `t`; throws CheckFailure
/// naming the first identity whose residual exceeds 1e-9 (or whose
/// apparatus-environment mutual information is below -1e-9).
OracleReport oracle_checks(const PureState& initial, const ChannelModel& model, double t);
OracleReport oracle_checks(const PureState& initial, const KrausFamily& dilation, const KrausFamily& kraus_route,
                           double t);

}  // namespace entprod
