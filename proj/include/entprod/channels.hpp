#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "entprod/qmat.hpp"

namespace entprod {

/// Operator-sum representation of a qubit (or extended) channel.
///
/// Completeness is not enforced at construction so that deliberately broken
/// families can be built for negative tests; `apply` and `stinespring`
/// reject families whose completeness residual exceeds 1e-10.
class KrausFamily {
public:
    KrausFamily() = default;
    explicit KrausFamily(std::vector<ComplexMatrix> ops);

    const std::vector<ComplexMatrix>& ops() const noexcept { return ops_; }
    std::size_t size() const noexcept { return ops_.size(); }
    int dim() const noexcept { return ops_.empty() ? 0 : static_cast<int>(ops_.front().rows()); }

    // max entry of |sum K^dagger K - I|
    double completeness_residual() const;

    static KrausFamily identity(int dim);

private:
    std::vector<ComplexMatrix> ops_;
};

struct Dephasing {
    double s = 1.0;
    double omega_c = 1.0;
};

struct AmplitudeDamping {
    double lambda = 1.0;
    double gamma0 = 1.0;
};

struct GeneralizedAmplitudeDamping {
    double omega = 1.0;
};

using ChannelModel = std::variant<Dephasing, AmplitudeDamping, GeneralizedAmplitudeDamping>;

/// Throws std::invalid_argument on non-positive rates or non-finite values.
void validate(const ChannelModel& model);
std::string model_name(const ChannelModel& model);

// --- pure dephasing (Ohmic-family spectral density) ---

double lanczos_gamma(double x);

/// eta(tau) = omega_c [1 + (omega_c tau)^2]^{-s/2} Gamma(s) sin[s arctan(omega_c tau)]
double dephasing_rate(double tau, double s, double omega_c);

/// gamma(t) = exp(-int_0^t eta), adaptive Simpson to 1e-10 absolute.
double dephasing_factor(double t, double s, double omega_c);

/// Memo of the cumulative integral of eta. Queries at increasing times reuse
/// the nearest cached knot below, so a full trajectory costs one pass over
/// [0, t_max]. Not thread-safe; use one instance per worker.
class DephasingIntegral {
public:
    DephasingIntegral(double s, double omega_c);
    double integral(double t);
    double factor(double t);

private:
    double s_;
    double omega_c_;
    std::map<double, double> knots_;
};

KrausFamily dephasing_kraus_from_factor(double gamma);
KrausFamily dephasing_kraus(double t, const Dephasing& model);

// --- amplitude damping with Lorentzian spectrum ---

double ad_G(double t, double lambda, double gamma0);
/// Time-dependent decay rate; throws NumericalFailure at a pole (G(t) = 0).
double ad_decay_rate(double t, double lambda, double gamma0);
KrausFamily ad_kraus_from_G(double G);
KrausFamily ad_kraus(double t, const AmplitudeDamping& model);

// --- generalized amplitude damping, P = cos^2(omega t), q = e^{-t} ---

KrausFamily gad_kraus_from(double P, double q);
KrausFamily gad_kraus(double t, double omega);

// --- generic ---

/// Kraus family of `model` at time `t`.
KrausFamily kraus_at(const ChannelModel& model, double t);

/// gamma(t) for dephasing, G(t) for amplitude damping, P(t) for GAD.
double channel_scalar(const ChannelModel& model, double t);

DensityMatrix apply(const KrausFamily& k, const DensityMatrix& rho);
ComplexMatrix apply_unchecked(const KrausFamily& k, const ComplexMatrix& rho);

/// {I_2 (x) K_i}: the apparatus channel lifted to system (x) apparatus.
KrausFamily extend_to_sa(const KrausFamily& k, int system_dim = 2);

/// Precomputed Kraus families and channel scalars on a set of times,
/// shareable read-only across threads.
struct ChannelSchedule {
    std::vector<double> times;
    std::vector<KrausFamily> apparatus;
    std::vector<KrausFamily> extended;
    std::vector<double> scalars;

    static ChannelSchedule build(const ChannelModel& model, const std::vector<double>& times);
};

}  // namespace entprod
