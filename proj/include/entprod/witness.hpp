#pragma once

#include <array>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "entprod/channels.hpp"
#include "entprod/entropy.hpp"
#include "entprod/qmat.hpp"

namespace entprod {

/// Uniform grid t_k = k h, h = t_max / steps, k = 0..steps.
class TimeGrid {
public:
    TimeGrid(double t_max, int steps);

    double t_max() const noexcept { return t_max_; }
    int steps() const noexcept { return steps_; }
    double h() const noexcept { return t_max_ / steps_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(steps_) + 1; }
    double at(std::size_t k) const noexcept { return static_cast<double>(k) * h(); }
    std::vector<double> samples() const;

private:
    double t_max_;
    int steps_;
};

struct TrajectoryRecord {
    double t = 0.0;
    double tep = 0.0;
    double tepr = 0.0;
    double mutual = 0.0;
    double classical = 0.0;
    double discord = 0.0;
    double entropy_exchange = 0.0;
    double channel_scalar = 0.0;
};

/// Schmidt angle plus a ZYZ rotation of the apparatus basis.
struct InitialStateParam {
    double alpha = 0.0;                   // [0, pi/4]
    std::array<double, 3> basis{0, 0, 0};  // Rz(basis[0]) Ry(basis[1]) Rz(basis[2])

    static InitialStateParam bell() { return {std::numbers::pi / 4.0, {0.0, 0.0, 0.0}}; }
};

/// cos(alpha)|0>|a0> + sin(alpha)|1>|a1>, {a0, a1} the rotated apparatus basis.
PureState generate_initial(const InitialStateParam& param);

struct TrajectoryOptions {
    // Discord minimization dominates the cost; witness searches switch it off.
    bool correlations = true;
};

/// One record per grid sample, TEPR filled by finite differences.
/// Numerical failures are rethrown with the offending time attached.
std::vector<TrajectoryRecord> trajectory(const ChannelModel& model, const PureState& initial, const TimeGrid& grid,
                                         const TrajectoryOptions& opt = {});
std::vector<TrajectoryRecord> trajectory(const ChannelSchedule& schedule, const PureState& initial,
                                         const TimeGrid& grid, const TrajectoryOptions& opt = {});

/// TEP only, on a precomputed schedule.
std::vector<double> tep_series(const ChannelSchedule& schedule, const PureState& initial);

/// Central differences inside, one-sided three-point at the ends.
std::vector<double> tepr_series(std::span<const double> values, const TimeGrid& grid);
std::vector<double> tepr_series(const std::vector<TrajectoryRecord>& traj, const TimeGrid& grid);

inline constexpr double kDefaultEpsNeg = 1e-9;

struct NegativeArea {
    double integral = 0.0;  // <= 0
    std::vector<std::pair<double, double>> intervals;
};

/// Trapezoid integral of the rate restricted to samples below -eps_neg, and
/// the maximal runs of such samples as [t_first, t_last] intervals.
NegativeArea negative_area(std::span<const double> tepr, const TimeGrid& grid, double eps_neg = kDefaultEpsNeg);

struct OptimizerConfig {
    int starts = 16;
    int evaluations_per_start = 200;
    std::uint64_t seed = 0;
    int jobs = 1;
    double eps_neg = kDefaultEpsNeg;
    // When set, the search is skipped and only this state is evaluated.
    std::optional<InitialStateParam> fixed_initial;
};

struct CandidateSummary {
    InitialStateParam initial;
    double measure = 0.0;
    int evaluations = 0;
};

struct WitnessResult {
    double measure = 0.0;          // |signed_integral| of the best candidate
    double signed_integral = 0.0;  // <= 0
    std::vector<std::pair<double, double>> intervals;
    InitialStateParam best_initial;
    std::vector<CandidateSummary> candidates;
    bool budget_exhausted = false;  // some start hit its evaluation budget
};

/// Maximal accumulated negative TEP rate over pure initial SA states.
WitnessResult nonmarkovianity_measure(const ChannelModel& model, const TimeGrid& grid, const OptimizerConfig& opt = {});

/// Default grid for a model (dephasing 3/omega_c, AD 40/gamma0, GAD 3; 800 steps).
TimeGrid default_grid(const ChannelModel& model, int steps = 800);

}  // namespace entprod
