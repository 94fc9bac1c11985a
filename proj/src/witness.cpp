#include "entprod/witness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "entprod/nelder_mead.hpp"

namespace entprod {

namespace {

constexpr BipartiteDims kSA{2, 2};
constexpr double kQuarterPi = std::numbers::pi / 4.0;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void rethrow_at(const NumericalFailure& e, double t) {
    std::ostringstream msg;
    msg << e.what() << " (at t = " << t << ")";
    throw NumericalFailure(msg.str(), t);
}

double radical_inverse(unsigned index, unsigned base) {
    double result = 0.0, f = 1.0 / base;
    while (index > 0) {
        result += f * (index % base);
        index /= base;
        f /= base;
    }
    return result;
}

// Halton points in [0,1)^4 with a seeded Cranley-Patterson shift.
std::vector<std::array<double, 4>> quasi_random_points(int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::array<double, 4> shift{};
    for (auto& s : shift) s = unit(rng);
    static constexpr std::array<unsigned, 4> bases{2, 3, 5, 7};
    std::vector<std::array<double, 4>> pts(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k)
        for (std::size_t d = 0; d < 4; ++d) {
            const double u = radical_inverse(static_cast<unsigned>(k + 1), bases[d]) + shift[d];
            pts[static_cast<std::size_t>(k)][d] = u - std::floor(u);
        }
    return pts;
}

// alpha = (pi/4) sin^2(x0) keeps the Schmidt angle in range for any real x0.
InitialStateParam from_search_vector(const std::vector<double>& x) {
    const double s = std::sin(x[0]);
    return {kQuarterPi * s * s, {x[1], x[2], x[3]}};
}

std::vector<double> to_search_vector(const InitialStateParam& p) {
    return {std::asin(std::sqrt(std::clamp(p.alpha / kQuarterPi, 0.0, 1.0))), p.basis[0], p.basis[1], p.basis[2]};
}

InitialStateParam canonical(InitialStateParam p) {
    for (auto& angle : p.basis) {
        angle = std::remainder(angle, 4.0 * std::numbers::pi);  // SU(2) period
    }
    return p;
}

}  // namespace

TimeGrid::TimeGrid(double t_max, int steps) : t_max_(t_max), steps_(steps) {
    if (!(t_max > 0.0) || !std::isfinite(t_max)) throw std::invalid_argument("t_max must be finite and positive");
    if (steps < 16) throw std::invalid_argument("steps must be at least 16");
}

std::vector<double> TimeGrid::samples() const {
    std::vector<double> out(size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = at(k);
    return out;
}

PureState generate_initial(const InitialStateParam& param) {
    if (!(param.alpha >= 0.0 && param.alpha <= kQuarterPi + 1e-15))
        throw std::invalid_argument("Schmidt angle must lie in [0, pi/4]");
    const auto rz = [](double a) {
        ComplexMatrix m = ComplexMatrix::Zero(2, 2);
        m(0, 0) = std::polar(1.0, -0.5 * a);
        m(1, 1) = std::polar(1.0, 0.5 * a);
        return m;
    };
    ComplexMatrix ry(2, 2);
    const double c = std::cos(0.5 * param.basis[1]), s = std::sin(0.5 * param.basis[1]);
    ry << c, -s, s, c;
    const ComplexMatrix u = rz(param.basis[0]) * ry * rz(param.basis[2]);

    ComplexVector psi = ComplexVector::Zero(4);
    const double ca = std::cos(param.alpha), sa = std::sin(param.alpha);
    for (int a = 0; a < 2; ++a) {
        psi(a) += ca * u(a, 0);
        psi(2 + a) += sa * u(a, 1);
    }
    psi /= psi.norm();
    return PureState(std::move(psi));
}

std::vector<TrajectoryRecord> trajectory(const ChannelModel& model, const PureState& initial, const TimeGrid& grid,
                                         const TrajectoryOptions& opt) {
    return trajectory(ChannelSchedule::build(model, grid.samples()), initial, grid, opt);
}

std::vector<TrajectoryRecord> trajectory(const ChannelSchedule& schedule, const PureState& initial,
                                         const TimeGrid& grid, const TrajectoryOptions& opt) {
    if (initial.dim() != kSA.total()) throw std::invalid_argument("trajectory: initial state must be two qubits");
    if (schedule.times.size() != grid.size()) throw std::invalid_argument("trajectory: schedule does not match grid");
    const DensityMatrix rho0 = initial.density();
    const double nan = std::numeric_limits<double>::quiet_NaN();

    std::vector<TrajectoryRecord> out;
    out.reserve(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double t = schedule.times[k];
        TrajectoryRecord r;
        r.t = t;
        r.channel_scalar = schedule.scalars[k];
        try {
            const DensityMatrix evolved = apply(schedule.extended[k], rho0);
            r.entropy_exchange = entropy_exchange(rho0, schedule.extended[k]);
            r.tep = tep(rho0, evolved, r.entropy_exchange);
            if (opt.correlations) {
                const auto c = correlations(evolved, kSA);
                r.mutual = c.mutual;
                r.classical = c.classical;
                r.discord = c.discord;
            } else {
                r.mutual = mutual_information(evolved, kSA);
                r.classical = nan;
                r.discord = nan;
            }
        } catch (const NumericalFailure& e) {
            rethrow_at(e, t);
        }
        out.push_back(r);
    }
    const auto rates = tepr_series(out, grid);
    for (std::size_t k = 0; k < out.size(); ++k) out[k].tepr = rates[k];
    return out;
}

std::vector<double> tep_series(const ChannelSchedule& schedule, const PureState& initial) {
    const DensityMatrix rho0 = initial.density();
    std::vector<double> out;
    out.reserve(schedule.times.size());
    for (std::size_t k = 0; k < schedule.times.size(); ++k) {
        try {
            const auto& family = schedule.extended[k];
            const DensityMatrix evolved = DensityMatrix::unchecked(apply_unchecked(family, rho0.matrix()));
            out.push_back(tep(rho0, evolved, entropy_exchange(rho0, family)));
        } catch (const NumericalFailure& e) {
            rethrow_at(e, schedule.times[k]);
        }
    }
    return out;
}

std::vector<double> tepr_series(std::span<const double> f, const TimeGrid& grid) {
    const std::size_t n = f.size();
    if (n < 3) throw std::invalid_argument("tepr_series needs at least three samples");
    const double h = grid.h();
    std::vector<double> out(n);
    out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
    out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
    return out;
}

std::vector<double> tepr_series(const std::vector<TrajectoryRecord>& traj, const TimeGrid& grid) {
    std::vector<double> values(traj.size());
    std::transform(traj.begin(), traj.end(), values.begin(), [](const TrajectoryRecord& r) { return r.tep; });
    return tepr_series(values, grid);
}

NegativeArea negative_area(std::span<const double> tepr, const TimeGrid& grid, double eps_neg) {
    if (tepr.size() != grid.size()) throw std::invalid_argument("negative_area: series length does not match grid");
    const double h = grid.h();
    NegativeArea out;
    auto clipped = [&](std::size_t i) { return tepr[i] < -eps_neg ? tepr[i] : 0.0; };
    for (std::size_t i = 0; i + 1 < tepr.size(); ++i) out.integral += 0.5 * h * (clipped(i) + clipped(i + 1));

    std::optional<std::size_t> run_start;
    for (std::size_t i = 0; i < tepr.size(); ++i) {
        const bool negative = tepr[i] < -eps_neg;
        if (negative && !run_start) run_start = i;
        if (!negative && run_start) {
            out.intervals.emplace_back(grid.at(*run_start), grid.at(i - 1));
            run_start.reset();
        }
    }
    if (run_start) out.intervals.emplace_back(grid.at(*run_start), grid.at(tepr.size() - 1));
    out.integral = std::min(out.integral, 0.0);
    return out;
}

WitnessResult nonmarkovianity_measure(const ChannelModel& model, const TimeGrid& grid, const OptimizerConfig& opt) {
    if (opt.starts < 0 || opt.evaluations_per_start < 1 || opt.jobs < 1)
        throw std::invalid_argument("optimizer configuration out of range");
    const ChannelSchedule schedule = ChannelSchedule::build(model, grid.samples());

    auto area_of = [&](const InitialStateParam& p) {
        const auto tepr = tepr_series(tep_series(schedule, generate_initial(p)), grid);
        return negative_area(tepr, grid, opt.eps_neg);
    };

    // Candidate 0 is the Bell state (or the fixed state); the rest are refined starts.
    std::vector<InitialStateParam> seeds{opt.fixed_initial.value_or(InitialStateParam::bell())};
    if (!opt.fixed_initial) {
        for (const auto& u : quasi_random_points(opt.starts, opt.seed))
            seeds.push_back({kQuarterPi * u[0], {2.0 * std::numbers::pi * u[1], std::numbers::pi * u[2],
                                                 2.0 * std::numbers::pi * u[3]}});
    }

    std::vector<CandidateSummary> results(seeds.size());
    std::vector<char> exhausted(seeds.size(), 0);
    auto run_candidate = [&](std::size_t idx) {
        if (idx == 0) {
            results[0] = {seeds[0], -area_of(seeds[0]).integral, 1};
            return;
        }
        auto objective = [&](const std::vector<double>& x) { return area_of(from_search_vector(x)).integral; };
        NelderMeadOptions nm;
        nm.max_evaluations = opt.evaluations_per_start;
        nm.diameter_tol = 1e-6;
        const auto res = nelder_mead(objective, to_search_vector(seeds[idx]), {0.3, 0.3, 0.3, 0.3}, nm);
        results[idx] = {canonical(from_search_vector(res.x)), 0.0 - res.value, res.evaluations};
        exhausted[idx] = res.converged ? 0 : 1;
    };

    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(opt.jobs), seeds.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < seeds.size(); ++i) run_candidate(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> errors(workers);
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = next++; i < seeds.size(); i = next++) run_candidate(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        for (auto& th : pool) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    // deterministic max, ties resolved toward the lower candidate index
    std::size_t best = 0;
    for (std::size_t i = 1; i < results.size(); ++i)
        if (results[i].measure > results[best].measure) best = i;

    WitnessResult out;
    out.best_initial = results[best].initial;
    const auto area = area_of(out.best_initial);
    out.signed_integral = area.integral;
    out.measure = std::abs(area.integral);
    out.intervals = area.intervals;
    out.candidates = std::move(results);
    out.budget_exhausted = std::any_of(exhausted.begin(), exhausted.end(), [](char c) { return c != 0; });
    return out;
}

TimeGrid default_grid(const ChannelModel& model, int steps) {
    return std::visit(overloaded{
                          [&](const Dephasing& m) { return TimeGrid(3.0 / m.omega_c, steps); },
                          [&](const AmplitudeDamping& m) { return TimeGrid(40.0 / m.gamma0, steps); },
                          [&](const GeneralizedAmplitudeDamping&) { return TimeGrid(3.0, steps); },
                      },
                      model);
}

}  // namespace entprod
