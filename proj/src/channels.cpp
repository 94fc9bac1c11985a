#include "entprod/channels.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

namespace entprod {

namespace {

constexpr double kCompletenessTol = 1e-10;
constexpr double kSegmentTol = 1e-12;
constexpr int kSimpsonMaxDepth = 50;
constexpr double kSeriesThreshold = 1e-6;
constexpr double kPoleTol = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

template <class F>
double simpson_step(F& f, double a, double b, double fa, double fm, double fb, double whole, double tol,
                    int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth >= kSimpsonMaxDepth)
        throw NumericalFailure("adaptive Simpson did not converge", m);
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

template <class F>
double adaptive_simpson(F f, double a, double b, double tol) {
    if (b <= a) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step(f, a, b, fa, fm, fb, whole, tol, 0);
}

void require_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("time must be finite and non-negative");
}

ComplexMatrix mat2(complex a, complex b, complex c, complex d) {
    ComplexMatrix m(2, 2);
    m << a, b, c, d;
    return m;
}

}  // namespace

KrausFamily::KrausFamily(std::vector<ComplexMatrix> ops) : ops_(std::move(ops)) {
    if (ops_.empty()) throw std::invalid_argument("Kraus family must contain at least one operator");
    const auto n = ops_.front().rows();
    for (const auto& k : ops_)
        if (k.rows() != n || k.cols() != n)
            throw std::invalid_argument("Kraus operators must be square and share one dimension");
}

double KrausFamily::completeness_residual() const {
    const auto n = dim();
    ComplexMatrix sum = ComplexMatrix::Zero(n, n);
    for (const auto& k : ops_) sum.noalias() += k.adjoint() * k;
    sum -= ComplexMatrix::Identity(n, n);
    return sum.cwiseAbs().maxCoeff();
}

KrausFamily KrausFamily::identity(int dim) { return KrausFamily({ComplexMatrix::Identity(dim, dim)}); }

void validate(const ChannelModel& model) {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument(std::string(name) + " must be finite and positive");
    };
    std::visit(overloaded{
                   [&](const Dephasing& m) {
                       positive(m.s, "s");
                       positive(m.omega_c, "omega_c");
                   },
                   [&](const AmplitudeDamping& m) {
                       positive(m.lambda, "lambda");
                       positive(m.gamma0, "gamma0");
                   },
                   [&](const GeneralizedAmplitudeDamping& m) {
                       if (!std::isfinite(m.omega)) throw std::invalid_argument("omega must be finite");
                   },
               },
               model);
}

std::string model_name(const ChannelModel& model) {
    return std::visit(overloaded{
                          [](const Dephasing&) { return std::string("dephasing"); },
                          [](const AmplitudeDamping&) { return std::string("ad"); },
                          [](const GeneralizedAmplitudeDamping&) { return std::string("gad"); },
                      },
                      model);
}

double lanczos_gamma(double x) {
    static constexpr std::array<double, 9> coeff{
        0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
        771.32342877765313,      -176.61502916214059,   12.507343278686905,
        -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
    constexpr double g = 7.0;
    if (x < 0.5) return std::numbers::pi / (std::sin(std::numbers::pi * x) * lanczos_gamma(1.0 - x));
    x -= 1.0;
    double a = coeff[0];
    for (std::size_t i = 1; i < coeff.size(); ++i) a += coeff[i] / (x + static_cast<double>(i));
    const double t = x + g + 0.5;
    return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

double dephasing_rate(double tau, double s, double omega_c) {
    const double x = omega_c * tau;
    return omega_c * std::pow(1.0 + x * x, -0.5 * s) * lanczos_gamma(s) * std::sin(s * std::atan(x));
}

DephasingIntegral::DephasingIntegral(double s, double omega_c) : s_(s), omega_c_(omega_c) {
    validate(Dephasing{s, omega_c});
    knots_.emplace(0.0, 0.0);
}

double DephasingIntegral::integral(double t) {
    require_time(t);
    auto it = std::prev(knots_.upper_bound(t));
    if (it->first == t) return it->second;
    const double gamma_s = lanczos_gamma(s_);
    auto eta = [&](double tau) {
        const double x = omega_c_ * tau;
        return omega_c_ * std::pow(1.0 + x * x, -0.5 * s_) * gamma_s * std::sin(s_ * std::atan(x));
    };
    const double value = it->second + adaptive_simpson(eta, it->first, t, kSegmentTol);
    knots_.emplace_hint(std::next(it), t, value);
    return value;
}

double DephasingIntegral::factor(double t) { return std::exp(-integral(t)); }

double dephasing_factor(double t, double s, double omega_c) {
    require_time(t);
    DephasingIntegral integral(s, omega_c);
    // Unit-width panels keep each Simpson recursion shallow on long horizons.
    const double panel = 1.0 / omega_c;
    for (double knot = panel; knot < t; knot += panel) integral.integral(knot);
    return integral.factor(t);
}

KrausFamily dephasing_kraus_from_factor(double gamma) {
    const double a = std::sqrt(std::max(0.0, 0.5 * (1.0 + gamma)));
    const double b = std::sqrt(std::max(0.0, 0.5 * (1.0 - gamma)));
    return KrausFamily({a * identity(2), b * sigma_z()});
}

KrausFamily dephasing_kraus(double t, const Dephasing& model) {
    return dephasing_kraus_from_factor(dephasing_factor(t, model.s, model.omega_c));
}

double ad_G(double t, double lambda, double gamma0) {
    require_time(t);
    const double disc = lambda * lambda - 2.0 * gamma0 * lambda;
    const double decay = std::exp(-0.5 * lambda * t);
    const double mag = std::sqrt(std::abs(disc));
    if (mag * t < kSeriesThreshold) return decay * (1.0 + 0.5 * lambda * t);
    if (disc > 0.0) {
        // e^{-lambda t/2} cosh and sinh folded into two decaying exponentials
        const double ratio = lambda / mag;
        return 0.5 * std::exp(0.5 * (mag - lambda) * t) * (1.0 + ratio) +
               0.5 * std::exp(-0.5 * (mag + lambda) * t) * (1.0 - ratio);
    }
    const double y = 0.5 * mag * t;
    return decay * (std::cos(y) + (lambda / mag) * std::sin(y));
}

double ad_decay_rate(double t, double lambda, double gamma0) {
    require_time(t);
    const double disc = lambda * lambda - 2.0 * gamma0 * lambda;
    const double mag = std::sqrt(std::abs(disc));
    if (mag * t < kSeriesThreshold) return gamma0 * lambda * t / (1.0 + 0.5 * lambda * t);
    if (disc > 0.0) {
        const double th = std::tanh(0.5 * mag * t);
        return 2.0 * gamma0 * lambda * th / (mag + lambda * th);
    }
    const double y = 0.5 * mag * t;
    const double denom = mag * std::cos(y) + lambda * std::sin(y);
    if (std::abs(denom) < kPoleTol) {
        std::ostringstream msg;
        msg << "decay rate pole at t = " << t;
        throw NumericalFailure(msg.str(), t);
    }
    return 2.0 * gamma0 * lambda * std::sin(y) / denom;
}

KrausFamily ad_kraus_from_G(double G) {
    const double jump = std::sqrt(std::max(0.0, 1.0 - G * G));
    return KrausFamily({mat2(1.0, 0.0, 0.0, G), mat2(0.0, jump, 0.0, 0.0)});
}

KrausFamily ad_kraus(double t, const AmplitudeDamping& model) {
    return ad_kraus_from_G(ad_G(t, model.lambda, model.gamma0));
}

KrausFamily gad_kraus_from(double P, double q) {
    const double sp = std::sqrt(P), sp1 = std::sqrt(1.0 - P);
    const double sq = std::sqrt(q), sq1 = std::sqrt(1.0 - q);
    return KrausFamily({
        sp * mat2(1.0, 0.0, 0.0, sq),
        sp * mat2(0.0, sq1, 0.0, 0.0),
        sp1 * mat2(sq, 0.0, 0.0, 1.0),
        sp1 * mat2(0.0, 0.0, sq1, 0.0),
    });
}

KrausFamily gad_kraus(double t, double omega) {
    require_time(t);
    const double c = std::cos(omega * t);
    return gad_kraus_from(c * c, std::exp(-t));
}

KrausFamily kraus_at(const ChannelModel& model, double t) {
    return std::visit(overloaded{
                          [&](const Dephasing& m) { return dephasing_kraus(t, m); },
                          [&](const AmplitudeDamping& m) { return ad_kraus(t, m); },
                          [&](const GeneralizedAmplitudeDamping& m) { return gad_kraus(t, m.omega); },
                      },
                      model);
}

double channel_scalar(const ChannelModel& model, double t) {
    return std::visit(overloaded{
                          [&](const Dephasing& m) { return dephasing_factor(t, m.s, m.omega_c); },
                          [&](const AmplitudeDamping& m) { return ad_G(t, m.lambda, m.gamma0); },
                          [&](const GeneralizedAmplitudeDamping& m) {
                              const double c = std::cos(m.omega * t);
                              return c * c;
                          },
                      },
                      model);
}

ComplexMatrix apply_unchecked(const KrausFamily& k, const ComplexMatrix& rho) {
    ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
    for (const auto& op : k.ops()) out.noalias() += op * rho * op.adjoint();
    return out;
}

DensityMatrix apply(const KrausFamily& k, const DensityMatrix& rho) {
    if (k.dim() != rho.dim()) throw std::invalid_argument("apply: Kraus dimension does not match the state");
    if (k.completeness_residual() > kCompletenessTol)
        throw std::invalid_argument("apply: Kraus family violates completeness beyond 1e-10");
    return DensityMatrix::unchecked(apply_unchecked(k, rho.matrix()));
}

KrausFamily extend_to_sa(const KrausFamily& k, int system_dim) {
    std::vector<ComplexMatrix> ops;
    ops.reserve(k.size());
    const ComplexMatrix id = identity(system_dim);
    for (const auto& op : k.ops()) ops.push_back(tensor(id, op));
    return KrausFamily(std::move(ops));
}

ChannelSchedule ChannelSchedule::build(const ChannelModel& model, const std::vector<double>& times) {
    validate(model);
    ChannelSchedule out;
    out.times = times;
    out.apparatus.reserve(times.size());
    out.extended.reserve(times.size());
    out.scalars.reserve(times.size());
    auto push = [&](KrausFamily k, double scalar) {
        out.extended.push_back(extend_to_sa(k));
        out.apparatus.push_back(std::move(k));
        out.scalars.push_back(scalar);
    };
    std::optional<DephasingIntegral> integral;
    if (const auto* deph = std::get_if<Dephasing>(&model)) integral.emplace(deph->s, deph->omega_c);
    for (double t : times) {
        try {
            if (integral) {
                const double gamma = integral->factor(t);
                push(dephasing_kraus_from_factor(gamma), gamma);
            } else {
                push(kraus_at(model, t), channel_scalar(model, t));
            }
        } catch (const NumericalFailure& e) {
            std::ostringstream msg;
            msg << e.what() << " (at t = " << t << ")";
            throw NumericalFailure(msg.str(), t);
        }
    }
    return out;
}

}  // namespace entprod
