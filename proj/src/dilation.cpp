#include "entprod/dilation.hpp"

#include <cmath>
#include <sstream>

#include "entprod/entropy.hpp"

namespace entprod {

namespace {

std::string describe(const std::string& identity, double t, double residual) {
    std::ostringstream msg;
    msg << "identity " << identity << " violated at t = " << t << " (residual " << residual << ")";
    return msg.str();
}

}  // namespace

CheckFailure::CheckFailure(const std::string& identity, double t, double residual)
    : std::runtime_error(describe(identity, t, residual)), identity_(identity), t_(t), residual_(residual) {}

Isometry::Isometry(ComplexMatrix v, int d_in, int d_env) : v_(std::move(v)), d_in_(d_in), d_env_(d_env) {
    if (v_.rows() != d_in * d_env || v_.cols() != d_in) throw std::invalid_argument("isometry has the wrong shape");
}

DensityMatrix Isometry::channel(const DensityMatrix& rho) const {
    const ComplexMatrix big = v_ * rho.matrix() * v_.adjoint();
    return DensityMatrix::unchecked(partial_trace(big, {d_in_, d_env_}, Keep::first));
}

Isometry stinespring(const KrausFamily& k) {
    if (k.completeness_residual() > 1e-10)
        throw std::invalid_argument("stinespring: Kraus family is not complete");
    const int d = k.dim();
    const int r = static_cast<int>(k.size());
    ComplexMatrix v(d * r, d);
    for (int e = 0; e < r; ++e)
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) v(a * r + e, b) = k.ops()[static_cast<std::size_t>(e)](a, b);
    return Isometry(std::move(v), d, r);
}

DensityMatrix dilated_state(const PureState& initial, const KrausFamily& k) {
    const Isometry v = stinespring(k);
    if (initial.dim() != 2 * v.d_in()) throw std::invalid_argument("dilated_state: expected a system-apparatus state");
    const ComplexMatrix lifted = tensor(identity(2), v.matrix());
    const ComplexVector psi = lifted * initial.amplitudes();
    return DensityMatrix::unchecked(psi * psi.adjoint());
}

bool OracleReport::passed(double tol) const {
    for (double r : residuals)
        if (!(r <= tol)) return false;
    return mutual_ae >= -tol;
}

OracleReport evaluate_oracle(const PureState& initial, const KrausFamily& dilation, const KrausFamily& kraus_route,
                             double t) {
    const DensityMatrix sae = dilated_state(initial, dilation);
    const int r = static_cast<int>(dilation.size());
    const int da = dilation.dim();

    const DensityMatrix env = partial_trace(sae, {2 * da, r}, Keep::second);
    const DensityMatrix ae = partial_trace(sae, {2, da * r}, Keep::second);

    OracleReport rep;
    rep.t = t;
    rep.env_dim = r;
    rep.s_env = vn_entropy(env);
    rep.s_ae = vn_entropy(ae);
    const double s_a = vn_entropy(partial_trace(ae, {da, r}, Keep::first));
    rep.mutual_ae = s_a + rep.s_env - rep.s_ae;

    const DensityMatrix rho0 = initial.density();
    const BipartiteDims sa{2, kraus_route.dim()};
    const KrausFamily extended = extend_to_sa(kraus_route);
    const DensityMatrix evolved = DensityMatrix::unchecked(apply_unchecked(extended, rho0.matrix()));
    rep.s_sa = vn_entropy(evolved);
    rep.s_exchange = entropy_exchange(rho0, extended);
    rep.s_system = vn_entropy(partial_trace(rho0, sa, Keep::first));
    rep.delta_mutual = mutual_information(evolved, sa) - mutual_information(rho0, sa);
    rep.tep = tep(rho0, evolved, rep.s_exchange);

    rep.residuals = {
        std::abs(rep.s_env - rep.s_sa),
        std::abs(rep.s_env - rep.s_exchange),
        std::abs(rep.s_ae - rep.s_system),
        std::abs(rep.delta_mutual + rep.tep - rep.mutual_ae),
    };
    return rep;
}

OracleReport oracle_checks(const PureState& initial, const KrausFamily& dilation, const KrausFamily& kraus_route,
                           double t) {
    auto rep = evaluate_oracle(initial, dilation, kraus_route, t);
    for (std::size_t i = 0; i < rep.residuals.size(); ++i)
        if (!(rep.residuals[i] <= kOracleTol)) throw CheckFailure(OracleReport::names[i], t, rep.residuals[i]);
    if (rep.mutual_ae < -kOracleTol) throw CheckFailure("mutual_ae_nonnegative", t, -rep.mutual_ae);
    return rep;
}

OracleReport oracle_checks(const PureState& initial, const ChannelModel& model, double t) {
    validate(model);
    const KrausFamily k = kraus_at(model, t);
    return oracle_checks(initial, k, k, t);
}

}  // namespace entprod
