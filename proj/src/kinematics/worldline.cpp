#include "fermidet/kinematics/worldline.hpp"

#include "fermidet/geometry/curvature.hpp"

#include <cmath>

namespace fermidet::kinematics {

namespace {

constexpr double kFdStepScale = 7.4e-4;  // ~eps^(1/5), 4th-order stencil

Eigen::VectorXd pack_state(const Vec4& x, const std::array<Vec4, 4>& legs) {
    Eigen::VectorXd y(20);
    y.segment<4>(0) = x;
    for (int a = 0; a < 4; ++a) y.segment<4>(4 * (a + 1)) = legs[a];
    return y;
}

void unpack_state(const Eigen::VectorXd& y, Vec4& x, std::array<Vec4, 4>& legs) {
    x = y.segment<4>(0);
    for (int a = 0; a < 4; ++a) legs[a] = y.segment<4>(4 * (a + 1));
}

}  // namespace

Vec4 Worldline::tangent(double lambda) const {
    if (velocity) return velocity(lambda);
    double h = kFdStepScale * std::max(1.0, std::abs(lambda));
    // shrink near the ends of the parameter range
    const double margin = std::min(lambda - param_range.lo, param_range.hi - lambda);
    if (margin < 2.0 * h) h = std::max(margin / 2.1, 1e-12);
    const Vec4 f1 = coords(lambda + h), f2 = coords(lambda + 2 * h);
    const Vec4 b1 = coords(lambda - h), b2 = coords(lambda - 2 * h);
    return (8.0 * (f1 - b1) - (f2 - b2)) / (12.0 * h);
}

double ProperTimeMap::tau_of_lambda(double lambda) const {
    return solution_.eval(lambda)[0] - tau_offset_;
}

double ProperTimeMap::rate(double lambda) const { return solution_.eval_derivative(lambda)[0]; }

double ProperTimeMap::lambda_of_tau(double tau) const {
    const double margin = 1e-9 * (1.0 + std::abs(tau_range_.lo) + std::abs(tau_range_.hi));
    if (tau < tau_range_.lo - margin || tau > tau_range_.hi + margin)
        throw ValidationError("ProperTimeMap: tau outside range");
    // Bracket on the knots, then bisect the dense output.
    double lo = lambda_range_.lo, hi = lambda_range_.hi;
    const std::size_t n = solution_.knot_count();
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double t0 = solution_.knot_state(k)[0] - tau_offset_;
        const double t1 = solution_.knot_state(k + 1)[0] - tau_offset_;
        if (tau >= t0 && tau <= t1) {
            lo = solution_.knot_parameter(k);
            hi = solution_.knot_parameter(k + 1);
            break;
        }
    }
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (tau_of_lambda(mid) < tau)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-15 * (1.0 + std::abs(hi))) break;
    }
    return 0.5 * (lo + hi);
}

ProperTimeMap reparametrize(const Worldline& w, double rel_tol, double abs_tol) {
    const auto rhs = [&w](double lambda, const Eigen::VectorXd&, Eigen::VectorXd& d) {
        const Vec4 x = w.coords(lambda);
        const Vec4 v = w.tangent(lambda);
        const double s = v.dot(w.metric.components(x) * v);
        if (!(s < 0))
            throw ValidationError("reparametrize: worldline not timelike (g(xdot,xdot) >= 0)");
        d[0] = std::sqrt(-s);
    };
    Eigen::VectorXd y0(1);
    y0[0] = 0.0;

    numerics::OdeOptions opts;
    opts.rel_tol = rel_tol;
    opts.abs_tol = abs_tol;

    ProperTimeMap map;
    map.lambda_range_ = w.param_range;
    map.solution_ = numerics::integrate_ode(rhs, y0, w.param_range.lo, w.param_range.hi, opts);
    const double anchor = w.param_range.contains(0.0) ? 0.0 : w.param_range.lo;
    map.tau_offset_ = map.solution_.eval(anchor)[0];
    map.tau_range_ = {map.solution_.eval(w.param_range.lo)[0] - map.tau_offset_,
                      map.solution_.eval(w.param_range.hi)[0] - map.tau_offset_};
    return map;
}

Vec4 four_velocity(const Worldline& w, const ProperTimeMap& map, double tau) {
    const double lambda = map.lambda_of_tau(tau);
    const Vec4 x = w.coords(lambda);
    const Vec4 v = w.tangent(lambda);
    const double s = v.dot(w.metric.components(x) * v);
    if (!(s < 0)) throw ValidationError("four_velocity: tangent not timelike");
    return v / std::sqrt(-s);
}

Vec4 proper_acceleration(const Worldline& w, const ProperTimeMap& map, double tau) {
    // du/dtau by a 4th-order stencil in proper time, then add Gamma u u.
    double h = kFdStepScale * std::max(1.0, std::abs(tau));
    const Interval range = map.tau_range();
    const double margin = std::min(tau - range.lo, range.hi - tau);
    if (margin < 2.0 * h) h = std::max(margin / 2.1, 1e-12);
    if (h <= 0) throw ValidationError("proper_acceleration: tau too close to range edge");

    const Vec4 up1 = four_velocity(w, map, tau + h), up2 = four_velocity(w, map, tau + 2 * h);
    const Vec4 um1 = four_velocity(w, map, tau - h), um2 = four_velocity(w, map, tau - 2 * h);
    const Vec4 dudtau = (8.0 * (up1 - um1) - (up2 - um2)) / (12.0 * h);

    const double lambda = map.lambda_of_tau(tau);
    const Vec4 x = w.coords(lambda);
    const Vec4 u = four_velocity(w, map, tau);
    const auto gamma = geometry::christoffel(w.metric, x);

    Vec4 acc = dudtau;
    for (int mu = 0; mu < 4; ++mu) acc[mu] += u.dot(gamma[mu] * u);
    return acc;
}

double Tetrad::gram_deviation(const MetricField& metric) const {
    const Mat4 g = metric.components(base_point);
    Mat4 eta = Mat4::Identity();
    eta(0, 0) = -1.0;
    Mat4 gram;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) gram(a, b) = legs[a].dot(g * legs[b]);
    return (gram - eta).cwiseAbs().maxCoeff();
}

namespace {

std::array<Vec4, 4> gram_schmidt(const Mat4& g, const Vec4& u, const std::vector<Vec4>& hints,
                                 bool hints_are_user_supplied) {
    std::array<Vec4, 4> legs;
    legs[0] = u;

    std::vector<Vec4> candidates = hints;
    for (int axis = 0; axis < 4; ++axis) {
        Vec4 e = Vec4::Zero();
        e[axis] = 1.0;
        candidates.push_back(e);
    }

    int built = 1;
    std::size_t used_hints = 0;
    for (std::size_t c = 0; c < candidates.size() && built < 4; ++c) {
        Vec4 v = candidates[c];
        // project out u (g(u,u) = -1) and the spatial legs already built
        v += (v.dot(g * legs[0])) * legs[0];
        for (int j = 1; j < built; ++j) v -= (v.dot(g * legs[j])) * legs[j];
        const double norm2 = v.dot(g * v);
        const bool is_hint = c < hints.size();
        if (norm2 < 1e-14) {
            if (is_hint && hints_are_user_supplied)
                throw ValidationError("initial_tetrad: degenerate hint axis");
            continue;
        }
        legs[built++] = v / std::sqrt(norm2);
        if (is_hint) ++used_hints;
    }
    if (built < 4) throw NumericalError("initial_tetrad: could not complete tetrad");
    (void)used_hints;
    return legs;
}

}  // namespace

Tetrad initial_tetrad(const Worldline& w, const ProperTimeMap& map, double tau0,
                      const std::vector<Vec4>& hint_axes) {
    const double lambda = map.lambda_of_tau(tau0);
    const Vec4 x = w.coords(lambda);
    const Vec4 u = four_velocity(w, map, tau0);
    const Mat4 g = w.metric.components(x);

    Tetrad t;
    t.tau = tau0;
    t.base_point = x;
    t.legs = gram_schmidt(g, u, hint_axes, !hint_axes.empty());
    return t;
}

namespace {

// Joint FW system: y = (x, e0, e1, e2, e3).
numerics::OdeRhs make_fw_rhs(const Worldline& w, const ProperTimeMap& map) {
    return [&w, &map](double tau, const Eigen::VectorXd& y, Eigen::VectorXd& dydt) {
        Vec4 x;
        std::array<Vec4, 4> legs;
        unpack_state(y, x, legs);

        const Vec4 u = four_velocity(w, map, tau);
        const auto gamma = geometry::christoffel(w.metric, x);
        const Mat4 g = w.metric.components(x);

        // proper acceleration at the integrated position
        double h = kFdStepScale * std::max(1.0, std::abs(tau));
        const Interval range = map.tau_range();
        const double margin = std::min(tau - range.lo, range.hi - tau);
        if (margin < 2.0 * h) h = std::max(margin / 2.1, 1e-12);
        const Vec4 up1 = four_velocity(w, map, tau + h);
        const Vec4 up2 = four_velocity(w, map, tau + 2 * h);
        const Vec4 um1 = four_velocity(w, map, tau - h);
        const Vec4 um2 = four_velocity(w, map, tau - 2 * h);
        Vec4 acc = (8.0 * (up1 - um1) - (up2 - um2)) / (12.0 * h);
        for (int mu = 0; mu < 4; ++mu) acc[mu] += u.dot(gamma[mu] * u);

        dydt.segment<4>(0) = u;
        for (int a = 0; a < 4; ++a) {
            const Vec4& v = legs[a];
            const double v_dot_a = v.dot(g * acc);
            const double v_dot_u = v.dot(g * u);
            Vec4 dv = v_dot_a * u - v_dot_u * acc;
            for (int mu = 0; mu < 4; ++mu) dv[mu] -= u.dot(gamma[mu] * v);
            dydt.segment<4>(4 * (a + 1)) = dv;
        }
    };
}

Tetrad state_to_tetrad(double tau, const Eigen::VectorXd& y) {
    Tetrad t;
    t.tau = tau;
    unpack_state(y, t.base_point, t.legs);
    return t;
}

Tetrad maybe_reorthonormalize(Tetrad t, const MetricField& metric, double threshold,
                              int* corrections) {
    if (t.gram_deviation(metric) <= threshold) return t;
    const Mat4 g = metric.components(t.base_point);
    const double unorm2 = -t.legs[0].dot(g * t.legs[0]);
    if (!(unorm2 > 0)) throw NumericalError("fw_transport: u leg lost timelike character");
    const Vec4 u = t.legs[0] / std::sqrt(unorm2);
    std::vector<Vec4> hints(t.legs.begin() + 1, t.legs.end());
    t.legs = gram_schmidt(g, u, hints, false);
    if (corrections) ++(*corrections);
    return t;
}

}  // namespace

Tetrad fw_transport(const Tetrad& start, const Worldline& w, const ProperTimeMap& map,
                    double tau_target, const TransportOptions& opts) {
    if (tau_target == start.tau) return start;
    numerics::OdeOptions ode_opts;
    ode_opts.rel_tol = opts.rel_tol;
    ode_opts.abs_tol = opts.abs_tol;
    const auto sol = numerics::integrate_ode(make_fw_rhs(w, map), pack_state(start.base_point, start.legs),
                                             start.tau, tau_target, ode_opts);
    Tetrad t = state_to_tetrad(tau_target, sol.eval(tau_target));
    int corrections = 0;
    t = maybe_reorthonormalize(std::move(t), w.metric, opts.drift_threshold, &corrections);
    return t;
}

TetradField::TetradField(const Worldline& w, const ProperTimeMap& map, const Tetrad& start,
                         double tau_lo, double tau_hi, const TransportOptions& opts)
    : metric_(w.metric),
      tau_start_(start.tau),
      span_{tau_lo, tau_hi},
      drift_threshold_(opts.drift_threshold) {
    if (!(tau_lo <= start.tau && start.tau <= tau_hi) || !(tau_lo < tau_hi))
        throw ValidationError("TetradField: need tau_lo < tau_hi bracketing the start tau");
    numerics::OdeOptions ode_opts;
    ode_opts.rel_tol = opts.rel_tol;
    ode_opts.abs_tol = opts.abs_tol;
    const Eigen::VectorXd y0 = pack_state(start.base_point, start.legs);
    const auto rhs = make_fw_rhs(w, map);
    if (tau_hi > start.tau) forward_ = numerics::integrate_ode(rhs, y0, start.tau, tau_hi, ode_opts);
    if (tau_lo < start.tau) backward_ = numerics::integrate_ode(rhs, y0, start.tau, tau_lo, ode_opts);
}

Tetrad TetradField::at(double tau) const {
    Eigen::VectorXd y;
    if (tau >= tau_start_) {
        if (!forward_) {
            if (tau > tau_start_) throw ValidationError("TetradField: tau beyond span");
            y = backward_->eval(tau);
        } else {
            y = forward_->eval(tau);
        }
    } else {
        if (!backward_) throw ValidationError("TetradField: tau beyond span");
        y = backward_->eval(tau);
    }
    Tetrad t = state_to_tetrad(tau, y);
    return maybe_reorthonormalize(std::move(t), metric_, drift_threshold_, &corrections_);
}

}  // namespace fermidet::kinematics
