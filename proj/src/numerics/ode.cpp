#include "fermidet/numerics/ode.hpp"

#include <algorithm>
#include <cmath>

namespace fermidet::numerics {

namespace {

// Dormand-Prince RK5(4)7M tableau.
constexpr double kC[7] = {0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0};

constexpr double kA[7][6] = {
    {},
    {1.0 / 5.0},
    {3.0 / 40.0, 9.0 / 40.0},
    {44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0},
    {19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0},
    {9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0},
    {35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0},
};

// The 5th-order weights equal kA[6] (FSAL); these are the embedded
// 4th-order weights, including the k7 contribution.
constexpr double kB4[7] = {5179.0 / 57600.0,    0.0,           7571.0 / 16695.0, 393.0 / 640.0,
                           -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0};

bool finite(const Eigen::VectorXd& v) { return v.allFinite(); }

}  // namespace

Eigen::VectorXd OdeSolution::eval(double t) const {
    const std::size_t i = locate(t);
    const double h = t_[i + 1] - t_[i];
    const double s = (t - t_[i]) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    // Cubic Hermite basis on [t_i, t_{i+1}].
    const double h00 = 2 * s3 - 3 * s2 + 1;
    const double h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2;
    const double h11 = s3 - s2;
    return h00 * y_[i] + (h10 * h) * f_[i] + h01 * y_[i + 1] + (h11 * h) * f_[i + 1];
}

Eigen::VectorXd OdeSolution::eval_derivative(double t) const {
    const std::size_t i = locate(t);
    const double h = t_[i + 1] - t_[i];
    const double s = (t - t_[i]) / h;
    const double s2 = s * s;
    const double d00 = (6 * s2 - 6 * s) / h;
    const double d10 = 3 * s2 - 4 * s + 1;
    const double d01 = (-6 * s2 + 6 * s) / h;
    const double d11 = 3 * s2 - 2 * s;
    return d00 * y_[i] + d10 * f_[i] + d01 * y_[i + 1] + d11 * f_[i + 1];
}

std::size_t OdeSolution::locate(double t) const {
    const double lo = t_.front();
    const double hi = t_.back();
    const double margin = 1e-9 * (1.0 + std::abs(lo) + std::abs(hi));
    if (t < lo - margin || t > hi + margin)
        throw ValidationError("OdeSolution::eval: parameter outside integration span");
    if (t <= lo) return 0;
    if (t >= hi) return t_.size() - 2;
    auto it = std::upper_bound(t_.begin(), t_.end(), t);
    return static_cast<std::size_t>(it - t_.begin()) - 1;
}

OdeSolution integrate_ode(const OdeRhs& rhs, const Eigen::VectorXd& y0, double t0, double t1,
                          const OdeOptions& opts) {
    if (t0 == t1) throw ValidationError("integrate_ode: t0 == t1");
    if (opts.rel_tol <= 0 || opts.abs_tol <= 0)
        throw ValidationError("integrate_ode: tolerances must be positive");
    if (!finite(y0)) throw ValidationError("integrate_ode: non-finite initial state");

    const int n = static_cast<int>(y0.size());
    const double dir = (t1 > t0) ? 1.0 : -1.0;
    const double span = std::abs(t1 - t0);

    OdeSolution sol;
    sol.forward_ = dir > 0;

    Eigen::VectorXd y = y0;
    Eigen::VectorXd k[7];
    for (auto& ki : k) ki.resize(n);
    Eigen::VectorXd ynew(n), yerr(n), stage(n);

    double t = t0;
    rhs(t, y, k[0]);
    sol.stats_.rhs_evaluations++;
    if (!finite(k[0])) throw NumericalError("integrate_ode: non-finite rhs at initial point");

    // Initial step heuristic: scale of y over scale of y'.
    double h = opts.initial_step;
    if (h <= 0) {
        const double ynorm = y.cwiseAbs().maxCoeff() + opts.abs_tol;
        const double fnorm = k[0].cwiseAbs().maxCoeff();
        h = (fnorm > 0) ? 0.01 * ynorm / fnorm : span / 100.0;
        h = std::min(h, span / 10.0);
    }
    if (opts.max_step > 0) h = std::min(h, opts.max_step);
    h = std::max(h, span * 1e-12);

    sol.t_.push_back(t);
    sol.y_.push_back(y);
    sol.f_.push_back(k[0]);

    long steps = 0;
    while (dir * (t1 - t) > 0) {
        if (++steps > opts.max_steps)
            throw NumericalError("integrate_ode: step budget exhausted");

        const double h_signed = dir * std::min(h, std::abs(t1 - t));
        const double h_floor = 16.0 * std::numeric_limits<double>::epsilon() *
                               std::max(std::abs(t), std::abs(t1));
        if (std::abs(h_signed) < h_floor)
            throw NumericalError("integrate_ode: step-size underflow (stiff or singular rhs)");

        for (int s = 1; s < 7; ++s) {
            stage = y;
            for (int j = 0; j < s; ++j) stage += (h_signed * kA[s][j]) * k[j];
            rhs(t + kC[s] * h_signed, stage, k[s]);
            sol.stats_.rhs_evaluations++;
        }
        // After the s = 6 stage, `stage` holds the 5th-order solution and
        // k[6] its derivative (FSAL).
        ynew = stage;

        yerr.setZero();
        for (int s = 0; s < 6; ++s) yerr += (kA[6][s] - kB4[s]) * k[s];
        yerr -= kB4[6] * k[6];
        yerr *= h_signed;

        if (!finite(ynew) || !finite(yerr))
            throw NumericalError("integrate_ode: non-finite state during integration");

        double err = 0.0;
        for (int i = 0; i < n; ++i) {
            const double sc =
                opts.abs_tol + opts.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            const double e = yerr[i] / sc;
            err += e * e;
        }
        err = std::sqrt(err / n);

        if (err <= 1.0) {
            t += h_signed;
            y = ynew;
            std::swap(k[0], k[6]);  // FSAL
            sol.t_.push_back(t);
            sol.y_.push_back(y);
            sol.f_.push_back(k[0]);
            sol.stats_.accepted++;
            sol.stats_.max_error_estimate = std::max(sol.stats_.max_error_estimate, err);
        } else {
            sol.stats_.rejected++;
        }

        double factor = 0.9 * std::pow(std::max(err, 1e-16), -0.2);
        factor = std::clamp(factor, 0.2, 5.0);
        h = std::abs(h_signed) * factor;
        if (opts.max_step > 0) h = std::min(h, opts.max_step);
    }

    if (!sol.forward_) {
        std::reverse(sol.t_.begin(), sol.t_.end());
        std::reverse(sol.y_.begin(), sol.y_.end());
        std::reverse(sol.f_.begin(), sol.f_.end());
    }
    return sol;
}

}  // namespace fermidet::numerics
