#pragma once

#include "fermidet/types.hpp"

#include <functional>
#include <vector>

namespace fermidet::numerics {

/// Right-hand side of an ODE system: dy/dt = f(t, y), written into `dydt`.
using OdeRhs = std::function<void(double t, const Eigen::VectorXd& y, Eigen::VectorXd& dydt)>;

struct OdeOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double initial_step = 0.0;  // 0 = choose automatically
    double max_step = 0.0;      // 0 = no cap
    long max_steps = 1000000;
};

struct OdeStats {
    long accepted = 0;
    long rejected = 0;
    long rhs_evaluations = 0;
    double max_error_estimate = 0.0;  // largest accepted scaled local error
};

/// Dense-output solution of an initial value problem.  Stores the accepted
/// knots (t, y, f) and interpolates between them with cubic Hermite
/// polynomials, so states can be queried at arbitrary parameters inside
/// the integration span.
class OdeSolution {
public:
    OdeSolution() = default;

    double t_begin() const { return forward_ ? t_.front() : t_.back(); }
    double t_end() const { return forward_ ? t_.back() : t_.front(); }

    /// Interpolated state at t (must lie within the integration span,
    /// up to a small roundoff margin).
    Eigen::VectorXd eval(double t) const;

    /// Interpolated time derivative at t.
    Eigen::VectorXd eval_derivative(double t) const;

    std::size_t knot_count() const { return t_.size(); }
    double knot_parameter(std::size_t k) const { return t_[k]; }
    const Eigen::VectorXd& knot_state(std::size_t k) const { return y_[k]; }

    const OdeStats& stats() const { return stats_; }

private:
    friend OdeSolution integrate_ode(const OdeRhs&, const Eigen::VectorXd&, double, double,
                                     const OdeOptions&);

    std::size_t locate(double t) const;

    // Knots stored in ascending t regardless of integration direction.
    std::vector<double> t_;
    std::vector<Eigen::VectorXd> y_;
    std::vector<Eigen::VectorXd> f_;
    bool forward_ = true;
    OdeStats stats_;
};

/// Adaptive Dormand-Prince 5(4) integration of dy/dt = rhs(t, y) from t0 to
/// t1 (either direction).  Local error is controlled against
/// abs_tol + rel_tol * |y| per component.
///
/// Throws NumericalError on step-size underflow (stiff or singular
/// right-hand side) and ValidationError on bad inputs or non-finite states.
OdeSolution integrate_ode(const OdeRhs& rhs, const Eigen::VectorXd& y0, double t0, double t1,
                          const OdeOptions& opts = {});

}  // namespace fermidet::numerics
