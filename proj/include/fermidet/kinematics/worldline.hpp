#pragma once

#include "fermidet/geometry/metric_field.hpp"
#include "fermidet/numerics/ode.hpp"

#include <functional>
#include <optional>

namespace fermidet::kinematics {

using geometry::MetricField;

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double x) const { return x >= lo && x <= hi; }
};

/// A timelike curve x(lambda) on a chart.  The parametrization is
/// arbitrary; proper time is recovered by `reparametrize`.
struct Worldline {
    MetricField metric;
    std::function<Vec4(double)> coords;
    std::function<Vec4(double)> velocity;  // optional analytic dx/dlambda
    Interval param_range;

    /// dx/dlambda, analytic when given, else 4th-order central differences.
    Vec4 tangent(double lambda) const;
};

/// Monotone map between curve parameter and proper time, anchored so that
/// tau = 0 at lambda = 0 when the range contains 0 (else at the lower end).
class ProperTimeMap {
public:
    ProperTimeMap() = default;

    double tau_of_lambda(double lambda) const;
    double lambda_of_tau(double tau) const;
    Interval tau_range() const { return tau_range_; }

    /// dtau/dlambda at lambda (from the dense solution).
    double rate(double lambda) const;

private:
    friend ProperTimeMap reparametrize(const Worldline& w, double rel_tol, double abs_tol);
    numerics::OdeSolution solution_;  // tau(lambda), single component
    double tau_offset_ = 0.0;
    Interval tau_range_;
    Interval lambda_range_;
};

/// Solve dtau/dlambda = sqrt(-g(xdot, xdot)) over the parameter range.
/// Throws ValidationError if the curve fails to be timelike.
ProperTimeMap reparametrize(const Worldline& w, double rel_tol = 1e-12, double abs_tol = 1e-13);

/// Normalized four-velocity u = dz/dtau at proper time tau; g(u,u) = -1.
Vec4 four_velocity(const Worldline& w, const ProperTimeMap& map, double tau);

/// Proper acceleration a = u^nu nabla_nu u^mu; orthogonal to u.
Vec4 proper_acceleration(const Worldline& w, const ProperTimeMap& map, double tau);

/// Orthonormal tetrad at one event of the curve.
struct Tetrad {
    double tau = 0.0;
    Vec4 base_point = Vec4::Zero();
    std::array<Vec4, 4> legs;  // legs[0] = u, legs[1..3] = e_i

    const Vec4& u() const { return legs[0]; }
    const Vec4& e(int i) const { return legs[i]; }  // i in 1..3

    /// max |Gram - eta| against the supplied metric.
    double gram_deviation(const MetricField& metric) const;
};

/// Build the initial tetrad at tau0 by Gram-Schmidt over {u, hints...,
/// coordinate axes}.  Hints that are linearly dependent on earlier legs
/// raise ValidationError.
Tetrad initial_tetrad(const Worldline& w, const ProperTimeMap& map, double tau0,
                      const std::vector<Vec4>& hint_axes = {});

struct TransportOptions {
    double rel_tol = 1e-12;
    double abs_tol = 1e-13;
    double drift_threshold = 1e-6;  // re-orthonormalize beyond this only
};

/// Fermi-Walker transport of a tetrad to tau_target.  The position and all
/// four legs are integrated as one coupled system; the u leg reproduces
/// four_velocity along the way.
Tetrad fw_transport(const Tetrad& start, const Worldline& w, const ProperTimeMap& map,
                    double tau_target, const TransportOptions& opts = {});

/// Dense Fermi-Walker transported frame over a proper-time span, queryable
/// at any tau inside.  Tracks how many re-orthonormalizations were applied
/// (zero in healthy integrations).
class TetradField {
public:
    TetradField(const Worldline& w, const ProperTimeMap& map, const Tetrad& start, double tau_lo,
                double tau_hi, const TransportOptions& opts = {});

    Tetrad at(double tau) const;
    Interval span() const { return span_; }
    int correction_count() const { return corrections_; }

private:
    MetricField metric_;
    std::optional<numerics::OdeSolution> forward_;
    std::optional<numerics::OdeSolution> backward_;
    double tau_start_ = 0.0;
    Interval span_;
    double drift_threshold_ = 1e-6;
    mutable int corrections_ = 0;
};

}  // namespace fermidet::kinematics
