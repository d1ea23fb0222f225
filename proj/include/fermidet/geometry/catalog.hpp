#pragma once

#include "fermidet/geometry/curvature.hpp"
#include "fermidet/geometry/metric_field.hpp"

#include <map>
#include <string>

namespace fermidet::geometry {

/// Named analytic spacetime with parameters in geometric units
/// (c = G = 1, lengths in meters).
struct SpacetimeId {
    std::string name;  // minkowski-inertial | minkowski-rindler-chart |
                       // schwarzschild | de-sitter-static
    std::map<std::string, double> params;
};

/// Build the metric for a catalog entry.  All entries carry analytic
/// first derivatives.  Throws ValidationError for unknown names or
/// out-of-range parameters.
MetricField lookup(const SpacetimeId& id);

/// Operational radius of curvature at x: inverse square root of the
/// largest-magnitude orthonormal-frame Riemann component, using the
/// coordinate-aligned static frame.  Flat spacetime returns +infinity.
double curvature_radius(const SpacetimeId& id, const Vec4& x);

/// Coordinate-aligned orthonormal tetrad of a diagonal static chart:
/// legs e_a = partial_a / sqrt(|g_aa|).  Only valid where g is diagonal.
std::array<Vec4, 4> static_frame(const MetricField& metric, const Vec4& x);

}  // namespace fermidet::geometry
