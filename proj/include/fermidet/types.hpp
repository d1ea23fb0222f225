#pragma once

#include <Eigen/Dense>

#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace fermidet {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Mat2c = Eigen::Matrix2cd;
using Complex = std::complex<double>;

template <int N>
using VecN = Eigen::Matrix<double, N, 1>;

/// Thrown on malformed input: bad parameters, points outside a chart,
/// profiles exceeding validity radii.  The CLI maps this to exit code 2.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a numerical method breaks down (step-size underflow,
/// singular metric, non-finite samples).  The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

namespace constants {

// Everything internal is geometric (c = G = hbar = 1, lengths in meters).
// These constants live at the SI boundary only.
inline constexpr double c_si = 2.99792458e8;              // m/s
inline constexpr double c_si_sq = c_si * c_si;             // m^2/s^2
inline constexpr double g_earth_si = 9.80665;              // m/s^2
inline constexpr double sun_mass_geometric = 1476.62504;   // G*Msun/c^2 in m

inline constexpr double infinity = std::numeric_limits<double>::infinity();

}  // namespace constants

}  // namespace fermidet
