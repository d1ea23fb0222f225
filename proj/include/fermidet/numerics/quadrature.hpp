#pragma once

#include "fermidet/types.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <queue>
#include <vector>

namespace fermidet::numerics {

struct QuadOptions {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    long max_evals = 50000000;
};

/// Result of an adaptive quadrature over an N-component integrand.
/// `converged` is false when the evaluation budget ran out first; the
/// partial value and its error estimate are still returned.
template <int N>
struct QuadResult {
    VecN<N> value = VecN<N>::Zero();
    VecN<N> error_estimate = VecN<N>::Zero();
    long evaluations = 0;
    bool converged = true;
};

/// Axis-aligned integration box in up to 4 dimensions.
struct Box {
    Eigen::Matrix<double, Eigen::Dynamic, 1> lo, hi;

    int dim() const { return static_cast<int>(lo.size()); }

    static Box interval(double a, double b) {
        Box box;
        box.lo.resize(1);
        box.hi.resize(1);
        box.lo[0] = a;
        box.hi[0] = b;
        return box;
    }
    static Box cube(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
        Box box;
        box.lo = lo;
        box.hi = hi;
        return box;
    }
};

namespace detail {

// Gauss 7 / Kronrod 15 nodes on [-1, 1]; nodes 1,3,5 (odd indices from the
// end) carry the Gauss weights.
constexpr int kGkPoints = 8;
constexpr double kGkNode[kGkPoints] = {
    0.0,
    0.2077849550078985,
    0.4058451513773972,
    0.5860872354676911,
    0.7415311855993945,
    0.8648644233597691,
    0.9491079123427585,
    0.9914553711208126,
};
constexpr double kKronrodWeight[kGkPoints] = {
    0.2094821410847278, 0.2044329400752989, 0.1903505780647854, 0.1690047266392679,
    0.1406532597155259, 0.1047900103222502, 0.0630920926299786, 0.0229353220105292,
};
constexpr double kGaussWeight[kGkPoints] = {
    0.4179591836734694, 0.0, 0.3818300505051189, 0.0,
    0.2797053914892767, 0.0, 0.1294849661688697, 0.0,
};

template <int N>
struct Region {
    Eigen::Matrix<double, Eigen::Dynamic, 1> lo, hi;
    VecN<N> value;
    VecN<N> error;
    int split_dim = 0;
    double priority = 0.0;
    std::uint64_t order = 0;  // creation index; deterministic tie-break
};

template <int N>
struct RegionCompare {
    bool operator()(const Region<N>& a, const Region<N>& b) const {
        if (a.priority != b.priority) return a.priority < b.priority;
        return a.order > b.order;
    }
};

template <int N, class F>
void gk15_evaluate(F&& f, double a, double b, Region<N>& region, long& evals) {
    const double center = 0.5 * (a + b);
    const double halfwidth = 0.5 * (b - a);

    VecN<N> kronrod = VecN<N>::Zero();
    VecN<N> gauss = VecN<N>::Zero();
    Eigen::Matrix<double, Eigen::Dynamic, 1> x(1);

    x[0] = center;
    VecN<N> fc = f(x);
    evals++;
    if (!fc.allFinite()) throw NumericalError("quadrature: non-finite integrand sample");
    kronrod += kKronrodWeight[0] * fc;
    gauss += kGaussWeight[0] * fc;

    for (int i = 1; i < kGkPoints; ++i) {
        const double dx = halfwidth * kGkNode[i];
        x[0] = center + dx;
        VecN<N> fp = f(x);
        x[0] = center - dx;
        VecN<N> fm = f(x);
        evals += 2;
        if (!fp.allFinite() || !fm.allFinite())
            throw NumericalError("quadrature: non-finite integrand sample");
        kronrod += kKronrodWeight[i] * (fp + fm);
        gauss += kGaussWeight[i] * (fp + fm);
    }

    region.value = halfwidth * kronrod;
    for (int c = 0; c < N; ++c) {
        // QUADPACK-style sharpened estimate of the Kronrod error.
        const double diff = std::abs(halfwidth * (kronrod[c] - gauss[c]));
        region.error[c] = std::min(diff, std::pow(200.0 * diff, 1.5));
        if (!std::isfinite(region.error[c])) region.error[c] = diff;
    }
    region.split_dim = 0;
}

// Genz-Malik degree-7 rule with embedded degree-5 error estimate, for
// dimensions 2..4.
template <int N, class F>
void genz_malik_evaluate(F&& f, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                         Region<N>& region, long& evals) {
    const int d = static_cast<int>(lo.size());
    const double lambda2 = std::sqrt(9.0 / 70.0);
    const double lambda3 = std::sqrt(9.0 / 10.0);
    const double lambda5 = std::sqrt(9.0 / 19.0);

    const double dd = d;
    const double w1 = (12824.0 - 9120.0 * dd + 400.0 * dd * dd) / 19683.0;
    const double w2 = 980.0 / 6561.0;
    const double w3 = (1820.0 - 400.0 * dd) / 19683.0;
    const double w4 = 200.0 / 19683.0;
    const double w5 = 6859.0 / 19683.0;  // divided by 2^d below
    const double e1 = (729.0 - 950.0 * dd + 50.0 * dd * dd) / 729.0;
    const double e2 = 245.0 / 486.0;
    const double e3 = (265.0 - 100.0 * dd) / 1458.0;
    const double e4 = 25.0 / 729.0;

    Eigen::VectorXd center = 0.5 * (lo + hi);
    Eigen::VectorXd half = 0.5 * (hi - lo);
    double volume = 1.0;
    for (int i = 0; i < d; ++i) volume *= 2.0 * half[i];

    auto sample = [&](const Eigen::VectorXd& x) {
        VecN<N> v = f(x);
        evals++;
        if (!v.allFinite()) throw NumericalError("quadrature: non-finite integrand sample");
        return v;
    };

    const VecN<N> f0 = sample(center);

    VecN<N> sum2 = VecN<N>::Zero();  // +-lambda2 axis points
    VecN<N> sum3 = VecN<N>::Zero();  // +-lambda3 axis points
    Eigen::VectorXd x = center;
    double best_diff = -1.0;
    int split_dim = 0;
    const double ratio = (9.0 / 70.0) / (9.0 / 10.0);  // lambda2^2 / lambda3^2

    for (int i = 0; i < d; ++i) {
        x[i] = center[i] + lambda2 * half[i];
        VecN<N> fp2 = sample(x);
        x[i] = center[i] - lambda2 * half[i];
        VecN<N> fm2 = sample(x);
        x[i] = center[i] + lambda3 * half[i];
        VecN<N> fp3 = sample(x);
        x[i] = center[i] - lambda3 * half[i];
        VecN<N> fm3 = sample(x);
        x[i] = center[i];

        sum2 += fp2 + fm2;
        sum3 += fp3 + fm3;

        // Fourth-difference proxy picks the subdivision axis.
        const double diff =
            ((fp2 + fm2 - 2.0 * f0) - ratio * (fp3 + fm3 - 2.0 * f0)).cwiseAbs().maxCoeff();
        if (diff > best_diff) {
            best_diff = diff;
            split_dim = i;
        }
    }

    VecN<N> sum4 = VecN<N>::Zero();  // (+-lambda3, +-lambda3) pair points
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
            for (int si = -1; si <= 1; si += 2) {
                for (int sj = -1; sj <= 1; sj += 2) {
                    x[i] = center[i] + si * lambda3 * half[i];
                    x[j] = center[j] + sj * lambda3 * half[j];
                    sum4 += sample(x);
                }
            }
            x[i] = center[i];
            x[j] = center[j];
        }
    }

    VecN<N> sum5 = VecN<N>::Zero();  // corner points
    const int corners = 1 << d;
    for (int m = 0; m < corners; ++m) {
        for (int i = 0; i < d; ++i)
            x[i] = center[i] + ((m >> i) & 1 ? lambda5 : -lambda5) * half[i];
        sum5 += sample(x);
    }
    for (int i = 0; i < d; ++i) x[i] = center[i];

    // w1..w4 (and e1..e4) apply per point scaled by the full volume; the
    // corner weight w5 is scaled by the product of half-widths instead.
    const double scale = volume / std::pow(2.0, d);
    VecN<N> value7 =
        volume * (w1 * f0 + w2 * sum2 + w3 * sum3 + w4 * sum4) + scale * w5 * sum5;
    VecN<N> value5 = volume * (e1 * f0 + e2 * sum2 + e3 * sum3 + e4 * sum4);

    region.value = value7;
    region.error = (value7 - value5).cwiseAbs();
    region.split_dim = split_dim;
}

template <int N>
bool within_tolerance(const VecN<N>& total, const VecN<N>& error, const QuadOptions& opts) {
    for (int c = 0; c < N; ++c) {
        const double bound = std::max(opts.abs_tol, opts.rel_tol * std::abs(total[c]));
        if (error[c] > bound) return false;
    }
    return true;
}

}  // namespace detail

/// Adaptive quadrature of a vector-valued integrand over an axis-aligned
/// box with 1 <= dim <= 4.  One dimension uses Gauss-Kronrod 7-15; higher
/// dimensions use the Genz-Malik degree-7 rule with largest-error-first
/// subdivision.  Fully deterministic: identical inputs give bit-identical
/// results.
template <int N, class F>
QuadResult<N> quad_adaptive_vec(F&& f, const Box& box, const QuadOptions& opts = {}) {
    const int d = box.dim();
    if (d < 1 || d > 4) throw ValidationError("quad_adaptive: dimension must be 1..4");
    for (int i = 0; i < d; ++i)
        if (!(box.lo[i] < box.hi[i]))
            throw ValidationError("quad_adaptive: box must have positive extent");
    if (opts.rel_tol <= 0 || opts.abs_tol <= 0)
        throw ValidationError("quad_adaptive: tolerances must be positive");

    long evals = 0;
    std::uint64_t order = 0;

    auto evaluate = [&](detail::Region<N>& region) {
        if (d == 1)
            detail::gk15_evaluate<N>(f, region.lo[0], region.hi[0], region, evals);
        else
            detail::genz_malik_evaluate<N>(f, region.lo, region.hi, region, evals);
        region.priority = region.error.maxCoeff();
        region.order = order++;
    };

    detail::Region<N> root;
    root.lo = box.lo;
    root.hi = box.hi;
    evaluate(root);

    std::priority_queue<detail::Region<N>, std::vector<detail::Region<N>>,
                        detail::RegionCompare<N>>
        heap;
    VecN<N> total = root.value;
    VecN<N> total_error = root.error;
    heap.push(std::move(root));

    QuadResult<N> result;
    while (!detail::within_tolerance<N>(total, total_error, opts)) {
        if (evals >= opts.max_evals || heap.empty()) {
            result.converged = false;
            break;
        }
        detail::Region<N> worst = heap.top();
        heap.pop();
        total -= worst.value;
        total_error -= worst.error;

        const int axis = worst.split_dim;
        const double mid = 0.5 * (worst.lo[axis] + worst.hi[axis]);

        detail::Region<N> left, right;
        left.lo = worst.lo;
        left.hi = worst.hi;
        left.hi[axis] = mid;
        right.lo = worst.lo;
        right.hi = worst.hi;
        right.lo[axis] = mid;

        evaluate(left);
        evaluate(right);
        total += left.value + right.value;
        total_error += left.error + right.error;
        heap.push(std::move(left));
        heap.push(std::move(right));
    }

    result.value = total;
    result.error_estimate = total_error.cwiseMax(0.0);
    result.evaluations = evals;
    return result;
}

/// Scalar-integrand result matching the shape most callers want.
struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long evaluations = 0;
    bool converged = true;
};

/// Adaptive quadrature of a scalar integrand f(x) over a box in R^d, d <= 4.
template <class F>
QuadratureResult quad_adaptive(F&& f, const Box& box, double rel_tol = 1e-9,
                               double abs_tol = 1e-12, long max_evals = 50000000) {
    QuadOptions opts{rel_tol, abs_tol, max_evals};
    auto wrapped = [&](const Eigen::VectorXd& x) -> VecN<1> {
        VecN<1> v;
        v[0] = f(x);
        return v;
    };
    QuadResult<1> r = quad_adaptive_vec<1>(wrapped, box, opts);
    return {r.value[0], r.error_estimate[0], r.evaluations, r.converged};
}

/// 1-D convenience overload taking f(double).
template <class F>
QuadratureResult quad_interval(F&& f, double a, double b, double rel_tol = 1e-9,
                               double abs_tol = 1e-12, long max_evals = 50000000) {
    return quad_adaptive([&](const Eigen::VectorXd& x) { return f(x[0]); },
                         Box::interval(a, b), rel_tol, abs_tol, max_evals);
}

}  // namespace fermidet::numerics
