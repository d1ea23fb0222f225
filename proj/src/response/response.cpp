#include "fermidet/response/response.hpp"

#include "fermidet/numerics/quadrature.hpp"

#include <cmath>

namespace fermidet::response {

using detector::DetectorSpec;
using detector::SmearingProfile;
using detector::SwitchingProfile;
using fermi::FermiExpansion;
using numerics::Box;
using numerics::QuadOptions;
using numerics::QuadResult;

FlatChartMap FlatChartMap::inertial(double v) {
    if (std::abs(v) >= 1.0) throw ValidationError("FlatChartMap: |v| must be < 1");
    FlatChartMap m;
    const double gamma = 1.0 / std::sqrt(1.0 - v * v);
    m.u_ = Vec4(gamma, gamma * v, 0, 0);
    m.legs_[0] = Vec4(gamma * v, gamma, 0, 0);
    return m;
}

FlatChartMap FlatChartMap::accelerated(double accel) {
    if (!(accel > 0)) throw ValidationError("FlatChartMap: require a > 0");
    FlatChartMap m;
    m.accel_ = accel;
    return m;
}

Vec4 FlatChartMap::event(double tau, const Vec3& xbar) const {
    if (is_linear()) {
        Vec4 x = u_ * tau;
        for (int i = 0; i < 3; ++i) x += xbar[i] * legs_[i];
        return x;
    }
    const double a = accel_;
    const double rho = 1.0 / a + xbar[0];
    return Vec4(rho * std::sinh(a * tau), rho * std::cosh(a * tau) - 1.0 / a, xbar[1], xbar[2]);
}

namespace {

// ---------------------------------------------------------------------------
// sphere rule: Gauss-Legendre in cos(theta) x uniform midpoints in phi,
// polar axis along x (the symmetry axis of every supported trajectory)

struct SphereRule {
    std::vector<double> ct, wt;
    std::vector<double> phi;
    double wphi = 0.0;
};

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
}

SphereRule make_sphere_rule(int n_theta, int n_phi) {
    if (n_theta < 2 || n_phi < 1) throw ValidationError("response: need n_theta >= 2, n_phi >= 1");
    SphereRule rule;
    gauss_legendre(n_theta, rule.ct, rule.wt);
    rule.phi.resize(n_phi);
    for (int j = 0; j < n_phi; ++j) rule.phi[j] = 2.0 * M_PI * (j + 0.5) / n_phi;
    rule.wphi = 2.0 * M_PI / n_phi;
    return rule;
}

// ---------------------------------------------------------------------------
// polynomial measures m(x) = c + b.x + x^T Q x (Q symmetric)

struct PolyMeasure {
    double c = 1.0;
    Vec3 b = Vec3::Zero();
    Mat3 Q = Mat3::Zero();
};

PolyMeasure noncov_measure(const FermiExpansion& exp) {
    PolyMeasure m;
    m.Q = -exp.spatial_trace() / 6.0;
    return m;
}

PolyMeasure delta_measure(const FermiExpansion& exp) {
    PolyMeasure m;
    m.c = 0.0;
    m.b = exp.accel;
    m.Q = 0.5 * exp.r_titj;
    return m;
}

double eval_measure(const PolyMeasure& m, const Vec3& x) {
    return m.c + m.b.dot(x) + x.dot(m.Q * x);
}

// 1-D Gaussian moment transforms: int x^n N(x; d, sigma) e^{-i q x} dx.
struct GaussianMoments {
    Complex m0, m1, m2;
};

GaussianMoments gaussian_moments(double d, double sigma, double q) {
    const double s2 = sigma * sigma;
    const Complex g0 = std::exp(-0.5 * s2 * q * q) * std::exp(Complex(0.0, -q * d));
    const Complex shift(d, -s2 * q);
    return {g0, shift * g0, (s2 + shift * shift) * g0};
}

// Assemble int m(x) f(x) e^{i phase} over all monomials from per-axis
// moment tables: axis1[n] = n-th x1 moment integral (already including the
// tau integral), axis2/axis3 the transverse transforms.
Complex apply_measure(const PolyMeasure& m, const std::array<Complex, 3>& axis1,
                      const GaussianMoments& axis2, const GaussianMoments& axis3) {
    Complex total = m.c * axis1[0] * axis2.m0 * axis3.m0;
    total += m.b[0] * axis1[1] * axis2.m0 * axis3.m0;
    total += m.b[1] * axis1[0] * axis2.m1 * axis3.m0;
    total += m.b[2] * axis1[0] * axis2.m0 * axis3.m1;
    total += m.Q(0, 0) * axis1[2] * axis2.m0 * axis3.m0;
    total += m.Q(1, 1) * axis1[0] * axis2.m2 * axis3.m0;
    total += m.Q(2, 2) * axis1[0] * axis2.m0 * axis3.m2;
    total += 2.0 * m.Q(0, 1) * axis1[1] * axis2.m1 * axis3.m0;
    total += 2.0 * m.Q(0, 2) * axis1[1] * axis2.m0 * axis3.m1;
    total += 2.0 * m.Q(1, 2) * axis1[0] * axis2.m1 * axis3.m1;
    return total;
}

double apply_measure_bound(const PolyMeasure& m, double axis1_err,
                           const GaussianMoments& axis2, const GaussianMoments& axis3) {
    const double a2 = std::max({std::abs(axis2.m0), std::abs(axis2.m1), std::abs(axis2.m2)});
    const double a3 = std::max({std::abs(axis3.m0), std::abs(axis3.m1), std::abs(axis3.m2)});
    double coeff = std::abs(m.c) + m.b.cwiseAbs().sum() + 2.0 * m.Q.cwiseAbs().sum();
    return coeff * axis1_err * a2 * a3;
}

// ---------------------------------------------------------------------------
// amplitude engine

struct AmpPair {
    Complex a_nc{0.0, 0.0};
    Complex delta{0.0, 0.0};
    double err_nc = 0.0;
    double err_delta = 0.0;
};

class AmplitudeEngine {
public:
    AmplitudeEngine(const DetectorSpec& det, const FermiExpansion& exp, const FlatChartMap& map,
                    const FieldSpec& field, const ResponseSettings& settings)
        : det_(det),
          map_(map),
          field_(field),
          m_nc_(noncov_measure(exp)),
          m_delta_(delta_measure(exp)) {
        qopts_.rel_tol = settings.amp_rel_tol;
        qopts_.abs_tol = settings.amp_abs_tol;
        qopts_.max_evals = settings.amp_max_evals;
    }

    AmpPair pair(const Vec3& k) const;

    long evaluations() const { return evals_; }

private:
    AmpPair pair_pointlike(const Vec3& k, double omega) const;
    AmpPair pair_gaussian(const Vec3& k, double omega) const;
    AmpPair pair_generic(const Vec3& k, double omega) const;

    Complex prefactor(double omega) const {
        const double norm = 1.0 / std::sqrt(std::pow(2.0 * M_PI, 3) * 2.0 * omega);
        return Complex(0.0, -det_.coupling * norm);
    }

    // int chi(tau) e^{i nu tau} dtau over the switching support
    QuadResult<2> switching_transform(double nu) const;

    const DetectorSpec& det_;
    const FlatChartMap& map_;
    const FieldSpec& field_;
    PolyMeasure m_nc_, m_delta_;
    QuadOptions qopts_;
    mutable long evals_ = 0;
};

QuadResult<2> AmplitudeEngine::switching_transform(double nu) const {
    const auto& chi = det_.switching;
    auto f = [&](const Eigen::VectorXd& q) {
        const double tau = q[0];
        const double c = chi(tau);
        VecN<2> v;
        v[0] = c * std::cos(nu * tau);
        v[1] = c * std::sin(nu * tau);
        return v;
    };
    return numerics::quad_adaptive_vec<2>(f, Box::interval(chi.support_lo(), chi.support_hi()),
                                          qopts_);
}

AmpPair AmplitudeEngine::pair_pointlike(const Vec3& k, double omega) const {
    // A = pref * int chi(tau) e^{i(Omega tau + w t(z) - k.z)} dtau; both
    // measures equal 1 on the worldline, so the prescriptions coincide.
    const auto& chi = det_.switching;
    auto f = [&](const Eigen::VectorXd& q) {
        const double tau = q[0];
        const double c = chi(tau);
        const Vec4 z = map_.event(tau, Vec3::Zero());
        const double phase =
            det_.gap * tau + omega * z[0] - k[0] * z[1] - k[1] * z[2] - k[2] * z[3];
        VecN<2> v;
        v[0] = c * std::cos(phase);
        v[1] = c * std::sin(phase);
        return v;
    };
    const auto q = numerics::quad_adaptive_vec<2>(
        f, Box::interval(chi.support_lo(), chi.support_hi()), qopts_);
    evals_ += q.evaluations;

    AmpPair out;
    out.a_nc = prefactor(omega) * Complex(q.value[0], q.value[1]);
    out.err_nc = std::abs(prefactor(omega)) * q.error_estimate.norm();
    return out;
}

AmpPair AmplitudeEngine::pair_gaussian(const Vec3& k, double omega) const {
    const double sigma = det_.smearing.characteristic_size();
    const Vec3 center = det_.smearing.center();
    const Complex pref = prefactor(omega);

    AmpPair out;
    if (map_.is_linear()) {
        // Phase: (Omega + w u^t - k.u) tau + xbar^i (w e_i^t - k.e_i);
        // everything separates into 1-D transforms.
        const Vec4& u = map_.u();
        const double nu = det_.gap + omega * u[0] - k[0] * u[1] - k[1] * u[2] - k[2] * u[3];
        std::array<double, 3> q;  // e^{-i q x} convention
        for (int i = 0; i < 3; ++i) {
            const Vec4& e = map_.legs()[i];
            q[i] = k[0] * e[1] + k[1] * e[2] + k[2] * e[3] - omega * e[0];
        }
        const auto tq = switching_transform(nu);
        evals_ += tq.evaluations;
        const Complex tval(tq.value[0], tq.value[1]);

        const GaussianMoments g1 = gaussian_moments(center[0], sigma, q[0]);
        const GaussianMoments g2 = gaussian_moments(center[1], sigma, q[1]);
        const GaussianMoments g3 = gaussian_moments(center[2], sigma, q[2]);
        const std::array<Complex, 3> axis1{tval * g1.m0, tval * g1.m1, tval * g1.m2};

        out.a_nc = pref * apply_measure(m_nc_, axis1, g2, g3);
        out.delta = pref * apply_measure(m_delta_, axis1, g2, g3);
        const double terr = tq.error_estimate.norm();
        const double scale1 =
            terr * std::max({std::abs(g1.m0), std::abs(g1.m1), std::abs(g1.m2)});
        out.err_nc = std::abs(pref) * apply_measure_bound(m_nc_, scale1, g2, g3);
        out.err_delta = std::abs(pref) * apply_measure_bound(m_delta_, scale1, g2, g3);
        return out;
    }

    // Accelerated: 2-D quadrature in (tau, x1) for the x1 moments 0..2,
    // analytic transverse transforms.
    const double a = map_.accel();
    const auto& chi = det_.switching;
    const double cut = SmearingProfile::gaussian_cut * sigma;
    Eigen::VectorXd lo(2), hi(2);
    lo << chi.support_lo(), center[0] - cut;
    hi << chi.support_hi(), center[0] + cut;
    const double s2 = sigma * sigma;
    const double fnorm = 1.0 / std::sqrt(2.0 * M_PI * s2);

    auto f = [&](const Eigen::VectorXd& p) {
        const double tau = p[0], x1 = p[1];
        const double c = chi(tau);
        const double f1 = fnorm * std::exp(-0.5 * (x1 - center[0]) * (x1 - center[0]) / s2);
        const double rho = 1.0 / a + x1;
        const double t = rho * std::sinh(a * tau);
        const double x = rho * std::cosh(a * tau) - 1.0 / a;
        const double phase = det_.gap * tau + omega * t - k[0] * x;
        const double w = c * f1;
        const double cs = std::cos(phase), sn = std::sin(phase);
        VecN<6> v;
        v[0] = w * cs;
        v[1] = w * sn;
        v[2] = w * x1 * cs;
        v[3] = w * x1 * sn;
        v[4] = w * x1 * x1 * cs;
        v[5] = w * x1 * x1 * sn;
        return v;
    };
    const auto j = numerics::quad_adaptive_vec<6>(f, Box::cube(lo, hi), qopts_);
    evals_ += j.evaluations;

    const GaussianMoments g2 = gaussian_moments(center[1], sigma, k[1]);
    const GaussianMoments g3 = gaussian_moments(center[2], sigma, k[2]);
    const std::array<Complex, 3> axis1{Complex(j.value[0], j.value[1]),
                                       Complex(j.value[2], j.value[3]),
                                       Complex(j.value[4], j.value[5])};
    out.a_nc = pref * apply_measure(m_nc_, axis1, g2, g3);
    out.delta = pref * apply_measure(m_delta_, axis1, g2, g3);
    const double jerr = j.error_estimate.maxCoeff();
    out.err_nc = std::abs(pref) * apply_measure_bound(m_nc_, jerr, g2, g3);
    out.err_delta = std::abs(pref) * apply_measure_bound(m_delta_, jerr, g2, g3);
    return out;
}

AmpPair AmplitudeEngine::pair_generic(const Vec3& k, double omega) const {
    // Full defining integral; works for any profile, used for hard-sphere
    // smearings and as a cross-check of the reduced paths.
    const auto& chi = det_.switching;
    const double support = det_.smearing.support_radius();
    const Complex pref = prefactor(omega);

    auto phase_at = [&](double tau, const Vec3& xb) {
        const Vec4 ev = map_.event(tau, xb);
        return det_.gap * tau + omega * ev[0] - k[0] * ev[1] - k[1] * ev[2] - k[2] * ev[3];
    };

    AmpPair out;
    if (map_.is_linear()) {
        // tau separates: nu as in the gaussian path.
        const Vec4& u = map_.u();
        const double nu = det_.gap + omega * u[0] - k[0] * u[1] - k[1] * u[2] - k[2] * u[3];
        const auto tq = switching_transform(nu);
        evals_ += tq.evaluations;
        const Complex tval(tq.value[0], tq.value[1]);

        Eigen::VectorXd lo(3), hi(3);
        for (int i = 0; i < 3; ++i) {
            lo[i] = -support;
            hi[i] = support;
        }
        auto f = [&](const Eigen::VectorXd& p) {
            const Vec3 xb(p[0], p[1], p[2]);
            const double fv = det_.smearing(xb);
            VecN<4> v = VecN<4>::Zero();
            if (fv == 0.0) return v;
            // z(0) = 0, so the event at tau = 0 carries the spatial phase alone.
            const double ph = phase_at(0.0, xb);
            const double mnc = eval_measure(m_nc_, xb);
            const double mdl = eval_measure(m_delta_, xb);
            const double cs = std::cos(ph), sn = std::sin(ph);
            v[0] = fv * mnc * cs;
            v[1] = fv * mnc * sn;
            v[2] = fv * mdl * cs;
            v[3] = fv * mdl * sn;
            return v;
        };
        const auto s = numerics::quad_adaptive_vec<4>(f, Box::cube(lo, hi), qopts_);
        evals_ += s.evaluations;
        out.a_nc = pref * tval * Complex(s.value[0], s.value[1]);
        out.delta = pref * tval * Complex(s.value[2], s.value[3]);
        const double terr = tq.error_estimate.norm();
        out.err_nc = std::abs(pref) * (std::abs(tval) * s.error_estimate.head<2>().norm() +
                                       terr * std::abs(Complex(s.value[0], s.value[1])));
        out.err_delta = std::abs(pref) * (std::abs(tval) * s.error_estimate.tail<2>().norm() +
                                          terr * std::abs(Complex(s.value[2], s.value[3])));
        return out;
    }

    Eigen::VectorXd lo(4), hi(4);
    lo << chi.support_lo(), -support, -support, -support;
    hi << chi.support_hi(), support, support, support;
    auto f = [&](const Eigen::VectorXd& p) {
        const double tau = p[0];
        const Vec3 xb(p[1], p[2], p[3]);
        VecN<4> v = VecN<4>::Zero();
        const double c = chi(tau);
        if (c == 0.0) return v;
        const double fv = det_.smearing(xb);
        if (fv == 0.0) return v;
        const double ph = phase_at(tau, xb);
        const double w = c * fv;
        const double cs = std::cos(ph), sn = std::sin(ph);
        const double mnc = eval_measure(m_nc_, xb);
        const double mdl = eval_measure(m_delta_, xb);
        v[0] = w * mnc * cs;
        v[1] = w * mnc * sn;
        v[2] = w * mdl * cs;
        v[3] = w * mdl * sn;
        return v;
    };
    const auto s = numerics::quad_adaptive_vec<4>(f, Box::cube(lo, hi), qopts_);
    evals_ += s.evaluations;
    out.a_nc = pref * Complex(s.value[0], s.value[1]);
    out.delta = pref * Complex(s.value[2], s.value[3]);
    out.err_nc = std::abs(pref) * s.error_estimate.head<2>().norm();
    out.err_delta = std::abs(pref) * s.error_estimate.tail<2>().norm();
    return out;
}

AmpPair AmplitudeEngine::pair(const Vec3& k) const {
    const double omega = std::sqrt(k.squaredNorm() + field_.mass * field_.mass);
    if (!(omega > 0)) throw ValidationError("first_order_amplitude: need omega > 0");
    switch (det_.smearing.kind()) {
        case SmearingProfile::Kind::pointlike:
            return pair_pointlike(k, omega);
        case SmearingProfile::Kind::gaussian:
        case SmearingProfile::Kind::gaussian_shifted:
            return pair_gaussian(k, omega);
        case SmearingProfile::Kind::hard_sphere:
            return pair_generic(k, omega);
    }
    throw ValidationError("first_order_amplitude: unknown smearing kind");
}

// ---------------------------------------------------------------------------

double switching_tail_span(const SwitchingProfile& chi) {
    return (chi.kind() == SwitchingProfile::Kind::gaussian) ? 9.0 / chi.width()
                                                            : 80.0 / chi.width();
}

double auto_k_max(const DetectorSpec& det, const FlatChartMap& map, const FieldSpec& field) {
    const double nu_span = switching_tail_span(det.switching);
    double slow = 1.0;
    if (map.is_linear()) {
        const Vec4& u = map.u();
        slow = u[0] - std::sqrt(u[1] * u[1] + u[2] * u[2] + u[3] * u[3]);
    } else {
        // Redshifted tail of the trajectory weakens the switching cutoff by
        // up to the accumulated boost over the support (capped).
        const double a = map.accel();
        const double half = 0.5 * (det.switching.support_hi() - det.switching.support_lo());
        slow = std::exp(-std::min(a * half, 3.0));
    }
    const double omega_max = (det.gap + nu_span) / std::max(slow, 1e-3);
    const double k2 = omega_max * omega_max - field.mass * field.mass;
    if (!(k2 > 0)) return det.gap + nu_span;  // massive regime already covered
    return std::sqrt(k2);
}

FermiExpansion family_at_center(const ExpansionFamily& family, const DetectorSpec& det) {
    return family(det.switching.center());
}

}  // namespace

Complex first_order_amplitude(const HamiltonianWeight& weight, const FlatChartMap& map,
                              const FieldSpec& field, const Vec3& k,
                              const ResponseSettings& settings) {
    const FermiExpansion exp = family_at_center(weight.expansion, weight.detector);
    AmplitudeEngine engine(weight.detector, exp, map, field, settings);
    const AmpPair p = engine.pair(k);
    return weight.kind == WeightKind::covariant ? p.a_nc + p.delta : p.a_nc;
}

namespace {

struct ProbabilityIntegrals {
    QuadResult<2> radial;
    double propagated_p = 0.0;
    double propagated_delta = 0.0;
    long amp_evaluations = 0;
};

ProbabilityIntegrals integrate_probability(const AmplitudeEngine& engine, const SphereRule& rule,
                                           double k_max, const ResponseSettings& settings) {
    auto angular_sums = [&](double k, VecN<2>& out, double* err_p, double* err_d) {
        out.setZero();
        if (err_p) *err_p = 0.0;
        if (err_d) *err_d = 0.0;
        for (std::size_t it = 0; it < rule.ct.size(); ++it) {
            const double ct = rule.ct[it];
            const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
            for (std::size_t jp = 0; jp < rule.phi.size(); ++jp) {
                const double w = rule.wt[it] * rule.wphi;
                const Vec3 kvec = k * Vec3(ct, st * std::cos(rule.phi[jp]),
                                           st * std::sin(rule.phi[jp]));
                const AmpPair ap = engine.pair(kvec);
                const double a2 = std::norm(ap.a_nc);
                const double dpk = 2.0 * (std::conj(ap.a_nc) * ap.delta).real() +
                                   std::norm(ap.delta);
                out[0] += w * a2;
                out[1] += w * dpk;
                if (err_p)
                    *err_p += w * (2.0 * std::abs(ap.a_nc) * ap.err_nc + ap.err_nc * ap.err_nc);
                if (err_d)
                    *err_d += w * 2.0 *
                              (std::abs(ap.a_nc) * ap.err_delta +
                               std::abs(ap.delta) * ap.err_nc + ap.err_nc * ap.err_delta);
            }
        }
    };

    QuadOptions ropts;
    ropts.rel_tol = settings.radial_rel_tol;
    ropts.abs_tol = settings.radial_abs_tol;
    ropts.max_evals = settings.radial_max_evals;

    auto integrand = [&](const Eigen::VectorXd& q) {
        const double k = q[0];
        VecN<2> sums;
        angular_sums(k, sums, nullptr, nullptr);
        return VecN<2>(k * k * sums[0], k * k * sums[1]);
    };

    ProbabilityIntegrals result;
    result.radial = numerics::quad_adaptive_vec<2>(integrand, Box::interval(0.0, k_max), ropts);

    // Propagate the per-amplitude quadrature errors on a coarse fixed grid.
    const int n_err = 17;
    for (int i = 0; i < n_err; ++i) {
        const double k = k_max * (i + 0.5) / n_err;
        VecN<2> sums;
        double ep = 0.0, ed = 0.0;
        angular_sums(k, sums, &ep, &ed);
        const double wk = k_max / n_err;
        result.propagated_p += wk * k * k * ep;
        result.propagated_delta += wk * k * k * ed;
    }
    result.amp_evaluations = engine.evaluations();
    return result;
}

}  // namespace

ResponseResult excitation_probability(const HamiltonianWeight& weight, const FlatChartMap& map,
                                      const FieldSpec& field, const ResponseSettings& settings) {
    const FermiExpansion exp = family_at_center(weight.expansion, weight.detector);
    AmplitudeEngine engine(weight.detector, exp, map, field, settings);
    const double k_max = settings.k_max > 0 ? settings.k_max
                                            : auto_k_max(weight.detector, map, field);
    const SphereRule rule = make_sphere_rule(settings.n_theta, settings.n_phi);
    const ProbabilityIntegrals integrals =
        integrate_probability(engine, rule, k_max, settings);

    ResponseResult r;
    r.prescription = weight.kind;
    const double p_nc = integrals.radial.value[0];
    const double dp = integrals.radial.value[1];
    r.probability = weight.kind == WeightKind::covariant ? p_nc + dp : p_nc;
    r.integration_error = integrals.radial.error_estimate[0] + integrals.propagated_p;
    if (weight.kind == WeightKind::covariant)
        r.integration_error += integrals.radial.error_estimate[1] + integrals.propagated_delta;
    r.evaluations = integrals.amp_evaluations;
    r.converged = integrals.radial.converged;
    return r;
}

PrescriptionComparison compare_prescriptions(const detector::DetectorSpec& det,
                                             const ExpansionFamily& family,
                                             const FlatChartMap& map, const FieldSpec& field,
                                             const ResponseSettings& settings) {
    // Validity guard mirrors build_weight.
    hamiltonian::build_weight(det, WeightKind::covariant, family);

    const FermiExpansion exp = family_at_center(family, det);
    AmplitudeEngine engine(det, exp, map, field, settings);
    const double k_max = settings.k_max > 0 ? settings.k_max : auto_k_max(det, map, field);
    const SphereRule rule = make_sphere_rule(settings.n_theta, settings.n_phi);
    const ProbabilityIntegrals integrals =
        integrate_probability(engine, rule, k_max, settings);

    PrescriptionComparison c;
    c.p_noncovariant = integrals.radial.value[0];
    c.delta = integrals.radial.value[1];
    c.p_covariant = c.p_noncovariant + c.delta;
    c.probability_error = integrals.radial.error_estimate[0] + integrals.propagated_p;
    c.delta_error = integrals.radial.error_estimate[1] + integrals.propagated_delta;
    c.evaluations = integrals.amp_evaluations;
    c.converged = integrals.radial.converged;
    c.inconclusive = std::abs(c.delta) <= c.delta_error;
    return c;
}

}  // namespace fermidet::response
