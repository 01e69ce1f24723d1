#include "emsep/potential.hpp"

#include <cmath>

#include "emsep/errors.hpp"
#include "emsep/stackel.hpp"

namespace emsep {

namespace {

constexpr int kProbePoints = 64;

/// Magnetic case: e A = (M (x - w) + w') / 2.
Vec3 e_vector_potential(const FrameState& s, const Vec3& x) {
    const Mat3 M = s.rotation_rate + s.rotation * s.scaling_rate().asDiagonal() * s.rotation.transpose();
    return 0.5 * (M * (x - s.translation()) + s.velocity());
}

/// Coulomb case: e A = S x with S skew, entries s1, s2, s3.
Mat3 coulomb_skew(const FrameSpec& frame, double t) { return 0.5 * rotation_rate(frame, t); }

double axis_terms(const PotentialSpec& spec, double t, const Vec3& omega) {
    double sum = 0.0;
    bool any = false;
    for (const auto& f : spec.f0()) any = any || !f.is_zero();
    if (!any) return 0.0;
    const Vec3 r2 = metric_r_squared(spec.system(), spec.frame(), t, omega);
    for (int i = 0; i < 3; ++i) {
        const auto& f = spec.f0()[static_cast<std::size_t>(i)];
        if (!f.is_zero()) sum += f(omega[i]) / r2[i];
    }
    return sum;
}

bool needs_omega(const PotentialSpec& spec) {
    for (const auto& f : spec.f0()) {
        if (!f.is_zero()) return true;
    }
    return false;
}

}  // namespace

std::string_view to_string(PotentialKind kind) {
    switch (kind) {
        case PotentialKind::magnetic: return "magnetic";
        case PotentialKind::electrostatic: return "electrostatic";
        case PotentialKind::coulomb: return "coulomb";
    }
    return "unknown";
}

PotentialKind parse_potential_kind(std::string_view name) {
    if (name == "magnetic") return PotentialKind::magnetic;
    if (name == "electrostatic") return PotentialKind::electrostatic;
    if (name == "coulomb") return PotentialKind::coulomb;
    throw ConfigError("unknown potential kind '" + std::string(name) + "'");
}

PotentialSpec::PotentialSpec(PotentialKind kind, CoordinateSystem system, FrameSpec frame,
                             std::array<AxisProfile, 3> f0, TimeProfile t0, double e, double q)
    : kind_(kind), system_(std::move(system)), frame_(std::move(frame)), f0_(std::move(f0)), t0_(std::move(t0)),
      e_(e), q_(q) {
    if (!(std::isfinite(e_) && e_ != 0.0)) throw ConfigError("charge e must be finite and non-zero");
    if (!compatible(frame_.class_of(), system_.split_class())) {
        throw ConfigError("frame class is not admissible for system " + std::string(system_.name()));
    }
}

PotentialSpec PotentialSpec::magnetic(CoordinateSystem system, FrameSpec frame, std::array<AxisProfile, 3> f0,
                                      TimeProfile t0_tilde, double e_charge, FieldRequirement req) {
    if (req == FieldRequirement::nonvanishing) {
        const TimeWindow win = frame.probe_window();
        bool nonzero = false;
        for (int n = 0; n < kProbePoints && !nonzero; ++n) {
            const double t = win.lo + (win.hi - win.lo) * n / (kProbePoints - 1);
            for (double v : rotation_expressions(frame, t)) nonzero = nonzero || std::abs(v) > 1e-12;
        }
        if (!nonzero) {
            throw ConfigError(
                "magnetic potential requires a rotating frame (all rotation expressions vanish on the probe grid)");
        }
    }
    return PotentialSpec(PotentialKind::magnetic, std::move(system), std::move(frame), std::move(f0),
                         std::move(t0_tilde), e_charge, 0.0);
}

PotentialSpec PotentialSpec::electrostatic(CoordinateSystem system, FrameSpec frame, std::array<AxisProfile, 3> f0,
                                           TimeProfile t0_tilde, double e_charge) {
    if (!frame.rotation_is_constant()) {
        throw ConfigError("electrostatic potential requires constant rotation angles");
    }
    return PotentialSpec(PotentialKind::electrostatic, std::move(system), std::move(frame), std::move(f0),
                         std::move(t0_tilde), e_charge, 0.0);
}

PotentialSpec PotentialSpec::coulomb(CoordinateSystem system, TimeProfile alpha, TimeProfile beta,
                                     TimeProfile gamma, double q, double e_charge, TimeWindow probe) {
    if (!is_coulomb_system(system.id())) {
        throw ConfigError("the Coulomb potential separates only in spherical, prolate spheroidal II, parabolic "
                          "and conical coordinates (got " + std::string(system.name()) + ")");
    }
    if (!std::isfinite(q)) throw ConfigError("Coulomb charge q must be finite");
    FrameProfiles p;
    p.alpha = std::move(alpha);
    p.beta = std::move(beta);
    p.gamma = std::move(gamma);
    FrameSpec frame(std::move(p), SplitClass::nonsplit, probe);
    auto terms = coulomb_axis_terms(system, q);
    return PotentialSpec(PotentialKind::coulomb, std::move(system), std::move(frame), std::move(terms),
                         TimeProfile::constant(0.0), e_charge, q);
}

bool is_coulomb_system(SystemId id) {
    return id == SystemId::spherical || id == SystemId::prolate_spheroidal_ii_plus ||
           id == SystemId::prolate_spheroidal_ii_minus || id == SystemId::parabolic || id == SystemId::conical;
}

std::array<AxisProfile, 3> coulomb_axis_terms(const CoordinateSystem& system, double q) {
    const double a = system.a();
    switch (system.id()) {
        case SystemId::spherical:
        case SystemId::conical:
            return {AxisProfile("coulomb:q/w^3", [q](double w) { return q / (w * w * w); }), AxisProfile::zero(),
                    AxisProfile::zero()};
        case SystemId::prolate_spheroidal_ii_plus:
        case SystemId::prolate_spheroidal_ii_minus: {
            // z3 shifted by +a pairs with -q a sinh/cosh^3 on axis 2, and vice versa.
            const double sign = system.id() == SystemId::prolate_spheroidal_ii_plus ? -1.0 : 1.0;
            return {AxisProfile("coulomb:qa cosh/sinh^3",
                                [q, a](double w) { return q * a * std::cosh(w) / std::pow(std::sinh(w), 3); }),
                    AxisProfile("coulomb:-+qa sinh/cosh^3",
                                [q, a, sign](double w) {
                                    return sign * q * a * std::sinh(w) / std::pow(std::cosh(w), 3);
                                }),
                    AxisProfile::zero()};
        }
        case SystemId::parabolic:
            return {AxisProfile("coulomb:2q e^2w", [q](double w) { return 2.0 * q * std::exp(2.0 * w); }),
                    AxisProfile::zero(), AxisProfile::zero()};
        default:
            throw ConfigError("no Coulomb separation in system " + std::string(system.name()));
    }
}

Vec3 spacelike_potential(const PotentialSpec& spec, double t, const Vec3& x) {
    switch (spec.kind()) {
        case PotentialKind::magnetic: return e_vector_potential(frame_state(spec.frame(), t), x) / spec.e_charge();
        case PotentialKind::electrostatic: return Vec3::Zero();
        case PotentialKind::coulomb: return coulomb_skew(spec.frame(), t) * x / spec.e_charge();
    }
    return Vec3::Zero();
}

PotentialValue vector_potential(const PotentialSpec& spec, double t, const Vec3& x, const Vec3& omega_hint) {
    const double e = spec.e_charge();
    if (spec.kind() == PotentialKind::coulomb) {
        const Vec3 eA = coulomb_skew(spec.frame(), t) * x;
        const double r = x.norm();
        if (!(r > 0.0)) throw DomainError(0, r, "Coulomb potential is singular at the origin");
        return {(spec.q() / r - eA.squaredNorm()) / e, eA / e, std::nullopt};
    }

    const FrameState s = frame_state(spec.frame(), t);
    std::optional<Vec3> omega;
    double spatial = 0.0;
    if (needs_omega(spec)) {
        omega = omega_at(spec.system(), spec.frame(), t, x, omega_hint);
        spatial = axis_terms(spec, t, *omega);
    }
    const double t0 = spec.t0_tilde()(t);

    if (spec.kind() == PotentialKind::magnetic) {
        const Vec3 eA = e_vector_potential(s, x);
        return {(spatial + t0 - eA.squaredNorm()) / e, eA / e, omega};
    }

    // Electrostatic: work in the constant rotated axes y = T^T x.
    const Mat3 Tt = s.rotation.transpose();
    const Vec3 y = Tt * x;
    const Vec3 v = Tt * s.translation();
    const Vec3 vd = Tt * s.velocity();
    const Vec3 vdd = Tt * s.acceleration();
    double quad = 0.0;
    for (int i = 0; i < 3; ++i) {
        const Jet& h = s.h[static_cast<std::size_t>(i)];
        const double g1 = h.d1 / h.value;
        const double g2 = h.d2 / h.value;
        const double lin = vd[i] - g1 * v[i];
        quad += g2 * y[i] * y[i] + 2.0 * (vdd[i] - g2 * v[i]) * y[i] + lin * lin;
    }
    return {(spatial + t0 - 0.25 * quad) / e, Vec3::Zero(), omega};
}

double divergence_A(const PotentialSpec& spec, double t) {
    if (spec.kind() != PotentialKind::magnetic) return 0.0;
    return frame_state(spec.frame(), t).scaling_rate().sum() / (2.0 * spec.e_charge());
}

Vec3 magnetic_field(const PotentialSpec& spec, double t, const Vec3& /*x*/) {
    switch (spec.kind()) {
        case PotentialKind::electrostatic: return Vec3::Zero();
        case PotentialKind::magnetic: return axial(rotation_rate(spec.frame(), t)) / spec.e_charge();
        case PotentialKind::coulomb: return 2.0 * axial(coulomb_skew(spec.frame(), t)) / spec.e_charge();
    }
    return Vec3::Zero();
}

double phase_formula(const FrameSpec& frame, double t, const Vec3& x) {
    const FrameState s = frame_state(frame, t);
    const Mat3 Tt = s.rotation.transpose();
    const Vec3 y = Tt * x;
    const Vec3 v = Tt * s.translation();
    const Vec3 vd = Tt * s.velocity();
    const Vec3 g = s.scaling_rate();
    double S = 0.0;
    for (int i = 0; i < 3; ++i) {
        S += g[i] * (0.5 * y[i] * y[i] - v[i] * y[i]) + vd[i] * y[i];
    }
    return 0.5 * S;
}

double phase_factor_S(const PotentialSpec& spec, double t, const Vec3& x) {
    if (spec.kind() != PotentialKind::electrostatic) {
        throw UsageError("phase factor S is defined for the electrostatic kind only");
    }
    return phase_formula(spec.frame(), t, x);
}

std::complex<double> t0_profile(const PotentialSpec& spec, double t) {
    const double im = -0.5 * frame_state(spec.frame(), t).scaling_rate().sum();
    return {spec.t0_tilde()(t), im};
}

}  // namespace emsep
