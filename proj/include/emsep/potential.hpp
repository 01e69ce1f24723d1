#pragma once

// Separable electromagnetic potentials: the magnetic family built from a
// moving frame, the electrostatic family (vanishing magnetic field) and the
// generalized Coulomb potential.

#include <array>
#include <complex>
#include <optional>
#include <string_view>

#include "emsep/frame.hpp"
#include "emsep/profile.hpp"

namespace emsep {

enum class PotentialKind { magnetic, electrostatic, coulomb };

std::string_view to_string(PotentialKind kind);
PotentialKind parse_potential_kind(std::string_view name);

/// Magnetic-kind construction either insists on a non-vanishing field
/// somewhere on the probe grid or accepts the B = 0 limit (free particle).
enum class FieldRequirement { nonvanishing, allow_vanishing };

class PotentialSpec {
public:
    static PotentialSpec magnetic(CoordinateSystem system, FrameSpec frame, std::array<AxisProfile, 3> f0,
                                  TimeProfile t0_tilde, double e_charge = 1.0,
                                  FieldRequirement req = FieldRequirement::nonvanishing);

    /// Requires constant rotation profiles.
    static PotentialSpec electrostatic(CoordinateSystem system, FrameSpec frame, std::array<AxisProfile, 3> f0,
                                       TimeProfile t0_tilde, double e_charge = 1.0);

    /// x = T(t) z with T built from the given angle profiles; system must be
    /// spherical, prolate_spheroidal_ii_plus/minus, parabolic or conical.
    static PotentialSpec coulomb(CoordinateSystem system, TimeProfile alpha, TimeProfile beta, TimeProfile gamma,
                                 double q, double e_charge = 1.0, TimeWindow probe = {});

    PotentialKind kind() const { return kind_; }
    const CoordinateSystem& system() const { return system_; }
    const FrameSpec& frame() const { return frame_; }
    double e_charge() const { return e_; }
    const std::array<AxisProfile, 3>& f0() const { return f0_; }
    const TimeProfile& t0_tilde() const { return t0_; }
    double q() const { return q_; }

private:
    PotentialSpec(PotentialKind kind, CoordinateSystem system, FrameSpec frame, std::array<AxisProfile, 3> f0,
                  TimeProfile t0, double e, double q);

    PotentialKind kind_;
    CoordinateSystem system_;
    FrameSpec frame_;
    std::array<AxisProfile, 3> f0_;
    TimeProfile t0_;
    double e_;
    double q_;
};

bool is_coulomb_system(SystemId id);

/// The F_{a0} terms that turn the magnetic family into the generalized
/// Coulomb potential for the given system (unit-scale frame).
std::array<AxisProfile, 3> coulomb_axis_terms(const CoordinateSystem& system, double q);

struct PotentialValue {
    double A0;
    Vec3 A;
    /// omega(t, x) when the evaluation needed it.
    std::optional<Vec3> omega;
};

/// Timelike and spacelike components at (t, x); omega_hint seeds the inversion.
PotentialValue vector_potential(const PotentialSpec& spec, double t, const Vec3& x, const Vec3& omega_hint);

/// Spacelike part only (needs no inversion).
Vec3 spacelike_potential(const PotentialSpec& spec, double t, const Vec3& x);

/// div A, independent of x.
double divergence_A(const PotentialSpec& spec, double t);

/// curl A, independent of x.
Vec3 magnetic_field(const PotentialSpec& spec, double t, const Vec3& x);

/// Real phase S of the electrostatic modulation factor Q = exp(iS).
/// Throws UsageError for other kinds.
double phase_factor_S(const PotentialSpec& spec, double t, const Vec3& x);

/// The phase formula evaluated for any frame (used for negative controls).
double phase_formula(const FrameSpec& frame, double t, const Vec3& x);

/// T0 = T0_tilde - (i/2) sum_i h_i'/h_i.
std::complex<double> t0_profile(const PotentialSpec& spec, double t);

}  // namespace emsep
