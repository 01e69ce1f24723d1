#pragma once

// Time-dependent frames x = T(t) H(t) z(omega) + w(t): an Euler rotation,
// a diagonal scaling and a translation.

#include <array>

#include "emsep/coords.hpp"
#include "emsep/profile.hpp"

namespace emsep {

struct TimeWindow {
    double lo = 0.0;
    double hi = 1.0;
};

struct FrameProfiles {
    TimeProfile alpha = TimeProfile::constant(0.0);
    TimeProfile beta = TimeProfile::constant(0.0);
    TimeProfile gamma = TimeProfile::constant(0.0);
    std::array<TimeProfile, 3> h{TimeProfile::constant(1.0), TimeProfile::constant(1.0),
                                 TimeProfile::constant(1.0)};
    std::array<TimeProfile, 3> w{TimeProfile::constant(0.0), TimeProfile::constant(0.0),
                                 TimeProfile::constant(0.0)};
};

/// Immutable, validated frame. The split class records which scalings may
/// differ: complete (all free), partial (h1 == h2), nonsplit (h1 == h2 == h3).
class FrameSpec {
public:
    /// Validates h_i > 0 and the class constraint on a 64-point probe grid
    /// over `probe`; throws ConfigError.
    FrameSpec(FrameProfiles profiles, SplitClass cls, TimeWindow probe = {});

    static FrameSpec identity(SplitClass cls = SplitClass::nonsplit) { return FrameSpec({}, cls); }

    const FrameProfiles& profiles() const { return p_; }
    SplitClass class_of() const { return cls_; }
    TimeWindow probe_window() const { return probe_; }
    /// True when alpha, beta and gamma are constant profiles.
    bool rotation_is_constant() const;

private:
    FrameProfiles p_;
    SplitClass cls_;
    TimeWindow probe_;
};

/// Everything about the frame at one instant.
struct FrameState {
    Mat3 rotation;
    Mat3 rotation_rate;  // dT/dt T^{-1}
    std::array<Jet, 3> h;
    std::array<Jet, 3> w;

    Vec3 scaling() const { return {h[0].value, h[1].value, h[2].value}; }
    Vec3 scaling_rate() const { return {h[0].d1 / h[0].value, h[1].d1 / h[1].value, h[2].d1 / h[2].value}; }
    Vec3 translation() const { return {w[0].value, w[1].value, w[2].value}; }
    Vec3 velocity() const { return {w[0].d1, w[1].d1, w[2].d1}; }
    Vec3 acceleration() const { return {w[0].d2, w[1].d2, w[2].d2}; }
};

FrameState frame_state(const FrameSpec& frame, double t);

Mat3 rotation_matrix(const FrameSpec& frame, double t);

/// The three rotation expressions whose simultaneous vanishing means a
/// vanishing magnetic field:
///   a' + b' cos g,  b' cos a sin g - g' sin a,  b' sin a sin g + g' cos a.
std::array<double, 3> rotation_expressions(const FrameSpec& frame, double t);

/// dT/dt T^{-1}, assembled from rotation_expressions().
Mat3 rotation_rate(const FrameSpec& frame, double t);

/// M = dT/dt T^{-1} + T (dH/dt) H^{-1} T^{-1}.
Mat3 m_matrix(const FrameSpec& frame, double t);

/// Whether a frame of class `frame_class` may be used with a system of class `system_class`.
bool compatible(SplitClass frame_class, SplitClass system_class);

/// x = T H z(omega) + w. Throws ConfigError on a class mismatch.
Vec3 embed(const CoordinateSystem& system, const FrameSpec& frame, double t, const Vec3& omega);

/// Rows are grad_x omega_i at the embedded point: rows of (T H J)^{-1}.
Mat3 omega_gradients(const CoordinateSystem& system, const FrameSpec& frame, double t, const Vec3& omega);

/// omega(t, x) by Newton inversion seeded with `hint`.
Vec3 omega_at(const CoordinateSystem& system, const FrameSpec& frame, double t, const Vec3& x,
              const Vec3& hint);

}  // namespace emsep
