#pragma once

// Staeckel matrices F_{ij}(omega_i), metric coefficients R_i^2 and the time
// functions T_a(t) of a frame.

#include <array>

#include "emsep/frame.hpp"

namespace emsep {

/// Row `axis` (1..3) of the Staeckel matrix; depends on omega_axis only.
std::array<double, 3> stackel_row(const CoordinateSystem& system, int axis, double omega_axis);

/// Entry (i, j) = F_{ij}(omega_i).
Mat3 stackel_values(const CoordinateSystem& system, const Vec3& omega);

/// (T1, T2, T3) at time t:
///   complete split: T_i = h_i^-2; partial: (h1^-2, 0, h3^-2); non-split: (h1^-2, 0, 0).
std::array<double, 3> t_functions(const CoordinateSystem& system, const FrameSpec& frame, double t);

/// Squared metric coefficients R_i^2 = |d x / d omega_i|^2 from closed forms.
Vec3 metric_r_squared(const CoordinateSystem& system, const FrameSpec& frame, double t, const Vec3& omega);

/// R_i^2 for the unit static frame.
Vec3 unit_metric_r_squared(const CoordinateSystem& system, const Vec3& omega);

}  // namespace emsep
