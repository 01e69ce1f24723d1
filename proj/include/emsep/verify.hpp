#pragma once

// Finite-difference residual engines for the time-dependent and stationary
// Schroedinger equations and the Hamilton-Jacobi equation, plus audits of
// the geometric identities behind separation.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "emsep/separate.hpp"

namespace emsep {

struct Steps {
    double ht = 1e-3;
    double hx = 1e-3;
};

using ComplexField = std::function<cplx(double t, const Vec3& x)>;
using RealField = std::function<double(double t, const Vec3& x)>;

/// Residual with the largest individual term magnitude as its scale.
struct Residual {
    cplx value;
    double scale;
    double relative() const { return scale > 0.0 ? std::abs(value) / scale : std::abs(value); }
};

/// i psi_t - e A0 psi + lap psi + 2ie A.grad psi + ie (div A) psi - e^2 A.A psi,
/// fourth-order central differences for psi, analytic A.
/// `omega_hint` seeds the inversion for A0.
Residual se_residual(const ComplexField& psi, const PotentialSpec& spec, double t, const Vec3& x,
                     const Vec3& omega_hint, Steps steps = {});

/// (p.p + e A0 + E) psi with p = i grad - e A, time frozen; div A by
/// differences of `A`.
Residual stationary_residual(const std::function<cplx(const Vec3&)>& psi, const std::function<double(const Vec3&)>& A0,
                             const std::function<Vec3(const Vec3&)>& A, double e_charge, double E, const Vec3& x,
                             double hx = 1e-3);

/// u_t + e A0 + |grad u + e A|^2.
Residual hj_residual(const RealField& u, const PotentialSpec& spec, double t, const Vec3& x, const Vec3& omega_hint,
                     Steps steps = {});

struct SamplePoint {
    double t;
    Vec3 omega;
};

/// Deterministic samples inside the given ranges, kept `margin` (fraction of
/// each width) away from the ends so stencils stay inside.
std::vector<SamplePoint> sample_points(const Interval& t_range, const std::array<Interval, 3>& omega_ranges,
                                       std::size_t n, std::uint64_t seed, double margin = 0.05);

struct PointRecord {
    std::size_t index = 0;
    double t = 0.0;
    Vec3 x = Vec3::Zero();
    Vec3 omega = Vec3::Zero();
    double residual = 0.0;
    double scale = 0.0;
    double relative = 0.0;
    /// Non-empty when the stencil could not be evaluated.
    std::string error;
};

struct ResidualReport {
    std::string equation;
    Steps steps;
    std::vector<PointRecord> points;

    double max_relative() const;
    double mean_relative() const;
    double max_residual() const;
    std::size_t failures() const;
};

enum class Execution { serial, parallel };

/// Local step scaling: h * min(1, min_i R_i).
Steps local_steps(const PotentialSpec& spec, const SamplePoint& p, Steps base);

ResidualReport se_sweep(const SeparatedSolution& solution, const std::vector<SamplePoint>& points, Steps steps = {},
                        Execution exec = Execution::parallel);

ResidualReport hj_sweep(const HJAction& action, const std::vector<SamplePoint>& points, Steps steps = {},
                        Execution exec = Execution::parallel);

struct GeometryRecord {
    std::size_t index = 0;
    Vec3 omega = Vec3::Zero();
    double orthogonality = 0.0;
    double stackel = 0.0;
    double harmonicity = 0.0;
    double metric = 0.0;
    std::string error;
};

struct GeometryReport {
    std::string system;
    double t = 0.0;
    std::vector<GeometryRecord> points;

    double max_orthogonality() const;
    double max_stackel() const;
    double max_harmonicity() const;
    double max_metric() const;
    std::size_t failures() const;
};

/// Laplacian of each component of f at x: second-order central differences
/// on 13 halved steps from h0, combined by Ridders-Richardson extrapolation.
/// The entry with the smallest estimated error wins; that estimate is
/// stored in *error when given.
Vec3 ridders_laplacian(const std::function<Vec3(const Vec3&)>& f, const Vec3& x, double h0, double* error = nullptr);

/// Replaces the Staeckel matrix in the audit (mutation testing).
using StackelOverride = std::function<Mat3(const CoordinateSystem&, const Vec3&)>;

/// (i) gradient orthogonality, cosine of the angle between grad omega_i;
/// (ii) sum_i F_{ia} |grad omega_i|^2 = T_a relative to the largest term;
/// (iii) |lap omega_a| l^2 from ridders_laplacian of the inverse map with
///       h0 = l / 20, l = min_i R_i;
/// (iv) closed-form R_i^2 against Jacobian column norms, relative.
GeometryReport geometry_audit(const CoordinateSystem& system, const FrameSpec& frame, double t, std::size_t n,
                              std::uint64_t seed, Execution exec = Execution::parallel,
                              const StackelOverride& stackel = nullptr);

/// Same audit at explicit samples (t per sample).
GeometryReport geometry_audit_at(const CoordinateSystem& system, const FrameSpec& frame,
                                 const std::vector<SamplePoint>& points, Execution exec = Execution::parallel,
                                 const StackelOverride& stackel = nullptr);

void write_csv(std::ostream& os, const ResidualReport& report);
void write_csv(std::ostream& os, const GeometryReport& report);
nlohmann::json to_json(const ResidualReport& report);
nlohmann::json to_json(const GeometryReport& report);

}  // namespace emsep
