#pragma once

// The eleven separable orthogonal coordinate systems x = z(omega) of
// three-dimensional Euclidean space (plus the offset prolate spheroidal
// variant), their Jacobians, inversion and domain sampling.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "emsep/elliptic.hpp"
#include "emsep/linalg.hpp"

namespace emsep {

enum class SystemId {
    cartesian,
    cylindrical,
    parabolic_cylindrical,
    elliptic_cylindrical,
    spherical,
    prolate_spheroidal,
    prolate_spheroidal_ii_plus,
    prolate_spheroidal_ii_minus,
    oblate_spheroidal,
    parabolic,
    paraboloidal,
    ellipsoidal,
    conical,
};

enum class SplitClass { complete, partial, nonsplit };

/// Margin kept from singular boundaries of the coordinate domain.
inline constexpr double kDomainEps = 1e-6;

struct AxisDomain {
    /// Nominal range; infinite ends are unbounded.
    double lo;
    double hi;
    bool lo_closed;
    bool hi_closed;
    /// Range on which the map formulas are regular. Finite ends are singular
    /// and must be approached no closer than kDomainEps.
    double regular_lo;
    double regular_hi;
    /// Period of the map along this axis, 0 if none.
    double period;
};

class CoordinateSystem {
public:
    /// `a` is the focal scale (ignored where not applicable); `k` is the
    /// elliptic modulus of the ellipsoidal and conical systems.
    static CoordinateSystem make(SystemId id, double a = 1.0, double k = 0.6);

    SystemId id() const { return id_; }
    /// Case number 1..11 of the classification (prolate variants map to 6).
    int case_number() const;
    SplitClass split_class() const;
    double a() const { return a_; }
    /// Present only for ellipsoidal and conical systems.
    const std::optional<elliptic::Modulus>& modulus() const { return modulus_; }
    const std::array<AxisDomain, 3>& domain() const { return domain_; }
    std::string_view name() const;
    /// Constant offset added to z_3 (prolate spheroidal II variants).
    double z3_offset() const;

private:
    CoordinateSystem(SystemId id, double a, std::optional<elliptic::Modulus> m);

    SystemId id_;
    double a_;
    std::optional<elliptic::Modulus> modulus_;
    std::array<AxisDomain, 3> domain_;
};

std::string_view to_string(SystemId id);
std::string_view to_string(SplitClass c);
/// Parses the lowercase snake-case identifier; throws ConfigError.
SystemId parse_system_id(std::string_view name);
const std::vector<SystemId>& all_system_ids();
/// The eleven base systems of the classification, one per case.
const std::vector<SystemId>& base_system_ids();

/// Throws DomainError naming the offending axis.
void check_domain(const CoordinateSystem& system, const Vec3& omega);

Vec3 forward(const CoordinateSystem& system, const Vec3& omega);

/// Columns are dz/d(omega_i). Throws SingularityError when
/// |det J| <= 1e-12 ||J||^3.
Mat3 jacobian(const CoordinateSystem& system, const Vec3& omega);

struct MapPoint {
    Vec3 z;
    Mat3 jacobian;
};
/// forward() and jacobian() together, without the singularity guard.
MapPoint evaluate_map(const CoordinateSystem& system, const Vec3& omega);

/// Newton inversion of forward() from `guess`; ||forward(w) - z|| <= 1e-11 (1 + ||z||).
/// Throws InversionError after 50 iterations.
Vec3 invert(const CoordinateSystem& system, const Vec3& z, const Vec3& guess);

/// Deterministic interior samples of the nominal domain box.
std::vector<Vec3> sample_domain(const CoordinateSystem& system, std::uint64_t seed, std::size_t n);

/// Portable deterministic uniform stream in [0, 1).
class UniformStream {
public:
    explicit UniformStream(std::uint64_t seed);
    double next();
    double uniform(double lo, double hi) { return lo + (hi - lo) * next(); }

private:
    std::uint64_t state_;
};

}  // namespace emsep
