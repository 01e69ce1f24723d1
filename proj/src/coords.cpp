#include "emsep/coords.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "emsep/errors.hpp"

namespace emsep {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

AxisDomain real_line() { return {-kInf, kInf, false, false, -kInf, kInf, 0.0}; }
AxisDomain positive() { return {0.0, kInf, false, false, 0.0, kInf, 0.0}; }
AxisDomain angle(double lo, double hi, bool lo_closed, bool hi_closed, double period) {
    return {lo, hi, lo_closed, hi_closed, -kInf, kInf, period};
}

struct Names {
    SystemId id;
    std::string_view name;
};

constexpr std::array<Names, 13> kNames{{
    {SystemId::cartesian, "cartesian"},
    {SystemId::cylindrical, "cylindrical"},
    {SystemId::parabolic_cylindrical, "parabolic_cylindrical"},
    {SystemId::elliptic_cylindrical, "elliptic_cylindrical"},
    {SystemId::spherical, "spherical"},
    {SystemId::prolate_spheroidal, "prolate_spheroidal"},
    {SystemId::prolate_spheroidal_ii_plus, "prolate_spheroidal_ii_plus"},
    {SystemId::prolate_spheroidal_ii_minus, "prolate_spheroidal_ii_minus"},
    {SystemId::oblate_spheroidal, "oblate_spheroidal"},
    {SystemId::parabolic, "parabolic"},
    {SystemId::paraboloidal, "paraboloidal"},
    {SystemId::ellipsoidal, "ellipsoidal"},
    {SystemId::conical, "conical"},
}};

// SplitMix64
std::uint64_t mix(std::uint64_t& s) {
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

UniformStream::UniformStream(std::uint64_t seed) : state_(seed) {}

double UniformStream::next() { return static_cast<double>(mix(state_) >> 11) * 0x1.0p-53; }

std::string_view to_string(SystemId id) {
    for (const auto& n : kNames) {
        if (n.id == id) return n.name;
    }
    return "unknown";
}

std::string_view to_string(SplitClass c) {
    switch (c) {
        case SplitClass::complete: return "complete";
        case SplitClass::partial: return "partial";
        case SplitClass::nonsplit: return "nonsplit";
    }
    return "unknown";
}

SystemId parse_system_id(std::string_view name) {
    for (const auto& n : kNames) {
        if (n.name == name) return n.id;
    }
    throw ConfigError("unknown coordinate system '" + std::string(name) + "'");
}

const std::vector<SystemId>& all_system_ids() {
    static const std::vector<SystemId> ids = [] {
        std::vector<SystemId> v;
        for (const auto& n : kNames) v.push_back(n.id);
        return v;
    }();
    return ids;
}

const std::vector<SystemId>& base_system_ids() {
    static const std::vector<SystemId> ids{
        SystemId::cartesian,          SystemId::cylindrical,       SystemId::parabolic_cylindrical,
        SystemId::elliptic_cylindrical, SystemId::spherical,       SystemId::prolate_spheroidal,
        SystemId::oblate_spheroidal,  SystemId::parabolic,         SystemId::paraboloidal,
        SystemId::ellipsoidal,        SystemId::conical,
    };
    return ids;
}

CoordinateSystem::CoordinateSystem(SystemId id, double a, std::optional<elliptic::Modulus> m)
    : id_(id), a_(a), modulus_(m), domain_{} {
    const double K = m ? m->K : 0.0;
    const double Kp = m ? m->Kprime : 0.0;
    switch (id) {
        case SystemId::cartesian:
            domain_ = {real_line(), real_line(), real_line()};
            break;
        case SystemId::cylindrical:
            domain_ = {real_line(), angle(0.0, 2 * kPi, true, false, 2 * kPi), real_line()};
            break;
        case SystemId::parabolic_cylindrical:
            domain_ = {AxisDomain{0.0, kInf, false, false, -kInf, kInf, 0.0}, real_line(), real_line()};
            break;
        case SystemId::elliptic_cylindrical:
            domain_ = {AxisDomain{0.0, kInf, false, false, -kInf, kInf, 0.0},
                       angle(-kPi, kPi, false, true, 2 * kPi), real_line()};
            break;
        case SystemId::spherical:
        case SystemId::prolate_spheroidal:
        case SystemId::prolate_spheroidal_ii_plus:
        case SystemId::prolate_spheroidal_ii_minus:
            domain_ = {positive(), real_line(), angle(0.0, 2 * kPi, true, false, 2 * kPi)};
            break;
        case SystemId::oblate_spheroidal:
            domain_ = {AxisDomain{0.0, kPi / 2, false, false, 0.0, kPi, 0.0}, real_line(),
                       angle(0.0, 2 * kPi, true, false, 2 * kPi)};
            break;
        case SystemId::parabolic:
            domain_ = {real_line(), real_line(), angle(0.0, 2 * kPi, true, true, 2 * kPi)};
            break;
        case SystemId::paraboloidal:
            domain_ = {real_line(), angle(0.0, kPi, true, false, 2 * kPi), real_line()};
            break;
        case SystemId::ellipsoidal:
            domain_ = {AxisDomain{0.0, K, false, false, 0.0, 2 * K, 0.0}, angle(-Kp, Kp, true, true, 4 * Kp),
                       angle(0.0, 4 * K, true, true, 4 * K)};
            break;
        case SystemId::conical:
            domain_ = {positive(), angle(-Kp, Kp, true, true, 4 * Kp), angle(0.0, 4 * K, true, true, 4 * K)};
            break;
    }
}

CoordinateSystem CoordinateSystem::make(SystemId id, double a, double k) {
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw ConfigError("coordinate scale a must be positive");
    }
    std::optional<elliptic::Modulus> m;
    if (id == SystemId::ellipsoidal || id == SystemId::conical) {
        if (!(k > 0.0 && k < 1.0)) throw ConfigError("elliptic modulus k must satisfy 0 < k < 1");
        m = elliptic::Modulus::from_k(k);
    }
    return CoordinateSystem(id, a, m);
}

int CoordinateSystem::case_number() const {
    switch (id_) {
        case SystemId::cartesian: return 1;
        case SystemId::cylindrical: return 2;
        case SystemId::parabolic_cylindrical: return 3;
        case SystemId::elliptic_cylindrical: return 4;
        case SystemId::spherical: return 5;
        case SystemId::prolate_spheroidal:
        case SystemId::prolate_spheroidal_ii_plus:
        case SystemId::prolate_spheroidal_ii_minus: return 6;
        case SystemId::oblate_spheroidal: return 7;
        case SystemId::parabolic: return 8;
        case SystemId::paraboloidal: return 9;
        case SystemId::ellipsoidal: return 10;
        case SystemId::conical: return 11;
    }
    return 0;
}

SplitClass CoordinateSystem::split_class() const {
    const int c = case_number();
    if (c == 1) return SplitClass::complete;
    if (c <= 4) return SplitClass::partial;
    return SplitClass::nonsplit;
}

std::string_view CoordinateSystem::name() const { return to_string(id_); }

double CoordinateSystem::z3_offset() const {
    if (id_ == SystemId::prolate_spheroidal_ii_plus) return a_;
    if (id_ == SystemId::prolate_spheroidal_ii_minus) return -a_;
    return 0.0;
}

void check_domain(const CoordinateSystem& system, const Vec3& omega) {
    for (int i = 0; i < 3; ++i) {
        const double w = omega[i];
        const AxisDomain& d = system.domain()[static_cast<std::size_t>(i)];
        const bool below = std::isfinite(d.regular_lo) && w < d.regular_lo + kDomainEps;
        const bool above = std::isfinite(d.regular_hi) && w > d.regular_hi - kDomainEps;
        if (!std::isfinite(w) || below || above) {
            std::ostringstream msg;
            msg << system.name() << ": omega_" << (i + 1) << " = " << w << " outside the regular domain";
            throw DomainError(i + 1, w, msg.str());
        }
    }
}

MapPoint evaluate_map(const CoordinateSystem& system, const Vec3& omega) {
    const double w1 = omega[0];
    const double w2 = omega[1];
    const double w3 = omega[2];
    const double a = system.a();
    Vec3 z;
    Mat3 J;
    switch (system.id()) {
        case SystemId::cartesian:
            z = omega;
            J.setIdentity();
            break;
        case SystemId::cylindrical: {
            const double e = std::exp(w1), c = std::cos(w2), s = std::sin(w2);
            z << e * c, e * s, w3;
            J << e * c, -e * s, 0, e * s, e * c, 0, 0, 0, 1;
            break;
        }
        case SystemId::parabolic_cylindrical:
            z << 0.5 * (w1 * w1 - w2 * w2), w1 * w2, w3;
            J << w1, -w2, 0, w2, w1, 0, 0, 0, 1;
            break;
        case SystemId::elliptic_cylindrical: {
            const double ch = std::cosh(w1), sh = std::sinh(w1), c = std::cos(w2), s = std::sin(w2);
            z << a * ch * c, a * sh * s, w3;
            J << a * sh * c, -a * ch * s, 0, a * ch * s, a * sh * c, 0, 0, 0, 1;
            break;
        }
        case SystemId::spherical: {
            const double r = 1.0 / w1, se = 1.0 / std::cosh(w2), th = std::tanh(w2);
            const double c = std::cos(w3), s = std::sin(w3);
            z << r * se * c, r * se * s, r * th;
            J.col(0) = -z / w1;
            J.col(1) << -r * se * th * c, -r * se * th * s, r * se * se;
            J.col(2) << -r * se * s, r * se * c, 0;
            break;
        }
        case SystemId::prolate_spheroidal:
        case SystemId::prolate_spheroidal_ii_plus:
        case SystemId::prolate_spheroidal_ii_minus: {
            const double csch = 1.0 / std::sinh(w1), coth = 1.0 / std::tanh(w1);
            const double se = 1.0 / std::cosh(w2), th = std::tanh(w2);
            const double c = std::cos(w3), s = std::sin(w3);
            const double A = a * csch * se;
            z << A * c, A * s, a * coth * th + system.z3_offset();
            J.col(0) << -A * coth * c, -A * coth * s, -a * csch * csch * th;
            J.col(1) << -A * th * c, -A * th * s, a * coth * se * se;
            J.col(2) << -A * s, A * c, 0;
            break;
        }
        case SystemId::oblate_spheroidal: {
            const double csc = 1.0 / std::sin(w1), cot = std::cos(w1) / std::sin(w1);
            const double se = 1.0 / std::cosh(w2), th = std::tanh(w2);
            const double c = std::cos(w3), s = std::sin(w3);
            const double A = a * csc * se;
            z << A * c, A * s, a * cot * th;
            J.col(0) << -A * cot * c, -A * cot * s, -a * csc * csc * th;
            J.col(1) << -A * th * c, -A * th * s, a * cot * se * se;
            J.col(2) << -A * s, A * c, 0;
            break;
        }
        case SystemId::parabolic: {
            const double E = std::exp(w1 + w2), e1 = std::exp(2 * w1), e2 = std::exp(2 * w2);
            const double c = std::cos(w3), s = std::sin(w3);
            z << E * c, E * s, 0.5 * (e1 - e2);
            J.col(0) << E * c, E * s, e1;
            J.col(1) << E * c, E * s, -e2;
            J.col(2) << -E * s, E * c, 0;
            break;
        }
        case SystemId::paraboloidal: {
            const double ch1 = std::cosh(w1), sh1 = std::sinh(w1), c2 = std::cos(w2), s2 = std::sin(w2);
            const double ch3 = std::cosh(w3), sh3 = std::sinh(w3);
            z << 2 * a * ch1 * c2 * sh3, 2 * a * sh1 * s2 * ch3,
                0.5 * a * (std::cosh(2 * w1) + std::cos(2 * w2) - std::cosh(2 * w3));
            J.col(0) << 2 * a * sh1 * c2 * sh3, 2 * a * ch1 * s2 * ch3, a * std::sinh(2 * w1);
            J.col(1) << -2 * a * ch1 * s2 * sh3, 2 * a * sh1 * c2 * ch3, -a * std::sin(2 * w2);
            J.col(2) << 2 * a * ch1 * c2 * ch3, 2 * a * sh1 * s2 * sh3, -a * std::sinh(2 * w3);
            break;
        }
        case SystemId::ellipsoidal:
        case SystemId::conical: {
            const auto& m = *system.modulus();
            const auto j2 = elliptic::jacobi(w2, m.kprime);
            const auto j3 = elliptic::jacobi(w3, m.k);
            // Common angular factors.
            const Vec3 ang(j2.dn * j3.sn, j2.cn * j3.cn, j2.sn * j3.dn);
            const Vec3 dang2(j2.ddn() * j3.sn, j2.dcn() * j3.cn, j2.dsn() * j3.dn);
            const Vec3 dang3(j2.dn * j3.dsn(), j2.cn * j3.dcn(), j2.sn * j3.ddn());
            if (system.id() == SystemId::conical) {
                z = ang / w1;
                J.col(0) = -z / w1;
                J.col(1) = dang2 / w1;
                J.col(2) = dang3 / w1;
            } else {
                const auto j1 = elliptic::jacobi(w1, m.k);
                // Radial-like factors (1/sn, dn/sn, cn/sn) and their derivatives.
                const double s2i = 1.0 / (j1.sn * j1.sn);
                const Vec3 rad(1.0 / j1.sn, j1.dn / j1.sn, j1.cn / j1.sn);
                const Vec3 drad(-j1.cn * j1.dn * s2i, -j1.cn * s2i, -j1.dn * s2i);
                z = a * rad.cwiseProduct(ang);
                J.col(0) = a * drad.cwiseProduct(ang);
                J.col(1) = a * rad.cwiseProduct(dang2);
                J.col(2) = a * rad.cwiseProduct(dang3);
            }
            break;
        }
    }
    return {z, J};
}

Vec3 forward(const CoordinateSystem& system, const Vec3& omega) {
    check_domain(system, omega);
    return evaluate_map(system, omega).z;
}

Mat3 jacobian(const CoordinateSystem& system, const Vec3& omega) {
    check_domain(system, omega);
    Mat3 J = evaluate_map(system, omega).jacobian;
    const double n = J.norm();
    if (!(std::abs(J.determinant()) > 1e-12 * n * n * n)) {
        throw SingularityError(std::string(system.name()) + ": singular Jacobian");
    }
    return J;
}

namespace {

Vec3 clamp_to_regular(const CoordinateSystem& system, Vec3 w) {
    for (int i = 0; i < 3; ++i) {
        const AxisDomain& d = system.domain()[static_cast<std::size_t>(i)];
        if (std::isfinite(d.regular_lo)) w[i] = std::max(w[i], d.regular_lo + kDomainEps);
        if (std::isfinite(d.regular_hi)) w[i] = std::min(w[i], d.regular_hi - kDomainEps);
    }
    return w;
}

std::array<double, 3> to_array(const Vec3& v) { return {v[0], v[1], v[2]}; }

}  // namespace

Vec3 invert(const CoordinateSystem& system, const Vec3& z, const Vec3& guess) {
    constexpr int kMaxIter = 50;
    const double tol = 1e-11 * (1.0 + z.norm());
    if (!all_finite(z) || !all_finite(guess)) {
        throw InversionError("non-finite inversion input", to_array(guess), std::numeric_limits<double>::infinity());
    }
    Vec3 w = clamp_to_regular(system, guess);
    MapPoint p = evaluate_map(system, w);
    double res = (p.z - z).norm();
    int polish = 0;
    for (int iter = 0; iter < kMaxIter; ++iter) {
        if (res <= tol) {
            // Two extra Newton steps drive the residual to rounding level, which
            // finite-difference stencils built on top of the inverse rely on.
            if (polish++ >= 2 || res == 0.0) return w;
        }
        Mat3 Jinv;
        try {
            Jinv = inverse3(p.jacobian, 1e-14);
        } catch (const SingularityError&) {
            throw InversionError(std::string(system.name()) + ": singular Jacobian during inversion",
                                 to_array(w), res);
        }
        const Vec3 step = Jinv * (p.z - z);
        double scale = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 30; ++ls) {
            const Vec3 trial = clamp_to_regular(system, w - scale * step);
            const MapPoint q = evaluate_map(system, trial);
            const double r = (q.z - z).norm();
            if (std::isfinite(r) && (r < res || (res <= tol && r <= tol))) {
                w = trial;
                p = q;
                res = r;
                accepted = true;
                break;
            }
            scale *= 0.5;
        }
        if (!accepted) {
            if (res <= tol) return w;
            break;
        }
    }
    if (res <= tol) return w;
    std::ostringstream msg;
    msg << system.name() << ": Newton inversion did not converge (residual " << res << ")";
    throw InversionError(msg.str(), to_array(w), res);
}

std::vector<Vec3> sample_domain(const CoordinateSystem& system, std::uint64_t seed, std::size_t n) {
    std::array<std::pair<double, double>, 3> box;
    for (std::size_t i = 0; i < 3; ++i) {
        const AxisDomain& d = system.domain()[i];
        const double lo = std::isfinite(d.lo) ? d.lo + kDomainEps : -3.0;
        const double hi = std::isfinite(d.hi) ? d.hi - kDomainEps : 3.0;
        box[i] = {lo, std::max(lo, hi)};
    }
    UniformStream rng(seed);
    std::vector<Vec3> out;
    out.reserve(n);
    for (std::size_t s = 0; s < n; ++s) {
        Vec3 w;
        for (std::size_t i = 0; i < 3; ++i) {
            // (lo, hi]: never returns the lower end exactly.
            w[static_cast<Eigen::Index>(i)] = box[i].second - (box[i].second - box[i].first) * rng.next();
        }
        out.push_back(w);
    }
    return out;
}

}  // namespace emsep
