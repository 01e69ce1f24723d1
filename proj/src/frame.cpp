#include "emsep/frame.hpp"

#include <cmath>
#include <sstream>

#include "emsep/errors.hpp"

namespace emsep {

namespace {

constexpr int kProbePoints = 64;

int restrictiveness(SplitClass c) {
    switch (c) {
        case SplitClass::complete: return 0;
        case SplitClass::partial: return 1;
        case SplitClass::nonsplit: return 2;
    }
    return 0;
}

bool jets_equal(const Jet& a, const Jet& b) {
    auto close = [](double x, double y) { return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(x)); };
    return close(a.value, b.value) && close(a.d1, b.d1) && close(a.d2, b.d2);
}

Mat3 euler(double a, double b, double g) {
    const double ca = std::cos(a), sa = std::sin(a);
    const double cb = std::cos(b), sb = std::sin(b);
    const double cg = std::cos(g), sg = std::sin(g);
    Mat3 T;
    T << ca * cb - sa * sb * cg, -ca * sb - sa * cb * cg, sa * sg,
         sa * cb + ca * sb * cg, -sa * sb + ca * cb * cg, -ca * sg,
         sb * sg, cb * sg, cg;
    return T;
}

std::array<double, 3> expressions(const Jet& a, const Jet& b, const Jet& g) {
    const double ca = std::cos(a.value), sa = std::sin(a.value);
    const double cg = std::cos(g.value), sg = std::sin(g.value);
    return {a.d1 + b.d1 * cg, b.d1 * ca * sg - g.d1 * sa, b.d1 * sa * sg + g.d1 * ca};
}

Mat3 skew_from(const std::array<double, 3>& e) {
    Mat3 W;
    W << 0, -e[0], -e[1],
         e[0], 0, -e[2],
         e[1], e[2], 0;
    return W;
}

}  // namespace

FrameSpec::FrameSpec(FrameProfiles profiles, SplitClass cls, TimeWindow probe)
    : p_(std::move(profiles)), cls_(cls), probe_(probe) {
    if (!(probe_.hi >= probe_.lo)) throw ConfigError("frame probe window is empty");
    for (int n = 0; n < kProbePoints; ++n) {
        const double t = probe_.lo + (probe_.hi - probe_.lo) * n / (kProbePoints - 1);
        std::array<Jet, 3> h{p_.h[0].jet(t), p_.h[1].jet(t), p_.h[2].jet(t)};
        for (int i = 0; i < 3; ++i) {
            if (!(h[static_cast<std::size_t>(i)].value > 0.0)) {
                std::ostringstream msg;
                msg << "scaling h" << (i + 1) << " is not positive at t = " << t;
                throw ConfigError(msg.str());
            }
        }
        if (cls_ != SplitClass::complete && !jets_equal(h[0], h[1])) {
            throw ConfigError("frame class requires h1 == h2 (violated at t = " + std::to_string(t) + ")");
        }
        if (cls_ == SplitClass::nonsplit && !jets_equal(h[0], h[2])) {
            throw ConfigError("non-split frame requires h1 == h2 == h3 (violated at t = " + std::to_string(t) +
                              ")");
        }
    }
}

bool FrameSpec::rotation_is_constant() const {
    return p_.alpha.is_constant() && p_.beta.is_constant() && p_.gamma.is_constant();
}

FrameState frame_state(const FrameSpec& frame, double t) {
    const auto& p = frame.profiles();
    const Jet a = p.alpha.jet(t), b = p.beta.jet(t), g = p.gamma.jet(t);
    FrameState s;
    s.rotation = euler(a.value, b.value, g.value);
    s.rotation_rate = skew_from(expressions(a, b, g));
    for (std::size_t i = 0; i < 3; ++i) {
        s.h[i] = p.h[i].jet(t);
        s.w[i] = p.w[i].jet(t);
    }
    return s;
}

Mat3 rotation_matrix(const FrameSpec& frame, double t) {
    const auto& p = frame.profiles();
    return euler(p.alpha(t), p.beta(t), p.gamma(t));
}

std::array<double, 3> rotation_expressions(const FrameSpec& frame, double t) {
    const auto& p = frame.profiles();
    return expressions(p.alpha.jet(t), p.beta.jet(t), p.gamma.jet(t));
}

Mat3 rotation_rate(const FrameSpec& frame, double t) { return skew_from(rotation_expressions(frame, t)); }

Mat3 m_matrix(const FrameSpec& frame, double t) {
    const FrameState s = frame_state(frame, t);
    const Mat3 D = s.scaling_rate().asDiagonal();
    return s.rotation_rate + s.rotation * D * s.rotation.transpose();
}

bool compatible(SplitClass frame_class, SplitClass system_class) {
    return restrictiveness(frame_class) >= restrictiveness(system_class);
}

namespace {

void require_compatible(const CoordinateSystem& system, const FrameSpec& frame) {
    if (!compatible(frame.class_of(), system.split_class())) {
        throw ConfigError(std::string("frame class '") + std::string(to_string(frame.class_of())) +
                          "' is not admissible for the " + std::string(to_string(system.split_class())) +
                          " system " + std::string(system.name()));
    }
}

}  // namespace

Vec3 embed(const CoordinateSystem& system, const FrameSpec& frame, double t, const Vec3& omega) {
    require_compatible(system, frame);
    const FrameState s = frame_state(frame, t);
    return s.rotation * s.scaling().cwiseProduct(forward(system, omega)) + s.translation();
}

Mat3 omega_gradients(const CoordinateSystem& system, const FrameSpec& frame, double t, const Vec3& omega) {
    require_compatible(system, frame);
    const FrameState s = frame_state(frame, t);
    const Mat3 J = jacobian(system, omega);
    const Mat3 H = s.scaling().asDiagonal();
    return inverse3(s.rotation * H * J);
}

Vec3 omega_at(const CoordinateSystem& system, const FrameSpec& frame, double t, const Vec3& x,
              const Vec3& hint) {
    require_compatible(system, frame);
    const FrameState s = frame_state(frame, t);
    const Vec3 z = (s.rotation.transpose() * (x - s.translation())).cwiseQuotient(s.scaling());
    return invert(system, z, hint);
}

}  // namespace emsep
