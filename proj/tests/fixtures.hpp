#pragma once

// Frames and potentials shared by several test files.

#include <cmath>

#include "emsep/potential.hpp"
#include "emsep/separate.hpp"

namespace fixtures {

using namespace emsep;

inline FrameSpec rotating_frame(SplitClass cls) {
    FrameProfiles p;
    p.alpha = TimeProfile::sinusoid(0.2, 0.7, 1.3, 0.1);
    p.beta = TimeProfile::sinusoid(0.4, 0.3, 0.9, 0.5);
    p.gamma = TimeProfile::polynomial({0.1, 0.6, -0.2});
    const TimeProfile grow = TimeProfile::exponential(1.1, 0.25);
    p.h = {grow, grow, grow};
    if (cls != SplitClass::nonsplit) p.h[2] = TimeProfile::sinusoid(1.0, 0.2, 1.7);
    if (cls == SplitClass::complete) p.h[1] = TimeProfile::exponential(0.9, -0.3);
    p.w = {TimeProfile::sinusoid(0.0, 0.3, 2.0), TimeProfile::polynomial({0.1, -0.2, 0.15}),
           TimeProfile::constant(0.05)};
    return FrameSpec(p, cls);
}

inline FrameSpec expanding_frame(SplitClass cls) {
    FrameProfiles p;
    p.alpha = TimeProfile::constant(0.3);
    p.beta = TimeProfile::constant(-0.2);
    p.gamma = TimeProfile::constant(0.7);
    const TimeProfile grow = TimeProfile::exponential(1.0, 0.4);
    p.h = {grow, grow, grow};
    if (cls != SplitClass::nonsplit) p.h[2] = TimeProfile::sinusoid(1.2, 0.3, 1.1);
    if (cls == SplitClass::complete) p.h[1] = TimeProfile::polynomial({0.8, 0.3, 0.1});
    p.w = {TimeProfile::polynomial({0.0, 0.5, -0.3}), TimeProfile::sinusoid(0.1, 0.2, 1.5),
           TimeProfile::constant(-0.1)};
    return FrameSpec(p, cls);
}

inline std::array<AxisProfile, 3> quadratic_f0() {
    return {AxisProfile::polynomial({0.3, -0.2, 0.1}), AxisProfile::polynomial({-0.1, 0.25}),
            AxisProfile::polynomial({0.2, 0.0, -0.05})};
}

inline std::array<AxisProfile, 3> zero_f0() { return {AxisProfile::zero(), AxisProfile::zero(), AxisProfile::zero()}; }

/// Compact interior ranges per system used by pipeline tests.
inline std::array<Interval, 3> ranges_for(SystemId id) {
    switch (id) {
        case SystemId::cartesian: return {{{-1.0, 1.0}, {-1.0, 1.0}, {-1.0, 1.0}}};
        case SystemId::cylindrical: return {{{-0.5, 0.5}, {0.2, 2.0}, {-1.0, 1.0}}};
        case SystemId::parabolic_cylindrical: return {{{0.4, 1.2}, {0.4, 1.2}, {-1.0, 1.0}}};
        case SystemId::elliptic_cylindrical: return {{{0.4, 1.2}, {0.3, 1.3}, {-1.0, 1.0}}};
        case SystemId::spherical: return {{{0.5, 1.5}, {-0.5, 0.5}, {0.3, 2.0}}};
        case SystemId::prolate_spheroidal:
        case SystemId::prolate_spheroidal_ii_plus:
        case SystemId::prolate_spheroidal_ii_minus: return {{{0.5, 1.2}, {-0.5, 0.5}, {0.3, 2.0}}};
        case SystemId::oblate_spheroidal: return {{{0.5, 1.2}, {0.3, 1.0}, {0.3, 2.0}}};
        case SystemId::parabolic: return {{{-0.5, 0.3}, {-0.5, 0.3}, {0.3, 2.0}}};
        case SystemId::paraboloidal: return {{{0.3, 1.0}, {0.3, 1.2}, {0.3, 1.2}}};
        case SystemId::ellipsoidal: return {{{0.3, 1.2}, {0.3, 1.0}, {0.3, 1.5}}};
        case SystemId::conical: return {{{0.5, 1.5}, {0.3, 1.0}, {0.3, 1.5}}};
    }
    return {};
}

}  // namespace fixtures
