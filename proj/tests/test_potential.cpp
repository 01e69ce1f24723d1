#include <doctest.h>

#include <cmath>

#include "emsep/errors.hpp"
#include "emsep/potential.hpp"
#include "emsep/stackel.hpp"
#include "fixtures.hpp"

using namespace emsep;
using fixtures::zero_f0;

namespace {

FrameSpec spin_frame(double omega) {
    FrameProfiles p;
    p.alpha = TimeProfile::polynomial({0.0, omega});
    return FrameSpec(p, SplitClass::nonsplit);
}

Mat3 fd_jacobian_of_A(const PotentialSpec& spec, double t, const Vec3& x, double h = 1e-4) {
    Mat3 D;
    for (int j = 0; j < 3; ++j) {
        Vec3 e = Vec3::Zero();
        e[j] = h;
        D.col(j) = (spacelike_potential(spec, t, x + e) - spacelike_potential(spec, t, x - e)) / (2 * h);
    }
    return D;
}

Vec3 fd_curl(const PotentialSpec& spec, double t, const Vec3& x) {
    const Mat3 D = fd_jacobian_of_A(spec, t, x);  // D(i, j) = dA_i / dx_j
    return {D(2, 1) - D(1, 2), D(0, 2) - D(2, 0), D(1, 0) - D(0, 1)};
}

}  // namespace

TEST_CASE("potential kind names") {
    for (auto k : {PotentialKind::magnetic, PotentialKind::electrostatic, PotentialKind::coulomb}) {
        CHECK(parse_potential_kind(to_string(k)) == k);
    }
    CHECK_THROWS_AS(parse_potential_kind("gravitational"), ConfigError);
}

TEST_CASE("magnetic kind with a static frame") {
    const auto cart = CoordinateSystem::make(SystemId::cartesian);
    CHECK_THROWS_AS(PotentialSpec::magnetic(cart, FrameSpec::identity(), zero_f0(), TimeProfile::constant(0)),
                    ConfigError);
    const auto free = PotentialSpec::magnetic(cart, FrameSpec::identity(), zero_f0(), TimeProfile::constant(0), 1.0,
                                              FieldRequirement::allow_vanishing);
    const auto v = vector_potential(free, 0.3, {1, 2, 3}, {1, 2, 3});
    CHECK(v.A0 == 0.0);
    CHECK(v.A == Vec3::Zero());
}

TEST_CASE("magnetic kind, uniform rotation about z") {
    const double omega = 0.8;
    const auto cart = CoordinateSystem::make(SystemId::cartesian);
    const auto spec = PotentialSpec::magnetic(cart, spin_frame(omega), zero_f0(), TimeProfile::constant(0));
    for (const Vec3& x : {Vec3(1, 0, 0), Vec3(0.3, -2, 1.5)}) {
        const Vec3 A = spacelike_potential(spec, 0.4, x);
        CHECK((A - 0.5 * omega * Vec3(-x[1], x[0], 0)).norm() <= 1e-15);
    }
    CHECK((magnetic_field(spec, 0.4, {0, 0, 0}) - Vec3(0, 0, omega)).norm() <= 1e-15);
}

TEST_CASE("charge scales the potentials") {
    const auto cart = CoordinateSystem::make(SystemId::cartesian);
    const auto one = PotentialSpec::magnetic(cart, spin_frame(1.0), zero_f0(), TimeProfile::constant(0.5), 1.0);
    const auto two = PotentialSpec::magnetic(cart, spin_frame(1.0), zero_f0(), TimeProfile::constant(0.5), 2.0);
    const Vec3 x(0.2, 0.4, -0.1);
    CHECK((spacelike_potential(two, 0.1, x) * 2.0 - spacelike_potential(one, 0.1, x)).norm() <= 1e-15);
    CHECK(vector_potential(two, 0.1, x, x).A0 * 2.0 == doctest::Approx(vector_potential(one, 0.1, x, x).A0));
    CHECK_THROWS_AS(PotentialSpec::magnetic(cart, spin_frame(1.0), zero_f0(), TimeProfile::constant(0), 0.0),
                    ConfigError);
}

TEST_CASE("Coulomb kind with constant angles is the standard Coulomb potential") {
    for (SystemId id : {SystemId::spherical, SystemId::prolate_spheroidal_ii_plus, SystemId::parabolic,
                        SystemId::conical}) {
        const auto spec = PotentialSpec::coulomb(CoordinateSystem::make(id), TimeProfile::constant(0.3),
                                                 TimeProfile::constant(1.0), TimeProfile::constant(-0.4), 2.5);
        UniformStream rng(5);
        for (int i = 0; i < 20; ++i) {
            const Vec3 x(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2));
            const auto v = vector_potential(spec, rng.uniform(0, 1), x, x);
            CHECK(v.A0 == 2.5 / x.norm());
            CHECK(v.A == Vec3::Zero());
        }
    }
    CHECK_THROWS_AS(PotentialSpec::coulomb(CoordinateSystem::make(SystemId::cylindrical), TimeProfile::constant(0),
                                           TimeProfile::constant(0), TimeProfile::constant(0), 1.0),
                    ConfigError);
}

TEST_CASE("Coulomb kind is the magnetic kind with the q-terms as F_a0") {
    TimeProfile a = TimeProfile::sinusoid(0.1, 0.6, 1.4), b = TimeProfile::polynomial({0.5, 0.3}),
                g = TimeProfile::sinusoid(-0.2, 0.4, 2.1);
    for (SystemId id : {SystemId::spherical, SystemId::prolate_spheroidal_ii_plus,
                        SystemId::prolate_spheroidal_ii_minus, SystemId::parabolic, SystemId::conical}) {
        const auto sys = CoordinateSystem::make(id, 1.3, 0.6);
        CAPTURE(to_string(id));
        const double q = 1.7;
        const auto coul = PotentialSpec::coulomb(sys, a, b, g, q);
        FrameProfiles p;
        p.alpha = a;
        p.beta = b;
        p.gamma = g;
        const FrameSpec frame(p, SplitClass::nonsplit);
        const auto mag = PotentialSpec::magnetic(sys, frame, coulomb_axis_terms(sys, q), TimeProfile::constant(0));
        UniformStream rng(11);
        for (const Vec3& w : sample_domain(sys, 2, 100)) {
            const double t = rng.uniform(0, 1);
            const Vec3 x = embed(sys, frame, t, w);
            const auto vc = vector_potential(coul, t, x, w);
            const auto vm = vector_potential(mag, t, x, w);
            CHECK(std::abs(vc.A0 - vm.A0) <= 1e-9 * std::max(1.0, std::abs(vc.A0)));
            CHECK((vc.A - vm.A).norm() <= 1e-12 * std::max(1.0, vc.A.norm()));
        }
    }
}

TEST_CASE("prolate spheroidal II: the opposite sign pairing does not give q/|x|") {
    const auto plus = CoordinateSystem::make(SystemId::prolate_spheroidal_ii_plus);
    const auto minus = CoordinateSystem::make(SystemId::prolate_spheroidal_ii_minus);
    const double q = 1.0;
    const auto wrong = PotentialSpec::magnetic(plus, FrameSpec::identity(), coulomb_axis_terms(minus, q),
                                               TimeProfile::constant(0), 1.0, FieldRequirement::allow_vanishing);
    double worst = 0.0;
    for (const Vec3& w : sample_domain(plus, 3, 50)) {
        const Vec3 x = forward(plus, w);
        worst = std::max(worst, std::abs(vector_potential(wrong, 0.0, x, w).A0 - q / x.norm()) * x.norm());
    }
    CHECK(worst > 0.1);
}

TEST_CASE("phase factor S") {
    const auto cart = CoordinateSystem::make(SystemId::cartesian);
    const auto still = PotentialSpec::electrostatic(cart, FrameSpec::identity(SplitClass::complete), zero_f0(),
                                                    TimeProfile::constant(0));
    CHECK(phase_factor_S(still, 0.7, {1, -2, 3}) == 0.0);

    FrameProfiles p;
    p.h = {TimeProfile::exponential(1, 1), TimeProfile::exponential(1, 1), TimeProfile::exponential(1, 1)};
    const auto grow =
        PotentialSpec::electrostatic(cart, FrameSpec(p, SplitClass::nonsplit), zero_f0(), TimeProfile::constant(0));
    for (double t : {0.0, 0.5, 3.0}) CHECK(phase_factor_S(grow, t, {1, 0, 0}) == doctest::Approx(0.25).epsilon(1e-15));

    const auto mag = PotentialSpec::magnetic(cart, spin_frame(1.0), zero_f0(), TimeProfile::constant(0));
    CHECK_THROWS_AS(phase_factor_S(mag, 0.0, {1, 0, 0}), UsageError);
}

TEST_CASE("2 grad S = M (x - w) + w' for unrotated frames") {
    const auto sys = CoordinateSystem::make(SystemId::cartesian);
    FrameProfiles p;
    p.h = {TimeProfile::exponential(1.0, 0.4), TimeProfile::polynomial({1.0, 0.2, 0.1}),
           TimeProfile::sinusoid(1.0, 0.3, 2.0)};
    p.w = {TimeProfile::sinusoid(0, 0.5, 1.0), TimeProfile::polynomial({0.2, -0.3}), TimeProfile::constant(0.1)};
    const FrameSpec frame(p, SplitClass::complete);
    const auto spec = PotentialSpec::electrostatic(sys, frame, zero_f0(), TimeProfile::constant(0));
    const double h = 1e-5;
    UniformStream rng(4);
    for (int i = 0; i < 30; ++i) {
        const double t = rng.uniform(0, 1);
        const Vec3 x(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2));
        Vec3 grad;
        for (int j = 0; j < 3; ++j) {
            Vec3 e = Vec3::Zero();
            e[j] = h;
            grad[j] = (phase_factor_S(spec, t, x + e) - phase_factor_S(spec, t, x - e)) / (2 * h);
        }
        const FrameState s = frame_state(frame, t);
        CHECK((2 * grad - (m_matrix(frame, t) * (x - s.translation()) + s.velocity())).norm() <= 1e-7);
    }
}

TEST_CASE("electrostatic A0 absorbs S_t + |grad S|^2") {
    for (SystemId id : {SystemId::cartesian, SystemId::cylindrical, SystemId::spherical, SystemId::ellipsoidal}) {
        const auto sys = CoordinateSystem::make(id, 1.0, 0.6);
        const auto frame = fixtures::expanding_frame(sys.split_class());
        const auto f0 = fixtures::quadratic_f0();
        const auto t0 = TimeProfile::sinusoid(0.2, 0.5, 1.0);
        const auto spec = PotentialSpec::electrostatic(sys, frame, f0, t0);
        const double h = 1e-4;
        UniformStream rng(6);
        for (const Vec3& w : sample_domain(sys, 12, 30)) {
            const double t = rng.uniform(0.1, 0.9);
            const Vec3 x = embed(sys, frame, t, w);
            const double St = (phase_factor_S(spec, t + h, x) - phase_factor_S(spec, t - h, x)) / (2 * h);
            Vec3 grad;
            for (int j = 0; j < 3; ++j) {
                Vec3 e = Vec3::Zero();
                e[j] = h;
                grad[j] = (phase_factor_S(spec, t, x + e) - phase_factor_S(spec, t, x - e)) / (2 * h);
            }
            const Vec3 r2 = metric_r_squared(sys, frame, t, w);
            double spatial = 0.0;
            for (int i = 0; i < 3; ++i) spatial += f0[static_cast<std::size_t>(i)](w[i]) / r2[i];
            const double expect = spatial + t0(t) - St - grad.squaredNorm();
            const double got = vector_potential(spec, t, x, w).A0;
            CHECK(std::abs(got - expect) <= 1e-6 * std::max(1.0, std::abs(expect)));
        }
    }
}

TEST_CASE("electrostatic kind rejects rotating frames") {
    const auto sph = CoordinateSystem::make(SystemId::spherical);
    CHECK_THROWS_AS(
        PotentialSpec::electrostatic(sph, fixtures::rotating_frame(SplitClass::nonsplit), zero_f0(), TimeProfile::constant(0)),
        ConfigError);
}

TEST_CASE("magnetic field is uniform and matches the finite-difference curl") {
    for (SystemId id : {SystemId::cartesian, SystemId::cylindrical, SystemId::oblate_spheroidal}) {
        const auto sys = CoordinateSystem::make(id);
        const auto spec = PotentialSpec::magnetic(sys, fixtures::rotating_frame(sys.split_class()), zero_f0(),
                                                  TimeProfile::constant(0));
        UniformStream rng(9);
        for (int i = 0; i < 20; ++i) {
            const double t = rng.uniform(0, 1);
            const Vec3 x1(rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3));
            const Vec3 x2(rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3));
            const Vec3 B = magnetic_field(spec, t, x1);
            CHECK(B == magnetic_field(spec, t, x2));
            CHECK((fd_curl(spec, t, x1) - B).norm() <= 1e-8 * std::max(1.0, B.norm()));
        }
    }
    const auto coul = PotentialSpec::coulomb(CoordinateSystem::make(SystemId::spherical),
                                             TimeProfile::sinusoid(0, 1, 1), TimeProfile::polynomial({0.2, 0.7}),
                                             TimeProfile::sinusoid(0.3, 0.2, 3), 1.0);
    for (double t : {0.1, 0.6}) {
        const Vec3 x(0.4, -0.9, 1.3);
        const Mat3 S = 0.5 * rotation_rate(coul.frame(), t);
        CHECK((magnetic_field(coul, t, x) - 2 * axial(S)).norm() <= 1e-15);
        CHECK((fd_curl(coul, t, x) - magnetic_field(coul, t, x)).norm() <= 1e-8);
    }
}

TEST_CASE("field vanishes exactly where the three expressions vanish") {
    FrameProfiles p;
    p.alpha = TimeProfile::polynomial({0.0, 0.0, 1.0});
    p.gamma = TimeProfile::polynomial({0.3, 0.0, -0.5});
    const auto spec = PotentialSpec::magnetic(CoordinateSystem::make(SystemId::spherical), FrameSpec(p, SplitClass::nonsplit),
                                              zero_f0(), TimeProfile::constant(0));
    for (int i = 0; i <= 20; ++i) {
        const double t = -1.0 + 0.1 * i;
        double e = 0.0;
        for (double v : rotation_expressions(spec.frame(), t)) e = std::max(e, std::abs(v));
        CHECK((magnetic_field(spec, t, {1, 1, 1}).norm() == 0.0) == (e == 0.0));
    }
    const auto es = PotentialSpec::electrostatic(CoordinateSystem::make(SystemId::spherical),
                                                 fixtures::expanding_frame(SplitClass::nonsplit), zero_f0(),
                                                 TimeProfile::constant(0));
    CHECK(magnetic_field(es, 0.5, {1, 2, 3}) == Vec3::Zero());
}

TEST_CASE("divergence of A") {
    for (SplitClass cls : {SplitClass::complete, SplitClass::partial, SplitClass::nonsplit}) {
        const auto sys = CoordinateSystem::make(cls == SplitClass::complete  ? SystemId::cartesian
                                                : cls == SplitClass::partial ? SystemId::cylindrical
                                                                             : SystemId::spherical);
        const auto frame = fixtures::rotating_frame(cls);
        const auto spec = PotentialSpec::magnetic(sys, frame, zero_f0(), TimeProfile::constant(0), 1.5);
        for (double t : {0.0, 0.3, 0.8}) {
            const Mat3 D = fd_jacobian_of_A(spec, t, {0.5, -0.2, 1.0});
            CHECK(std::abs(D.trace() - divergence_A(spec, t)) <= 1e-7);
            CHECK(2 * 1.5 * divergence_A(spec, t) == doctest::Approx(frame_state(frame, t).scaling_rate().sum()));
        }
    }
}

TEST_CASE("T0 profile") {
    const auto cart = CoordinateSystem::make(SystemId::cartesian);
    const auto still = PotentialSpec::electrostatic(cart, FrameSpec::identity(SplitClass::complete), zero_f0(),
                                                    TimeProfile::constant(0));
    CHECK(t0_profile(still, 0.4) == std::complex<double>(0, 0));
    const auto five = PotentialSpec::electrostatic(cart, FrameSpec::identity(SplitClass::complete), zero_f0(),
                                                   TimeProfile::constant(5));
    CHECK(t0_profile(five, 0.4) == std::complex<double>(5, 0));
    FrameProfiles p;
    const double c = 0.35;
    p.h = {TimeProfile::exponential(1, c), TimeProfile::exponential(1, c), TimeProfile::exponential(1, c)};
    const auto grow = PotentialSpec::electrostatic(CoordinateSystem::make(SystemId::spherical),
                                                   FrameSpec(p, SplitClass::nonsplit), zero_f0(), TimeProfile::constant(0));
    const auto v = t0_profile(grow, 0.9);
    CHECK(v.real() == 0.0);
    CHECK(v.imag() == doctest::Approx(-1.5 * c).epsilon(1e-15));
}
