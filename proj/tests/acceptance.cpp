// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only when
// every criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "app.hpp"
#include "emsep/elliptic.hpp"
#include "emsep/errors.hpp"
#include "emsep/stackel.hpp"
#include "emsep/verify.hpp"
#include "fixtures.hpp"
#include "scenario.hpp"

using namespace emsep;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

const fs::path kScenarios = fs::path(EMSEP_SOURCE_DIR) / "scenarios";
const fs::path kOut = fs::path(EMSEP_BINARY_DIR) / "acceptance_out";

int cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    return cli::run(args, out, err);
}

nlohmann::json run_scenario(const std::string& name, const std::string& command, int& code) {
    const fs::path dir = kOut / name;
    fs::remove_all(dir);
    code = cli({command, "--scenario", (kScenarios / (name + ".json")).string(), "--out", dir.string()});
    std::ifstream in(dir / "report.json");
    return in ? nlohmann::json::parse(in) : nlohmann::json();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// 1. Geometry of all systems in a unit static frame.
Verdict geometry_suite() {
    Verdict v;
    const auto start = std::chrono::steady_clock::now();
    double orth = 0, st = 0, harm = 0, met = 0;
    for (SystemId id : all_system_ids()) {
        const auto sys = CoordinateSystem::make(id);
        const auto rep = geometry_audit(sys, FrameSpec::identity(sys.split_class()), 0.0, 200, 2024);
        const std::string name(sys.name());
        v.require(rep.failures() == 0, name + " had failed samples");
        v.require(rep.max_orthogonality() <= 1e-9, name + " orthogonality " + sci(rep.max_orthogonality()));
        v.require(rep.max_stackel() <= 1e-9, name + " stackel " + sci(rep.max_stackel()));
        v.require(rep.max_harmonicity() <= 1e-5, name + " harmonicity " + sci(rep.max_harmonicity()));
        v.require(rep.max_metric() <= 1e-9, name + " metric " + sci(rep.max_metric()));
        orth = std::max(orth, rep.max_orthogonality());
        st = std::max(st, rep.max_stackel());
        harm = std::max(harm, rep.max_harmonicity());
        met = std::max(met, rep.max_metric());
    }
    const double elapsed = seconds_since(start);
    v.require(elapsed <= 10.0, "runtime " + sci(elapsed) + " s");
    if (v.pass) {
        v.detail = "13 systems x 200: orthogonality " + sci(orth) + ", stackel " + sci(st) + ", harmonicity " +
                   sci(harm) + ", metric " + sci(met) + ", " + sci(elapsed) + " s";
    }
    return v;
}

// 2. Staeckel relation under time-dependent frames of each split class.
Verdict frame_suite() {
    Verdict v;
    double worst = 0;
    for (SystemId id : all_system_ids()) {
        const auto sys = CoordinateSystem::make(id);
        UniformStream rng(77);
        std::vector<SamplePoint> pts;
        for (const Vec3& w : sample_domain(sys, 31, 20)) pts.push_back({rng.uniform(0.0, 1.0), w});
        const auto rep = geometry_audit_at(sys, fixtures::rotating_frame(sys.split_class()), pts);
        const std::string name(sys.name());
        v.require(rep.failures() == 0, name + " had failed samples");
        v.require(rep.max_stackel() <= 1e-8, name + " " + sci(rep.max_stackel()));
        worst = std::max(worst, rep.max_stackel());
    }
    if (v.pass) v.detail = "13 systems x 20 (t, omega), worst relative violation " + sci(worst);
    return v;
}

const std::vector<SystemId>& forward_systems() {
    static const std::vector<SystemId> ids{SystemId::cartesian, SystemId::cylindrical, SystemId::spherical,
                                           SystemId::ellipsoidal, SystemId::conical};
    return ids;
}

SeparationConstants random_lambda(UniformStream& rng) {
    return {rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
}

// 3. Magnetic kind with rotating and scaling frames.
Verdict magnetic_forward() {
    Verdict v;
    const auto start = std::chrono::steady_clock::now();
    double worst = 0;
    UniformStream rng(5);
    for (SystemId id : forward_systems()) {
        const auto sys = CoordinateSystem::make(id);
        for (bool with_f0 : {false, true}) {
            const auto spec = PotentialSpec::magnetic(sys, fixtures::rotating_frame(sys.split_class()),
                                                      with_f0 ? fixtures::quadratic_f0() : fixtures::zero_f0(),
                                                      TimeProfile::sinusoid(0.1, 0.3, 1.0));
            SeparationSetup setup;
            setup.omega_ranges = fixtures::ranges_for(id);
            const auto sol = SeparatedSolution::build(spec, random_lambda(rng), setup);
            const auto rep = se_sweep(sol, sample_points(setup.t_range, setup.omega_ranges, 100, 100 + with_f0));
            const double m = rep.max_relative();
            v.require(m <= 1e-5, std::string(sys.name()) + (with_f0 ? " F0" : " F0=0") + " " + sci(m));
            worst = std::isnan(m) ? m : std::max(worst, m);
        }
    }
    const double elapsed = seconds_since(start);
    v.require(elapsed <= 60.0, "runtime " + sci(elapsed) + " s");
    if (v.pass) {
        v.detail = "cartesian, cylindrical, spherical, ellipsoidal, conical x {F0 = 0, quadratic F0}, 100 samples: "
                   "max relative " + sci(worst) + ", " + sci(elapsed) + " s";
    }
    return v;
}

// 4. Electrostatic kind with expanding frames, plus the Im T0 control.
Verdict electrostatic_forward() {
    Verdict v;
    double worst = 0, control = 1e300;
    UniformStream rng(6);
    for (SystemId id : forward_systems()) {
        const auto sys = CoordinateSystem::make(id);
        const auto spec = PotentialSpec::electrostatic(sys, fixtures::expanding_frame(sys.split_class()),
                                                       fixtures::quadratic_f0(), TimeProfile::constant(0.2));
        SeparationSetup setup;
        setup.omega_ranges = fixtures::ranges_for(id);
        const auto lambda = random_lambda(rng);
        const auto pts = sample_points(setup.t_range, setup.omega_ranges, 100, 7);
        const double m = se_sweep(SeparatedSolution::build(spec, lambda, setup), pts).max_relative();
        v.require(m <= 1e-5, std::string(sys.name()) + " " + sci(m));
        worst = std::isnan(m) ? m : std::max(worst, m);
        setup.real_t0_only = true;
        const double c = se_sweep(SeparatedSolution::build(spec, lambda, setup), pts).max_relative();
        v.require(c > 1e-2, std::string(sys.name()) + " control only " + sci(c));
        control = std::min(control, c);
    }
    if (v.pass) v.detail = "max relative " + sci(worst) + "; Im T0 = 0 control min " + sci(control);
    return v;
}

Vec3 fd_curl(const PotentialSpec& spec, double t, const Vec3& x) {
    const double h = 1e-4;
    Mat3 D;
    for (int j = 0; j < 3; ++j) {
        Vec3 e = Vec3::Zero();
        e[j] = h;
        D.col(j) = (spacelike_potential(spec, t, x + e) - spacelike_potential(spec, t, x - e)) / (2 * h);
    }
    return {D(2, 1) - D(1, 2), D(0, 2) - D(2, 0), D(1, 0) - D(0, 1)};
}

// 5. Uniform magnetic field and its vanishing condition.
Verdict magnetic_uniformity() {
    Verdict v;
    double worst = 0;
    UniformStream rng(8);
    for (SystemId id : {SystemId::cartesian, SystemId::cylindrical, SystemId::spherical, SystemId::conical}) {
        const auto sys = CoordinateSystem::make(id);
        const auto spec = PotentialSpec::magnetic(sys, fixtures::rotating_frame(sys.split_class()), fixtures::zero_f0(),
                                                  TimeProfile::constant(0));
        for (int i = 0; i < 20; ++i) {
            const double t = rng.uniform(0, 1);
            const Vec3 B = magnetic_field(spec, t, Vec3::Zero());
            for (int j = 0; j < 5; ++j) {
                const Vec3 x(rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3));
                v.require(magnetic_field(spec, t, x) == B, "B depends on x");
                const double d = (fd_curl(spec, t, x) - B).norm() / std::max(1.0, B.norm());
                worst = std::max(worst, d);
            }
        }
    }
    v.require(worst <= 1e-8, "FD curl deviation " + sci(worst));

    // B = 0 exactly at the sample times where all three expressions vanish;
    // the grid contains t = 0, where they do.
    FrameProfiles p;
    p.alpha = TimeProfile::polynomial({0.0, 0.0, 1.0});
    p.gamma = TimeProfile::polynomial({0.3, 0.0, -0.5});
    p.h = {TimeProfile::exponential(1, 0.2), TimeProfile::exponential(1, 0.2), TimeProfile::exponential(1, 0.2)};
    const FrameSpec touching(p, SplitClass::nonsplit, {-1.0, 1.0});
    const auto spec = PotentialSpec::magnetic(CoordinateSystem::make(SystemId::spherical), touching,
                                              fixtures::zero_f0(), TimeProfile::constant(0));
    int zeros = 0;
    for (int i = 0; i <= 64; ++i) {
        const double t = -1.0 + 2.0 * i / 64.0;
        bool vanish = true;
        for (double e : rotation_expressions(touching, t)) vanish = vanish && e == 0.0;
        const bool b_zero = magnetic_field(spec, t, {0.3, -1.0, 2.0}) == Vec3::Zero();
        v.require(b_zero == vanish, "B = 0 mismatch at t = " + sci(t));
        zeros += vanish;
    }
    // Expressions vanishing on the whole grid (pure scaling frame).
    FrameProfiles s;
    s.h = p.h;
    const FrameSpec scaling(s, SplitClass::nonsplit);
    bool rejected = false;
    try {
        (void)PotentialSpec::magnetic(CoordinateSystem::make(SystemId::spherical), scaling, fixtures::zero_f0(),
                                      TimeProfile::constant(0));
    } catch (const ConfigError&) {
        rejected = true;
    }
    v.require(zeros >= 1, "no vanishing sample exercised");
    v.require(rejected, "vanishing-field frame accepted without opt-in");
    const auto allowed = PotentialSpec::magnetic(CoordinateSystem::make(SystemId::spherical), scaling,
                                                 fixtures::zero_f0(), TimeProfile::constant(0), 1.0,
                                                 FieldRequirement::allow_vanishing);
    for (int i = 0; i < 64; ++i) {
        v.require(magnetic_field(allowed, i / 63.0, {1, 2, 3}) == Vec3::Zero(), "scaling frame has B != 0");
    }
    if (v.pass) {
        v.detail = "bitwise uniform over 400 points, FD curl within " + sci(worst) + ", B = 0 exactly at " +
                   std::to_string(zeros) + " of 65 sample times and nowhere else";
    }
    return v;
}

// 6. Coulomb demo through the command-line front end.
Verdict coulomb_demo() {
    Verdict v;
    int code = 0;
    const auto rep = run_scenario("coulomb-demo", "coulomb-demo", code);
    v.require(code == 0, "exit code " + std::to_string(code));
    double worst = 0;
    if (code == 0) {
        for (const auto& s : rep["result"]["systems"]) {
            const double m = s["report"]["summary"]["max_relative"].get<double>();
            v.require(m <= 1e-5, s["system"].get<std::string>() + " " + sci(m));
            worst = std::max(worst, m);
        }
        v.require(rep["result"]["systems"].size() == 5, "expected five systems");
    }
    // Constant angles: eA = 0 and eA0 = q/|x|, also when rebuilt from the axis terms.
    double dual = 0;
    for (SystemId id : {SystemId::spherical, SystemId::prolate_spheroidal_ii_plus, SystemId::prolate_spheroidal_ii_minus,
                        SystemId::parabolic, SystemId::conical}) {
        const auto sys = CoordinateSystem::make(id);
        const double q = 1.7;
        const auto spec = PotentialSpec::coulomb(sys, TimeProfile::constant(0.3), TimeProfile::constant(0.4),
                                                 TimeProfile::constant(-0.2), q);
        const auto generic = PotentialSpec::magnetic(sys, spec.frame(), coulomb_axis_terms(sys, q),
                                                     TimeProfile::constant(0), 1.0, FieldRequirement::allow_vanishing);
        for (const auto& p : sample_points({0, 1}, fixtures::ranges_for(id), 50, 3)) {
            const Vec3 x = embed(sys, spec.frame(), p.t, p.omega);
            const auto a = vector_potential(spec, p.t, x, p.omega);
            v.require(a.A0 == q / x.norm() && a.A == Vec3::Zero(), "Coulomb route differs from q/|x|");
            const double b = vector_potential(generic, p.t, x, p.omega).A0;
            dual = std::max(dual, std::abs(b - q / x.norm()) / (q / x.norm()));
        }
    }
    v.require(dual <= 1e-12, "axis-term route deviates " + sci(dual));
    if (v.pass) {
        v.detail = "five systems max relative " + sci(worst) + "; eA0 = q/|x| bitwise, axis-term route within " +
                   sci(dual);
    }
    return v;
}

// 7. Hamilton-Jacobi actions.
Verdict hamilton_jacobi() {
    Verdict v;
    int code = 0;
    const auto cart = run_scenario("hj-cartesian", "hj", code);
    double c = NAN, s = NAN;
    v.require(code == 0, "hj-cartesian exit " + std::to_string(code));
    if (code == 0) {
        c = cart["result"]["report"]["summary"]["max_relative"].get<double>();
        v.require(c <= 1e-6, "cartesian " + sci(c));
    }
    const auto coul = run_scenario("hj-coulomb-spherical", "hj", code);
    v.require(code == 0, "hj-coulomb-spherical exit " + std::to_string(code));
    if (code == 0) {
        s = coul["result"]["report"]["summary"]["max_relative"].get<double>();
        v.require(s <= 1e-5, "coulomb spherical " + sci(s));
    }
    run_scenario("hj-turning-point", "hj", code);
    v.require(code == 2, "turning-point scenario exit " + std::to_string(code));
    if (v.pass) v.detail = "cartesian " + sci(c) + ", coulomb spherical " + sci(s) + ", negative radicand rejected (exit 2)";
    return v;
}

// 8. Jacobi elliptic functions.
Verdict elliptic_suite() {
    Verdict v;
    UniformStream rng(12);
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
        const double k = rng.uniform(0.0, 0.999);
        const double u = rng.uniform(-10, 10);
        const auto j = elliptic::jacobi(u, k);
        worst = std::max(worst, std::abs(j.sn * j.sn + j.cn * j.cn - 1.0));
        worst = std::max(worst, std::abs(j.dn * j.dn + k * k * j.sn * j.sn - 1.0));
    }
    v.require(worst <= 1e-12, "identity violation " + sci(worst));
    const double k = 0.8;
    const double half = elliptic::jacobi(elliptic::complete_K(k) / 2, k).sn;
    const double oracle = 1.0 / std::sqrt(1.0 + std::sqrt(1.0 - k * k));
    v.require(std::abs(half - oracle) <= 1e-12, "sn(K/2) off by " + sci(std::abs(half - oracle)));
    if (v.pass) v.detail = "identities " + sci(worst) + " over 1000 points; sn(K/2, 0.8) error " + sci(std::abs(half - oracle));
    return v;
}

// 9. Convergence order of the residual stencils.
Verdict fd_order() {
    Verdict v;
    const auto spec = PotentialSpec::magnetic(CoordinateSystem::make(SystemId::cartesian),
                                              FrameSpec::identity(SplitClass::complete), fixtures::zero_f0(),
                                              TimeProfile::constant(0), 1.0, FieldRequirement::allow_vanishing);
    const Vec3 k(2.0, -1.5, 1.0);
    const auto psi = [&](double t, const Vec3& x) { return std::exp(cplx(0, k.dot(x) - k.squaredNorm() * t)); };
    const Vec3 x(0.1, 0.2, 0.3);
    std::vector<double> hs{0.2, 0.1, 0.05, 0.025}, ls, le;
    for (double h : hs) {
        ls.push_back(std::log(h));
        le.push_back(std::log(std::abs(se_residual(psi, spec, 0.4, x, x, {h, h}).value)));
    }
    // Least-squares slope.
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        mx += ls[i] / hs.size();
        my += le[i] / hs.size();
    }
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        sxy += (ls[i] - mx) * (le[i] - my);
        sxx += (ls[i] - mx) * (ls[i] - mx);
    }
    const double slope = sxy / sxx;
    v.require(slope >= 3.5, "fitted slope " + sci(slope));
    if (v.pass) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "fitted slope %.2f over h = 0.2 .. 0.025", slope);
        v.detail = buf;
    }
    return v;
}

// 10. Byte-identical reruns of every shipped scenario.
Verdict determinism() {
    Verdict v;
    int scenarios = 0, files = 0;
    for (const auto& entry : fs::directory_iterator(kScenarios)) {
        const auto s = cli::load_scenario(entry.path().string());
        const std::string name = s.name;
        const fs::path a = kOut / ("det_a_" + name), b = kOut / ("det_b_" + name);
        fs::remove_all(a);
        fs::remove_all(b);
        const int ca = cli({*s.command, "--scenario", entry.path().string(), "--out", a.string()});
        const int cb = cli({*s.command, "--scenario", entry.path().string(), "--out", b.string()});
        v.require(ca == cb, name + " exit codes differ");
        ++scenarios;
        if (!fs::exists(a)) continue;
        for (const auto& f : fs::directory_iterator(a)) {
            v.require(slurp(f.path()) == slurp(b / f.path().filename()), name + "/" + f.path().filename().string());
            ++files;
        }
    }
    if (v.pass) v.detail = std::to_string(scenarios) + " scenarios, " + std::to_string(files) + " files identical";
    return v;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
        {"geometry suite", geometry_suite},
        {"frame suite", frame_suite},
        {"magnetic forward suite", magnetic_forward},
        {"electrostatic forward suite", electrostatic_forward},
        {"magnetic uniformity", magnetic_uniformity},
        {"coulomb demo", coulomb_demo},
        {"hamilton-jacobi suite", hamilton_jacobi},
        {"elliptic functions", elliptic_suite},
        {"finite-difference order", fd_order},
        {"determinism", determinism},
    };
    fs::create_directories(kOut);
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail = std::string("exception: ") + e.what();
        }
        failed += !v.pass;
        std::cout << "criterion " << (i + 1) << " (" << criteria[i].first << "): " << (v.pass ? "PASS" : "FAIL")
                  << "  " << v.detail << std::endl;
    }
    std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criteria fail") << std::endl;
    return failed == 0 ? 0 : 1;
}
