#include "app.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include "emsep/errors.hpp"
#include "emsep/stackel.hpp"
#include "scenario.hpp"

namespace emsep::cli {

namespace {

using nlohmann::json;

struct Flags {
    std::string scenario;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> samples;
    std::optional<double> assert_tol;
    std::string solution;
};

/// What a command produced before it is written to disk.
struct Outcome {
    json result;
    std::string csv;
    /// Compared against --assert-tol; NaN always fails.
    double metric = 0.0;
    std::string summary;
    std::vector<std::pair<std::string, std::string>> files;
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string short_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

const std::array<Interval, 3>& require_ranges(const Scenario& s) {
    if (!s.omega_ranges) throw ConfigError("scenario needs omega_ranges for this command");
    return *s.omega_ranges;
}

const SeparationConstants& require_lambda(const Scenario& s) {
    if (!s.lambda) throw ConfigError("scenario needs lambda for this command");
    return *s.lambda;
}

SeparationSetup separation_setup(const Scenario& s) {
    SeparationSetup setup;
    setup.t_range = s.t_range;
    setup.t_anchor = s.t_anchor;
    setup.omega_ranges = require_ranges(s);
    setup.initial = s.initial;
    setup.real_t0_only = s.real_t0_only;
    setup.phi0_lambda_override = s.phi0_lambda;
    return setup;
}

std::vector<SamplePoint> points_for(const Scenario& s) {
    return sample_points(s.t_range, require_ranges(s), s.samples, s.seed);
}

double min_rank(const PotentialSpec& spec, const std::vector<SamplePoint>& pts) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& p : pts) m = std::min(m, separation_rank(spec, p.t, p.omega)[2]);
    return m;
}

std::string csv_of(const ResidualReport& r) {
    std::ostringstream os;
    write_csv(os, r);
    return os.str();
}

std::string residual_summary(const std::string& what, const ResidualReport& r) {
    return what + ": " + std::to_string(r.points.size()) + " points, max relative residual " +
           short_num(r.max_relative()) + ", failures " + std::to_string(r.failures());
}

Outcome residual_outcome(const std::string& what, const ResidualReport& r, json extra) {
    Outcome o;
    extra["report"] = to_json(r);
    o.result = std::move(extra);
    o.csv = csv_of(r);
    o.metric = r.max_relative();
    o.summary = residual_summary(what, r);
    return o;
}

std::string phi_csv(const HermiteTable& table) {
    std::ostringstream os;
    table.write_csv(os);
    return os.str();
}

Outcome cmd_separate(const Scenario& s) {
    const auto spec = make_potential(s);
    const auto sol = SeparatedSolution::build(spec, require_lambda(s), separation_setup(s));
    const auto pts = points_for(s);
    const auto rep = se_sweep(sol, pts, s.steps);
    json extra{{"lambda", {sol.lambda()[0], sol.lambda()[1], sol.lambda()[2]}},
               {"modulation", sol.modulation() == Modulation::phase ? "phase" : "unit"},
               {"min_singular_value", min_rank(spec, pts)}};
    Outcome o = residual_outcome("separate", rep, std::move(extra));
    for (int a = 1; a <= 3; ++a) o.files.emplace_back("phi_" + std::to_string(a) + ".csv", phi_csv(sol.phi(a)));
    return o;
}

HermiteTable read_phi(const std::string& dir, int axis) {
    const std::string path = (std::filesystem::path(dir) / ("phi_" + std::to_string(axis) + ".csv")).string();
    std::ifstream in(path);
    if (!in) throw IoError("cannot read '" + path + "'");
    return HermiteTable::read_csv(in);
}

Outcome cmd_verify(const Scenario& s, const Flags& f) {
    const auto spec = make_potential(s);
    const auto& lambda = require_lambda(s);
    std::optional<SeparatedSolution> sol;
    if (f.solution.empty()) {
        sol = SeparatedSolution::build(spec, lambda, separation_setup(s));
    } else {
        std::array<HermiteTable, 3> phi{read_phi(f.solution, 1), read_phi(f.solution, 2), read_phi(f.solution, 3)};
        const auto phi0 = solve_phi0(spec, s.phi0_lambda.value_or(lambda), s.t_range, s.t_anchor, s.real_t0_only);
        const Modulation q = spec.kind() == PotentialKind::electrostatic ? Modulation::phase : Modulation::unit;
        sol.emplace(spec, lambda, phi0, std::move(phi), q);
    }
    const auto rep = se_sweep(*sol, points_for(s), s.steps);
    json extra{{"solution", f.solution.empty() ? "rebuilt" : "stored"}};
    return residual_outcome("verify", rep, std::move(extra));
}

Outcome cmd_hj(const Scenario& s) {
    HJSetup setup;
    setup.t_range = s.t_range;
    setup.t_anchor = s.t_anchor;
    setup.omega_ranges = require_ranges(s);
    setup.signs = s.hj_signs;
    setup.offsets = s.hj_offsets;
    const auto action = hj_solve(make_potential(s), require_lambda(s), setup);
    const auto rep = hj_sweep(action, points_for(s), s.steps);
    return residual_outcome("hj", rep, json::object());
}

Outcome cmd_audit(const Scenario& s) {
    const auto sys = make_system(s);
    const auto frame = s.kind == PotentialKind::coulomb ? make_potential(s).frame() : make_frame(s);
    const auto rep = s.omega_ranges ? geometry_audit_at(sys, frame, points_for(s))
                                    : geometry_audit(sys, frame, s.t_range.lo, s.samples, s.seed);
    Outcome o;
    o.result = {{"report", to_json(rep)}};
    std::ostringstream os;
    write_csv(os, rep);
    o.csv = os.str();
    const double worst = std::max({rep.max_orthogonality(), rep.max_stackel(), rep.max_metric(), rep.max_harmonicity()});
    o.metric = rep.failures() > 0 ? std::numeric_limits<double>::quiet_NaN() : worst;
    o.summary = "audit-geometry " + rep.system + ": " + std::to_string(rep.points.size()) +
                " points, orthogonality " + short_num(rep.max_orthogonality()) + ", stackel " +
                short_num(rep.max_stackel()) + ", harmonicity " + short_num(rep.max_harmonicity()) + ", metric " +
                short_num(rep.max_metric()) + ", failures " + std::to_string(rep.failures());
    return o;
}

Outcome cmd_build_potential(const Scenario& s) {
    const auto spec = make_potential(s);
    const auto& ranges = require_ranges(s);
    const std::size_t n = s.grid_points;
    std::ostringstream csv;
    csv << "t,omega1,omega2,omega3,x1,x2,x3,A0,A1,A2,A3,B1,B2,B3\n";
    json times = json::array();
    double worst_spread = 0.0;
    for (std::size_t k = 0; k < s.grid_times; ++k) {
        const double t = s.grid_times == 1 ? s.t_range.lo
                                           : s.t_range.lo + (s.t_range.hi - s.t_range.lo) * static_cast<double>(k) /
                                                                static_cast<double>(s.grid_times - 1);
        std::optional<Vec3> first_B;
        double spread = 0.0;
        for (std::size_t i = 0; i < n * n * n; ++i) {
            const std::size_t idx[3] = {i / (n * n), (i / n) % n, i % n};
            Vec3 w;
            for (int a = 0; a < 3; ++a) {
                const auto& r = ranges[static_cast<std::size_t>(a)];
                w[a] = r.lo + (r.hi - r.lo) * static_cast<double>(idx[a]) / static_cast<double>(n - 1);
            }
            const Vec3 x = embed(spec.system(), spec.frame(), t, w);
            const auto v = vector_potential(spec, t, x, w);
            const Vec3 B = magnetic_field(spec, t, x);
            if (!first_B) first_B = B;
            spread = std::max(spread, (B - *first_B).cwiseAbs().maxCoeff());
            csv << num(t) << ',' << num(w[0]) << ',' << num(w[1]) << ',' << num(w[2]) << ',' << num(x[0]) << ','
                << num(x[1]) << ',' << num(x[2]) << ',' << num(v.A0) << ',' << num(v.A[0]) << ',' << num(v.A[1])
                << ',' << num(v.A[2]) << ',' << num(B[0]) << ',' << num(B[1]) << ',' << num(B[2]) << '\n';
        }
        worst_spread = std::max(worst_spread, spread);
        times.push_back({{"t", t},
                         {"B", {(*first_B)[0], (*first_B)[1], (*first_B)[2]}},
                         {"B_spread", spread},
                         {"div_A", divergence_A(spec, t)}});
    }
    Outcome o;
    o.result = {{"kind", std::string(to_string(spec.kind()))},
                {"grid_points", n * n * n},
                {"times", std::move(times)},
                {"max_B_spread", worst_spread}};
    o.csv = csv.str();
    o.metric = worst_spread;
    o.summary = "build-potential: " + std::to_string(n * n * n * s.grid_times) + " grid values, field spread " +
                short_num(worst_spread);
    return o;
}

std::array<Interval, 3> demo_ranges(SystemId id) {
    switch (id) {
        case SystemId::parabolic: return {{{-0.5, 0.3}, {-0.5, 0.3}, {0.3, 2.0}}};
        case SystemId::conical: return {{{0.5, 1.5}, {0.3, 1.0}, {0.3, 1.5}}};
        case SystemId::spherical: return {{{0.5, 1.5}, {-0.5, 0.5}, {0.3, 2.0}}};
        default: return {{{0.5, 1.2}, {-0.5, 0.5}, {0.3, 2.0}}};
    }
}

Outcome cmd_coulomb_demo(const Scenario& s) {
    const double q = s.kind == PotentialKind::coulomb ? s.q : 1.0;
    const SeparationConstants lambda = s.lambda.value_or(SeparationConstants(0.5, 1.5, -0.5));
    json systems = json::array();
    std::ostringstream csv;
    csv << "system,points,max_relative,mean_relative,failures,dual_route_max_deviation\n";
    double worst = 0.0;
    std::string summary = "coulomb-demo (q = " + short_num(q) + ")";
    for (SystemId id : {SystemId::spherical, SystemId::prolate_spheroidal_ii_plus,
                        SystemId::prolate_spheroidal_ii_minus, SystemId::parabolic, SystemId::conical}) {
        const auto sys = CoordinateSystem::make(id, s.a, s.k);
        const auto spec = PotentialSpec::coulomb(sys, s.frame.alpha, s.frame.beta, s.frame.gamma, q, s.charge,
                                                 {s.t_range.lo, s.t_range.hi});
        SeparationSetup setup;
        setup.t_range = s.t_range;
        setup.t_anchor = s.t_anchor;
        setup.omega_ranges = demo_ranges(id);
        setup.initial = s.initial;
        const auto sol = SeparatedSolution::build(spec, lambda, setup);
        const auto pts = sample_points(s.t_range, setup.omega_ranges, s.samples, s.seed);
        const auto rep = se_sweep(sol, pts, s.steps);

        // Same frame, generic magnetic construction from the axis terms.
        const auto dual = PotentialSpec::magnetic(sys, spec.frame(), coulomb_axis_terms(sys, q), TimeProfile::constant(0),
                                                  s.charge, FieldRequirement::allow_vanishing);
        double deviation = 0.0;
        for (const auto& p : pts) {
            const Vec3 x = embed(sys, spec.frame(), p.t, p.omega);
            const double a = vector_potential(spec, p.t, x, p.omega).A0;
            const double b = vector_potential(dual, p.t, x, p.omega).A0;
            deviation = std::max(deviation, std::abs(a - b) / std::max(1.0, std::abs(a)));
        }
        const std::string name(sys.name());
        systems.push_back({{"system", name}, {"dual_route_max_deviation", deviation}, {"report", to_json(rep)}});
        csv << name << ',' << rep.points.size() << ',' << num(rep.max_relative()) << ',' << num(rep.mean_relative())
            << ',' << rep.failures() << ',' << num(deviation) << '\n';
        const double m = rep.max_relative();
        worst = std::isnan(m) || std::isnan(worst) ? std::numeric_limits<double>::quiet_NaN() : std::max(worst, m);
        summary += "\n  " + residual_summary(name, rep) + ", dual route " + short_num(deviation);
    }
    Outcome o;
    o.result = {{"q", q}, {"lambda", {lambda[0], lambda[1], lambda[2]}}, {"systems", std::move(systems)}};
    o.csv = csv.str();
    o.metric = worst;
    o.summary = summary;
    return o;
}

std::string domain_end(double v) {
    if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void list_systems(std::ostream& out) {
    for (SystemId id : all_system_ids()) {
        const auto sys = CoordinateSystem::make(id);
        out << sys.name() << "  case " << sys.case_number() << "  " << to_string(sys.split_class());
        for (const auto& d : sys.domain()) {
            out << "  " << (d.lo_closed ? '[' : '(') << domain_end(d.lo) << ", " << domain_end(d.hi)
                << (d.hi_closed ? ']' : ')');
        }
        out << '\n';
    }
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot write '" + path.string() + "'");
    os << contents;
    os.close();
    if (!os) throw IoError("error while writing '" + path.string() + "'");
}

int execute(const std::string& command, const Flags& f, std::ostream& out) {
    if (command == "list-systems") {
        list_systems(out);
        return ok;
    }
    Scenario s = load_scenario(f.scenario);
    if (f.seed) s.seed = *f.seed;
    if (f.samples) {
        if (*f.samples == 0) throw ConfigError("--samples must be positive");
        s.samples = *f.samples;
    }

    Outcome o;
    if (command == "separate") o = cmd_separate(s);
    else if (command == "verify") o = cmd_verify(s, f);
    else if (command == "hj") o = cmd_hj(s);
    else if (command == "audit-geometry") o = cmd_audit(s);
    else if (command == "build-potential") o = cmd_build_potential(s);
    else o = cmd_coulomb_demo(s);

    const std::string provenance_line = "# tool=emsep version=" + std::string(kToolVersion) + " command=" + command +
                                        " scenario=" + s.name + " fnv1a64=" + hex64(s.hash) +
                                        " seed=" + std::to_string(s.seed) + " samples=" + std::to_string(s.samples) + "\n";
    json report{{"provenance",
                 {{"tool", "emsep"},
                  {"version", kToolVersion},
                  {"command", command},
                  {"scenario", s.name},
                  {"scenario_fnv1a64", hex64(s.hash)},
                  {"seed", s.seed},
                  {"samples", s.samples}}},
                {"result", std::move(o.result)}};
    const bool pass = !f.assert_tol || (std::isfinite(o.metric) && o.metric <= *f.assert_tol);
    if (f.assert_tol) report["assert"] = {{"tolerance", *f.assert_tol}, {"metric", o.metric}, {"passed", pass}};

    const std::filesystem::path dir(f.out.empty() ? s.out_dir : f.out);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
    write_file(dir / "report.json", report.dump(2) + "\n");
    write_file(dir / "report.csv", provenance_line + o.csv);
    for (const auto& [name, contents] : o.files) write_file(dir / name, provenance_line + contents);

    out << o.summary << '\n';
    if (!pass) {
        out << "assert-tol " << short_num(*f.assert_tol) << " violated: metric " << short_num(o.metric) << '\n';
        return numeric_error;
    }
    return ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Separation of variables for Schroedinger and Hamilton-Jacobi equations in EM fields", "emsep"};
    app.require_subcommand(1);
    Flags f;
    std::string command;

    const auto add = [&](const std::string& name, const std::string& help, bool scenario) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->callback([&command, name] { command = name; });
        if (!scenario) return sub;
        sub->add_option("--scenario", f.scenario, "Scenario JSON file")->required();
        sub->add_option("--out", f.out, "Output directory (overrides the scenario)");
        sub->add_option("--seed", f.seed, "Sampling seed (overrides the scenario)");
        sub->add_option("--samples", f.samples, "Number of sample points (overrides the scenario)");
        sub->add_option("--assert-tol", f.assert_tol, "Exit with status 2 when the headline metric exceeds this");
        return sub;
    };
    add("list-systems", "Print the coordinate systems and their domains", false);
    add("audit-geometry", "Orthogonality, Staeckel, harmonicity and metric audit", true);
    add("build-potential", "Tabulate A0, A and B on an omega grid", true);
    add("separate", "Build the separated solution, write phi_<a>.csv and its residual report", true);
    add("verify", "Residual report for a stored or rebuilt solution", true)
        ->add_option("--solution", f.solution, "Directory holding phi_1.csv .. phi_3.csv");
    add("hj", "Build the Hamilton-Jacobi action and its residual report", true);
    add("coulomb-demo", "Coulomb field in its five separating systems", true);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return config_error;
    }

    try {
        return execute(command, f, out);
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << '\n';
        return io_error;
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return config_error;
    } catch (const NumericError& e) {
        err << "numerical error: " << e.what() << '\n';
        return numeric_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return numeric_error;
    }
}

}  // namespace emsep::cli
