#include "scenario.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "emsep/errors.hpp"

namespace emsep::cli {

namespace {

using nlohmann::json;

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || item.key() == a;
        if (!ok) throw ConfigError(where + ": unknown key '" + item.key() + "'");
    }
}

double number(const json& j, const std::string& where) {
    if (!j.is_number()) throw ConfigError(where + ": expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError(where + ": must be finite");
    return v;
}

std::uint64_t count(const json& j, const std::string& where) {
    if (!j.is_number_unsigned()) throw ConfigError(where + ": expected a non-negative integer");
    return j.get<std::uint64_t>();
}

std::string text(const json& j, const std::string& where) {
    if (!j.is_string()) throw ConfigError(where + ": expected a string");
    return j.get<std::string>();
}

std::vector<double> numbers(const json& j, const std::string& where) {
    if (!j.is_array()) throw ConfigError(where + ": expected an array of numbers");
    std::vector<double> v;
    for (std::size_t i = 0; i < j.size(); ++i) v.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
    return v;
}

template <std::size_t N>
std::array<double, N> fixed(const json& j, const std::string& where) {
    const auto v = numbers(j, where);
    if (v.size() != N) throw ConfigError(where + ": expected " + std::to_string(N) + " entries");
    std::array<double, N> out{};
    for (std::size_t i = 0; i < N; ++i) out[i] = v[i];
    return out;
}

Interval interval(const json& j, const std::string& where) {
    const auto v = fixed<2>(j, where);
    if (!(v[0] < v[1])) throw ConfigError(where + ": lower end must be below upper end");
    return {v[0], v[1]};
}

cplx complex_value(const json& j, const std::string& where) {
    if (j.is_number()) return {number(j, where), 0.0};
    const auto v = fixed<2>(j, where);
    return {v[0], v[1]};
}

const json& list_of_three(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 3) throw ConfigError(where + ": expected three entries");
    return j;
}

std::string at(const std::string& where, std::size_t i) { return where + "[" + std::to_string(i) + "]"; }

SplitClass parse_split(const std::string& s) {
    if (s == "complete") return SplitClass::complete;
    if (s == "partial") return SplitClass::partial;
    if (s == "nonsplit") return SplitClass::nonsplit;
    throw ConfigError("frame.split_class: unknown class '" + s + "'");
}

void parse_system(const json& j, Scenario& s) {
    check_keys(j, {"id", "a", "k"}, "system");
    if (!j.contains("id")) throw ConfigError("system.id is required");
    s.system = parse_system_id(text(j["id"], "system.id"));
    if (j.contains("a")) s.a = number(j["a"], "system.a");
    if (j.contains("k")) s.k = number(j["k"], "system.k");
}

void parse_frame(const json& j, Scenario& s) {
    check_keys(j, {"split_class", "alpha", "beta", "gamma", "h", "w"}, "frame");
    if (j.contains("split_class")) s.split = parse_split(text(j["split_class"], "frame.split_class"));
    if (j.contains("alpha")) s.frame.alpha = parse_profile(j["alpha"], "frame.alpha");
    if (j.contains("beta")) s.frame.beta = parse_profile(j["beta"], "frame.beta");
    if (j.contains("gamma")) s.frame.gamma = parse_profile(j["gamma"], "frame.gamma");
    for (const char* key : {"h", "w"}) {
        if (!j.contains(key)) continue;
        s.frame_scaled = true;
        const std::string where = std::string("frame.") + key;
        const json& list = list_of_three(j[key], where);
        auto& target = key[0] == 'h' ? s.frame.h : s.frame.w;
        for (std::size_t i = 0; i < 3; ++i) target[i] = parse_profile(list[i], at(where, i));
    }
}

void parse_potential(const json& j, Scenario& s) {
    check_keys(j, {"kind", "charge", "f0", "t0_tilde", "q", "allow_vanishing_field"}, "potential");
    if (!j.contains("kind")) throw ConfigError("potential.kind is required");
    s.kind = parse_potential_kind(text(j["kind"], "potential.kind"));
    if (j.contains("charge")) s.charge = number(j["charge"], "potential.charge");
    const bool coulomb = s.kind == PotentialKind::coulomb;
    if (coulomb && (j.contains("f0") || j.contains("t0_tilde"))) {
        throw ConfigError("potential: the coulomb kind fixes f0 and t0_tilde");
    }
    if (!coulomb && j.contains("q")) throw ConfigError("potential.q applies to the coulomb kind only");
    if (j.contains("q")) s.q = number(j["q"], "potential.q");
    if (j.contains("f0")) {
        const json& list = list_of_three(j["f0"], "potential.f0");
        for (std::size_t i = 0; i < 3; ++i) s.f0[i] = numbers(list[i], at("potential.f0", i));
    }
    if (j.contains("t0_tilde")) s.t0_tilde = parse_profile(j["t0_tilde"], "potential.t0_tilde");
    if (j.contains("allow_vanishing_field")) {
        if (!j["allow_vanishing_field"].is_boolean()) throw ConfigError("potential.allow_vanishing_field: expected a boolean");
        if (s.kind != PotentialKind::magnetic) throw ConfigError("potential.allow_vanishing_field applies to the magnetic kind only");
        s.allow_vanishing_field = j["allow_vanishing_field"].get<bool>();
    }
}

void parse_initial(const json& j, Scenario& s) {
    const json& list = list_of_three(j, "initial");
    for (std::size_t i = 0; i < 3; ++i) {
        const std::string where = at("initial", i);
        check_keys(list[i], {"value", "slope"}, where);
        if (list[i].contains("value")) s.initial[i].value = complex_value(list[i]["value"], where + ".value");
        if (list[i].contains("slope")) s.initial[i].slope = complex_value(list[i]["slope"], where + ".slope");
    }
}

SeparationConstants constants(const json& j, const std::string& where) {
    const auto v = fixed<3>(j, where);
    return {v[0], v[1], v[2]};
}

}  // namespace

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

TimeProfile parse_profile(const json& j, const std::string& where) {
    if (j.is_number()) return TimeProfile::constant(number(j, where));
    if (!j.is_object() || j.size() != 1) throw ConfigError(where + ": expected a number or a one-key profile object");
    const auto& [key, body] = *j.items().begin();
    const std::string w = where + "." + key;
    if (key == "constant") return TimeProfile::constant(number(body, w));
    if (key == "polynomial") {
        auto c = numbers(body, w);
        if (c.empty()) throw ConfigError(w + ": needs at least one coefficient");
        return TimeProfile::polynomial(std::move(c));
    }
    if (key == "sinusoid") {
        check_keys(body, {"offset", "amplitude", "frequency", "phase"}, w);
        for (const char* r : {"amplitude", "frequency"}) {
            if (!body.contains(r)) throw ConfigError(w + "." + r + " is required");
        }
        return TimeProfile::sinusoid(body.contains("offset") ? number(body["offset"], w + ".offset") : 0.0,
                                     number(body["amplitude"], w + ".amplitude"),
                                     number(body["frequency"], w + ".frequency"),
                                     body.contains("phase") ? number(body["phase"], w + ".phase") : 0.0);
    }
    if (key == "exponential") {
        check_keys(body, {"scale", "rate"}, w);
        if (!body.contains("rate")) throw ConfigError(w + ".rate is required");
        return TimeProfile::exponential(body.contains("scale") ? number(body["scale"], w + ".scale") : 1.0,
                                        number(body["rate"], w + ".rate"));
    }
    if (key == "product") {
        if (!body.is_array() || body.empty()) throw ConfigError(w + ": expected a non-empty array of profiles");
        std::vector<TimeProfile> factors;
        for (std::size_t i = 0; i < body.size(); ++i) factors.push_back(parse_profile(body[i], at(w, i)));
        return TimeProfile::product(std::move(factors));
    }
    throw ConfigError(where + ": unknown profile type '" + key + "'");
}

Scenario parse_scenario(const std::string& contents) {
    json j;
    try {
        j = json::parse(contents);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("scenario is not valid JSON: ") + e.what());
    }
    check_keys(j,
               {"schema", "name", "command", "system", "frame", "potential", "lambda", "initial", "t_range",
                "t_anchor", "omega_ranges", "samples", "seed", "steps", "hj", "grid", "mutation", "output"},
               "scenario");
    if (!j.contains("schema") || !j["schema"].is_number_integer() || j["schema"].get<int>() != kSchemaVersion) {
        throw ConfigError("scenario: 'schema' must be " + std::to_string(kSchemaVersion));
    }
    for (const char* r : {"name", "system", "potential"}) {
        if (!j.contains(r)) throw ConfigError(std::string("scenario: '") + r + "' is required");
    }

    Scenario s;
    s.hash = fnv1a64(contents);
    s.name = text(j["name"], "name");
    if (j.contains("command")) s.command = text(j["command"], "command");
    parse_system(j["system"], s);
    if (j.contains("frame")) parse_frame(j["frame"], s);
    parse_potential(j["potential"], s);
    if (j.contains("lambda")) s.lambda = constants(j["lambda"], "lambda");
    if (j.contains("initial")) parse_initial(j["initial"], s);
    if (j.contains("t_range")) s.t_range = interval(j["t_range"], "t_range");
    s.t_anchor = j.contains("t_anchor") ? number(j["t_anchor"], "t_anchor") : s.t_range.lo;
    if (!s.t_range.contains(s.t_anchor)) throw ConfigError("t_anchor lies outside t_range");
    if (j.contains("omega_ranges")) {
        const json& list = list_of_three(j["omega_ranges"], "omega_ranges");
        std::array<Interval, 3> r{};
        for (std::size_t i = 0; i < 3; ++i) r[i] = interval(list[i], at("omega_ranges", i));
        s.omega_ranges = r;
    }
    if (j.contains("samples")) s.samples = count(j["samples"], "samples");
    if (s.samples == 0) throw ConfigError("samples must be positive");
    if (j.contains("seed")) s.seed = count(j["seed"], "seed");
    if (j.contains("steps")) {
        check_keys(j["steps"], {"ht", "hx"}, "steps");
        if (j["steps"].contains("ht")) s.steps.ht = number(j["steps"]["ht"], "steps.ht");
        if (j["steps"].contains("hx")) s.steps.hx = number(j["steps"]["hx"], "steps.hx");
        if (!(s.steps.ht > 0.0) || !(s.steps.hx > 0.0)) throw ConfigError("steps must be positive");
    }
    if (j.contains("hj")) {
        const json& h = j["hj"];
        check_keys(h, {"signs", "offsets"}, "hj");
        if (h.contains("signs")) {
            const auto v = fixed<3>(h["signs"], "hj.signs");
            for (std::size_t i = 0; i < 3; ++i) {
                if (v[i] != 1.0 && v[i] != -1.0) throw ConfigError("hj.signs entries must be +1 or -1");
                s.hj_signs[i] = static_cast<int>(v[i]);
            }
        }
        if (h.contains("offsets")) s.hj_offsets = fixed<3>(h["offsets"], "hj.offsets");
    }
    if (j.contains("grid")) {
        check_keys(j["grid"], {"points_per_axis", "times"}, "grid");
        if (j["grid"].contains("points_per_axis")) s.grid_points = count(j["grid"]["points_per_axis"], "grid.points_per_axis");
        if (j["grid"].contains("times")) s.grid_times = count(j["grid"]["times"], "grid.times");
        if (s.grid_points < 2 || s.grid_times < 1) throw ConfigError("grid needs points_per_axis >= 2 and times >= 1");
    }
    if (j.contains("mutation")) {
        check_keys(j["mutation"], {"phi0_lambda", "real_t0_only"}, "mutation");
        if (j["mutation"].contains("phi0_lambda")) s.phi0_lambda = constants(j["mutation"]["phi0_lambda"], "mutation.phi0_lambda");
        if (j["mutation"].contains("real_t0_only")) {
            if (!j["mutation"]["real_t0_only"].is_boolean()) throw ConfigError("mutation.real_t0_only: expected a boolean");
            s.real_t0_only = j["mutation"]["real_t0_only"].get<bool>();
        }
    }
    if (j.contains("output")) {
        check_keys(j["output"], {"dir"}, "output");
        if (j["output"].contains("dir")) s.out_dir = text(j["output"]["dir"], "output.dir");
    }
    if (s.kind == PotentialKind::coulomb && s.frame_scaled) {
        throw ConfigError("frame: the coulomb kind takes rotation angles only");
    }

    // Build once so module-level invariants fail at load time.
    (void)make_potential(s);
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("error while reading '" + path + "'");
    return parse_scenario(buf.str());
}

CoordinateSystem make_system(const Scenario& s) { return CoordinateSystem::make(s.system, s.a, s.k); }

FrameSpec make_frame(const Scenario& s) {
    const auto sys = make_system(s);
    return FrameSpec(s.frame, s.split.value_or(sys.split_class()), {s.t_range.lo, s.t_range.hi});
}

PotentialSpec make_potential(const Scenario& s) {
    const auto sys = make_system(s);
    if (s.kind == PotentialKind::coulomb) {
        return PotentialSpec::coulomb(sys, s.frame.alpha, s.frame.beta, s.frame.gamma, s.q, s.charge,
                                      {s.t_range.lo, s.t_range.hi});
    }
    std::array<AxisProfile, 3> f0;
    for (std::size_t i = 0; i < 3; ++i) {
        f0[i] = s.f0[i].empty() ? AxisProfile::zero() : AxisProfile::polynomial(s.f0[i]);
    }
    if (s.kind == PotentialKind::electrostatic) {
        return PotentialSpec::electrostatic(sys, make_frame(s), f0, s.t0_tilde, s.charge);
    }
    return PotentialSpec::magnetic(sys, make_frame(s), f0, s.t0_tilde, s.charge,
                                   s.allow_vanishing_field ? FieldRequirement::allow_vanishing
                                                           : FieldRequirement::nonvanishing);
}

}  // namespace emsep::cli
