#pragma once

// Scenario files: versioned JSON describing one separation problem.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "emsep/potential.hpp"
#include "emsep/separate.hpp"
#include "emsep/verify.hpp"

namespace emsep::cli {

inline constexpr int kSchemaVersion = 1;

struct Scenario {
    std::string name;
    std::optional<std::string> command;

    SystemId system = SystemId::cartesian;
    double a = 1.0;
    double k = 0.6;

    FrameProfiles frame;
    std::optional<SplitClass> split;
    /// True when the file set h or w (not allowed for the Coulomb kind).
    bool frame_scaled = false;

    PotentialKind kind = PotentialKind::magnetic;
    double charge = 1.0;
    std::array<std::vector<double>, 3> f0{};
    TimeProfile t0_tilde = TimeProfile::constant(0.0);
    double q = 1.0;
    bool allow_vanishing_field = false;

    std::optional<SeparationConstants> lambda;
    std::array<InitialData, 3> initial{};
    Interval t_range{0.0, 1.0};
    double t_anchor = 0.0;
    std::optional<std::array<Interval, 3>> omega_ranges;

    std::size_t samples = 100;
    std::uint64_t seed = 1;
    Steps steps;

    std::array<int, 3> hj_signs{1, 1, 1};
    std::array<double, 3> hj_offsets{0.0, 0.0, 0.0};

    std::size_t grid_points = 4;
    std::size_t grid_times = 3;

    /// Mutation switches for negative controls.
    std::optional<SeparationConstants> phi0_lambda;
    bool real_t0_only = false;

    std::string out_dir = "out";
    /// FNV-1a 64 of the file bytes.
    std::uint64_t hash = 0;
};

std::uint64_t fnv1a64(const std::string& bytes);

/// Parses and validates; throws ConfigError on any schema violation,
/// including unknown keys.
Scenario parse_scenario(const std::string& text);

/// Reads the file (IoError when unreadable) and parses it.
Scenario load_scenario(const std::string& path);

TimeProfile parse_profile(const nlohmann::json& j, const std::string& where);

CoordinateSystem make_system(const Scenario& s);
FrameSpec make_frame(const Scenario& s);
PotentialSpec make_potential(const Scenario& s);

}  // namespace emsep::cli
