#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace emsep {

/// Value with its first and second time derivatives.
struct Jet {
    double value = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

/// Smooth scalar function of time with analytic derivatives. Immutable.
class TimeProfile {
public:
    struct Constant {
        double value;
    };
    /// sum_j coefficients[j] * t^j
    struct Polynomial {
        std::vector<double> coefficients;
    };
    /// offset + amplitude * sin(frequency * t + phase)
    struct Sinusoid {
        double offset;
        double amplitude;
        double frequency;
        double phase;
    };
    /// scale * exp(rate * t)
    struct Exponential {
        double scale;
        double rate;
    };
    struct Product {
        std::vector<TimeProfile> factors;
    };

    TimeProfile() : node_(Constant{0.0}) {}

    static TimeProfile constant(double c) { return TimeProfile(Constant{c}); }
    static TimeProfile polynomial(std::vector<double> coefficients) {
        return TimeProfile(Polynomial{std::move(coefficients)});
    }
    static TimeProfile sinusoid(double offset, double amplitude, double frequency, double phase = 0.0) {
        return TimeProfile(Sinusoid{offset, amplitude, frequency, phase});
    }
    static TimeProfile exponential(double scale, double rate) { return TimeProfile(Exponential{scale, rate}); }
    static TimeProfile product(std::vector<TimeProfile> factors) {
        return TimeProfile(Product{std::move(factors)});
    }

    Jet jet(double t) const;
    double operator()(double t) const { return jet(t).value; }

    /// True when the profile is constant by construction (no time dependence).
    bool is_constant() const;

private:
    using Node = std::variant<Constant, Polynomial, Sinusoid, Exponential, Product>;
    explicit TimeProfile(Node node) : node_(std::move(node)) {}

    Node node_;
};

/// Value-only function of a single coordinate omega_a (used for F_{a0}).
class AxisProfile {
public:
    AxisProfile() = default;
    AxisProfile(std::string name, std::function<double(double)> fn)
        : name_(std::move(name)), fn_(std::move(fn)) {}

    static AxisProfile zero();
    static AxisProfile polynomial(std::vector<double> coefficients);

    double operator()(double omega) const { return fn_ ? fn_(omega) : 0.0; }
    const std::string& name() const { return name_; }
    bool is_zero() const { return !fn_; }

private:
    std::string name_ = "zero";
    std::function<double(double)> fn_;
};

}  // namespace emsep
