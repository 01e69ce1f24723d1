#include "emsep/profile.hpp"

#include <cmath>
#include <sstream>

namespace emsep {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Jet polynomial_jet(const std::vector<double>& c, double t) {
    // Horner for p, p', p'' together.
    Jet j;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        j.d2 = j.d2 * t + 2.0 * j.d1;
        j.d1 = j.d1 * t + j.value;
        j.value = j.value * t + *it;
    }
    return j;
}

}  // namespace

Jet TimeProfile::jet(double t) const {
    return std::visit(
        Overloaded{
            [](const Constant& c) { return Jet{c.value, 0.0, 0.0}; },
            [t](const Polynomial& p) { return polynomial_jet(p.coefficients, t); },
            [t](const Sinusoid& s) {
                const double arg = s.frequency * t + s.phase;
                const double sv = std::sin(arg);
                const double cv = std::cos(arg);
                return Jet{s.offset + s.amplitude * sv, s.amplitude * s.frequency * cv,
                           -s.amplitude * s.frequency * s.frequency * sv};
            },
            [t](const Exponential& e) {
                const double v = e.scale * std::exp(e.rate * t);
                return Jet{v, e.rate * v, e.rate * e.rate * v};
            },
            [t](const Product& p) {
                Jet acc{1.0, 0.0, 0.0};
                for (const auto& f : p.factors) {
                    const Jet g = f.jet(t);
                    acc = Jet{acc.value * g.value, acc.d1 * g.value + acc.value * g.d1,
                              acc.d2 * g.value + 2.0 * acc.d1 * g.d1 + acc.value * g.d2};
                }
                return acc;
            },
        },
        node_);
}

bool TimeProfile::is_constant() const {
    return std::visit(
        Overloaded{
            [](const Constant&) { return true; },
            [](const Polynomial& p) {
                for (std::size_t j = 1; j < p.coefficients.size(); ++j) {
                    if (p.coefficients[j] != 0.0) return false;
                }
                return true;
            },
            [](const Sinusoid& s) { return s.amplitude == 0.0 || s.frequency == 0.0; },
            [](const Exponential& e) { return e.rate == 0.0 || e.scale == 0.0; },
            [](const Product& p) {
                for (const auto& f : p.factors) {
                    if (!f.is_constant()) return false;
                }
                return true;
            },
        },
        node_);
}

AxisProfile AxisProfile::zero() { return AxisProfile(); }

AxisProfile AxisProfile::polynomial(std::vector<double> coefficients) {
    bool all_zero = true;
    for (double c : coefficients) all_zero = all_zero && c == 0.0;
    if (all_zero) return zero();
    std::ostringstream name;
    name << "poly[";
    for (std::size_t j = 0; j < coefficients.size(); ++j) name << (j ? "," : "") << coefficients[j];
    name << "]";
    return AxisProfile(name.str(), [c = std::move(coefficients)](double w) {
        double v = 0.0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * w + *it;
        return v;
    });
}

}  // namespace emsep
