#pragma once

// Reduced ODEs of the separation Ansatz, their numerical solution and the
// reconstruction of separated Schroedinger wave functions and
// Hamilton-Jacobi actions.

#include <array>
#include <complex>
#include <iosfwd>
#include <vector>

#include "emsep/potential.hpp"

namespace emsep {

using cplx = std::complex<double>;

struct SeparationConstants {
    std::array<double, 3> values{0.0, 0.0, 0.0};

    SeparationConstants() = default;
    /// Throws ConfigError unless all finite.
    SeparationConstants(double l1, double l2, double l3);

    double operator[](int i) const { return values[static_cast<std::size_t>(i)]; }
};

/// F_{a0}(omega_a) + sum_i F_{ai}(omega_a) lambda_i. For the Coulomb kind the
/// coefficient is taken from the closed-form example lists.
double ode_coefficient(const PotentialSpec& spec, int axis, double omega_a, const SeparationConstants& lambda);

/// Singular values (descending) of the 4x3 matrix with rows (T_1, T_2, T_3)
/// and F_{a.}(omega_a); full rank means the solution depends on all three
/// constants.
std::array<double, 3> separation_rank(const PotentialSpec& spec, double t, const Vec3& omega);

struct Interval {
    double lo;
    double hi;
    bool contains(double v, double slack = 0.0) const { return v >= lo - slack && v <= hi + slack; }
};

/// Value with first and second derivative.
struct CJet {
    cplx value;
    cplx d1;
    cplx d2;
};

/// Piecewise quintic Hermite interpolant of a complex function using stored
/// values and first and second derivatives at the nodes.
class HermiteTable {
public:
    HermiteTable() = default;
    HermiteTable(std::vector<double> nodes, std::vector<cplx> f, std::vector<cplx> df, std::vector<cplx> d2f);

    /// Throws DomainError outside [front, back] (tolerance 1e-12 relative).
    CJet eval(double x) const;
    cplx operator()(double x) const { return eval(x).value; }

    Interval range() const { return {nodes_.front(), nodes_.back()}; }
    std::size_t size() const { return nodes_.size(); }
    const std::vector<double>& nodes() const { return nodes_; }

    /// Columns: omega, Re phi, Im phi, Re phi', Im phi', Re phi'', Im phi''.
    void write_csv(std::ostream& os) const;
    /// Inverse of write_csv; header lines starting with '#' or a letter are skipped.
    static HermiteTable read_csv(std::istream& is);

private:
    std::vector<double> nodes_;
    std::vector<cplx> f_;
    std::vector<cplx> df_;
    std::vector<cplx> d2f_;
};

/// Integral of a smooth function from an anchor, tabulated at nodes by
/// adaptive Gauss-Kronrod and completed by a fixed Gauss rule from the
/// nearest node.
class CumulativeIntegral {
public:
    CumulativeIntegral() = default;
    /// Integrates on [range.lo, range.hi] with node spacing at most `spacing`.
    CumulativeIntegral(std::function<cplx(double)> f, Interval range, double anchor, double spacing = 0.05);

    cplx operator()(double x) const;
    Interval range() const { return range_; }

private:
    std::function<cplx(double)> f_;
    Interval range_{0.0, 0.0};
    std::vector<double> nodes_;
    std::vector<cplx> values_;
};

/// Initial data (phi, phi') at the start of an omega range.
struct InitialData {
    cplx value{1.0, 0.0};
    cplx slope{0.0, 0.0};
};

/// Integrates phi'' = c(omega) phi from range.lo to range.hi with a
/// Dormand-Prince 5(4) pair (rtol 1e-10, atol 1e-12); every accepted step
/// becomes an interpolation node. Throws IntegrationError on step underflow.
HermiteTable integrate_linear_ode(const std::function<double(double)>& coefficient, Interval range,
                                  InitialData init);

HermiteTable solve_phi_a(const PotentialSpec& spec, int axis, const SeparationConstants& lambda, Interval range,
                         InitialData init);

/// phi0(t) = exp(-i int_{t0}^t (T0 - T_i lambda_i)).
class Phi0 {
public:
    Phi0() = default;
    Phi0(std::function<cplx(double)> rate, Interval range, double anchor);
    cplx operator()(double t) const;
    double anchor() const { return anchor_; }
    Interval range() const { return exponent_.range(); }

private:
    CumulativeIntegral exponent_;
    double anchor_ = 0.0;
};

/// `real_t0_only` drops the imaginary part of T0 (negative control).
Phi0 solve_phi0(const PotentialSpec& spec, const SeparationConstants& lambda, Interval t_range, double anchor,
                bool real_t0_only = false);

enum class Modulation { unit, phase };

struct SeparationSetup {
    Interval t_range{0.0, 1.0};
    double t_anchor = 0.0;
    std::array<Interval, 3> omega_ranges{};
    std::array<InitialData, 3> initial{};
    /// Negative-control switches; defaults give the correct construction.
    bool real_t0_only = false;
    std::optional<Modulation> modulation_override;
    std::optional<SeparationConstants> phi0_lambda_override;
};

/// psi(t, x) = Q phi0(t) prod phi_a(omega_a(t, x)). Immutable.
class SeparatedSolution {
public:
    /// Axes are integrated concurrently.
    static SeparatedSolution build(PotentialSpec spec, SeparationConstants lambda, const SeparationSetup& setup);

    /// Assembles a solution from stored interpolants.
    SeparatedSolution(PotentialSpec spec, SeparationConstants lambda, Phi0 phi0, std::array<HermiteTable, 3> phi,
                      Modulation q);

    cplx evaluate(double t, const Vec3& x, const Vec3& omega_hint) const;
    /// Same at a known omega; x is computed by embedding.
    cplx evaluate_at(double t, const Vec3& omega) const;

    const PotentialSpec& spec() const { return spec_; }
    const SeparationConstants& lambda() const { return lambda_; }
    const HermiteTable& phi(int axis) const { return phi_[static_cast<std::size_t>(axis - 1)]; }
    const Phi0& phi0() const { return phi0_; }
    Modulation modulation() const { return q_; }

private:
    cplx at(double t, const Vec3& x, const Vec3& omega) const;

    PotentialSpec spec_;
    SeparationConstants lambda_;
    Phi0 phi0_;
    std::array<HermiteTable, 3> phi_;
    Modulation q_;
};

cplx evaluate_psi(const SeparatedSolution& solution, double t, const Vec3& x, const Vec3& omega_hint);

struct HJSetup {
    Interval t_range{0.0, 1.0};
    double t_anchor = 0.0;
    std::array<Interval, 3> omega_ranges{};
    std::array<int, 3> signs{1, 1, 1};
    std::array<double, 3> offsets{0.0, 0.0, 0.0};
};

/// u(t, x) = S + phi0(t) + sum phi_a(omega_a(t, x)).
class HJAction {
public:
    double evaluate(double t, const Vec3& x, const Vec3& omega_hint) const;
    double evaluate_at(double t, const Vec3& omega) const;

    const PotentialSpec& spec() const { return spec_; }
    double phi0(double t) const { return phi0_(t).real(); }
    double phi(int axis, double omega) const;

private:
    friend HJAction hj_solve(const PotentialSpec&, const SeparationConstants&, const HJSetup&);
    HJAction(PotentialSpec spec, SeparationConstants lambda) : spec_(std::move(spec)), lambda_(lambda) {}
    double at(double t, const Vec3& x, const Vec3& omega) const;

    PotentialSpec spec_;
    SeparationConstants lambda_;
    CumulativeIntegral phi0_;
    std::array<CumulativeIntegral, 3> phi_;
    std::array<double, 3> offsets_{};
};

/// Radicand -F_{a0} + F_{ai} lambda_i of the HJ reduced equation.
double hj_radicand(const PotentialSpec& spec, int axis, double omega_a, const SeparationConstants& lambda);

/// Throws TurningPointError when a radicand is negative on the 256-point
/// validation grid of any range.
HJAction hj_solve(const PotentialSpec& spec, const SeparationConstants& lambda, const HJSetup& setup);

}  // namespace emsep
