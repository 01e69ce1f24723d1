#include "emsep/separate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <Eigen/SVD>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

#include "emsep/errors.hpp"
#include "emsep/stackel.hpp"

namespace emsep {

namespace {

constexpr int kRadicandGrid = 256;

void check_axis(const CoordinateSystem& system, int axis, double w) {
    if (axis < 1 || axis > 3) throw UsageError("axis must be 1, 2 or 3");
    const AxisDomain& d = system.domain()[static_cast<std::size_t>(axis - 1)];
    if (!std::isfinite(w) || !(w > d.regular_lo && w < d.regular_hi)) {
        throw DomainError(axis, w, "omega outside the regular domain of axis " + std::to_string(axis));
    }
}

void check_range(const CoordinateSystem& system, int axis, Interval r) {
    if (!(r.lo < r.hi)) throw ConfigError("omega range of axis " + std::to_string(axis) + " is empty");
    const AxisDomain& d = system.domain()[static_cast<std::size_t>(axis - 1)];
    if (std::isfinite(d.regular_lo) && r.lo < d.regular_lo + kDomainEps) {
        throw DomainError(axis, r.lo, "omega range reaches the singular boundary");
    }
    if (std::isfinite(d.regular_hi) && r.hi > d.regular_hi - kDomainEps) {
        throw DomainError(axis, r.hi, "omega range reaches the singular boundary");
    }
}

double sq(double v) { return v * v; }

/// Closed-form coefficient lists of the Coulomb separations (unit frame).
double coulomb_coefficient(const CoordinateSystem& sys, int axis, double w, const SeparationConstants& l, double q) {
    const double a = sys.a();
    switch (sys.id()) {
        case SystemId::spherical:
            if (axis == 1) return l[0] * std::pow(w, -4) - l[1] / (w * w) + q / (w * w * w);
            if (axis == 2) return l[1] / sq(std::cosh(w)) - l[2];
            return l[2];
        case SystemId::conical: {
            const auto& m = *sys.modulus();
            if (axis == 1) return l[0] * std::pow(w, -4) - l[1] / (w * w) + q / (w * w * w);
            if (axis == 2) return l[1] * sq(m.kprime * elliptic::jacobi(w, m.kprime).cn) - l[2];
            return l[1] * sq(m.k * elliptic::jacobi(w, m.k).cn) + l[2];
        }
        case SystemId::prolate_spheroidal_ii_plus:
        case SystemId::prolate_spheroidal_ii_minus: {
            const double pm = sys.id() == SystemId::prolate_spheroidal_ii_plus ? -1.0 : 1.0;
            if (axis == 1) {
                const double s = std::sinh(w);
                return l[0] * a * a * std::pow(s, -4) - l[1] / (s * s) - l[2] + q * a * std::cosh(w) / (s * s * s);
            }
            if (axis == 2) {
                const double c = std::cosh(w);
                return l[0] * a * a * std::pow(c, -4) + l[1] / (c * c) - l[2] + pm * q * a * std::sinh(w) / (c * c * c);
            }
            return l[2];
        }
        case SystemId::parabolic:
            if (axis == 1) return l[0] * std::exp(4 * w) - l[1] * std::exp(2 * w) - l[2] + 2 * q * std::exp(2 * w);
            if (axis == 2) return l[0] * std::exp(4 * w) + l[1] * std::exp(2 * w) - l[2];
            return l[2];
        default:
            throw UsageError("no Coulomb coefficient list for " + std::string(sys.name()));
    }
}

double generic_coefficient(const PotentialSpec& spec, int axis, double w, const SeparationConstants& l) {
    const auto row = stackel_row(spec.system(), axis, w);
    return spec.f0()[static_cast<std::size_t>(axis - 1)](w) + row[0] * l[0] + row[1] * l[1] + row[2] * l[2];
}

template <class F>
cplx gauss_fixed(const F& f, double a, double b) {
    using Rule = boost::math::quadrature::gauss<double, 20>;
    const auto& x = Rule::abscissa();
    const auto& wt = Rule::weights();
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    cplx s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (x[j] == 0.0) {
            s += wt[j] * f(mid);
        } else {
            s += wt[j] * (f(mid - half * x[j]) + f(mid + half * x[j]));
        }
    }
    return s * half;
}

double adaptive(const std::function<double(double)>& f, double a, double b) {
    double err = 0.0;
    double l1 = 0.0;
    const double v =
        boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, 1e-11, &err, &l1);
    if (!std::isfinite(v) || err > 1e-11 * std::max(l1, 1.0)) {
        throw QuadratureError("adaptive quadrature did not reach 1e-11 on [" + std::to_string(a) + ", " +
                              std::to_string(b) + "]");
    }
    return v;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

SeparationConstants::SeparationConstants(double l1, double l2, double l3) : values{l1, l2, l3} {
    for (double v : values) {
        if (!std::isfinite(v)) throw ConfigError("separation constants must be finite reals");
    }
}

double ode_coefficient(const PotentialSpec& spec, int axis, double omega_a, const SeparationConstants& lambda) {
    check_axis(spec.system(), axis, omega_a);
    if (spec.kind() == PotentialKind::coulomb) {
        return coulomb_coefficient(spec.system(), axis, omega_a, lambda, spec.q());
    }
    return generic_coefficient(spec, axis, omega_a, lambda);
}

std::array<double, 3> separation_rank(const PotentialSpec& spec, double t, const Vec3& omega) {
    Eigen::Matrix<double, 4, 3> m;
    const auto T = t_functions(spec.system(), spec.frame(), t);
    m.row(0) << T[0], T[1], T[2];
    m.bottomRows<3>() = stackel_values(spec.system(), omega);
    Eigen::JacobiSVD<Eigen::Matrix<double, 4, 3>> svd(m);
    const auto s = svd.singularValues();
    return {s[0], s[1], s[2]};
}

// ---------------------------------------------------------------------------

HermiteTable::HermiteTable(std::vector<double> nodes, std::vector<cplx> f, std::vector<cplx> df,
                           std::vector<cplx> d2f)
    : nodes_(std::move(nodes)), f_(std::move(f)), df_(std::move(df)), d2f_(std::move(d2f)) {
    const std::size_t n = nodes_.size();
    if (n < 2 || f_.size() != n || df_.size() != n || d2f_.size() != n) {
        throw ConfigError("interpolant needs at least two nodes with matching data columns");
    }
    for (std::size_t i = 1; i < n; ++i) {
        if (!(nodes_[i] > nodes_[i - 1])) throw ConfigError("interpolant nodes must be strictly increasing");
    }
}

CJet HermiteTable::eval(double x) const {
    const double lo = nodes_.front();
    const double hi = nodes_.back();
    const double slack = 1e-12 * (1.0 + std::abs(lo) + std::abs(hi));
    if (!(x >= lo - slack && x <= hi + slack)) {
        throw DomainError(0, x, "interpolant evaluated outside [" + fmt(lo) + ", " + fmt(hi) + "]");
    }
    x = std::clamp(x, lo, hi);
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
    std::size_t i = it == nodes_.begin() ? 0 : static_cast<std::size_t>(it - nodes_.begin()) - 1;
    if (i >= nodes_.size() - 1) i = nodes_.size() - 2;

    const double h = nodes_[i + 1] - nodes_[i];
    const double s = (x - nodes_[i]) / h;
    const cplx c0 = f_[i];
    const cplx c1 = h * df_[i];
    const cplx c2 = 0.5 * h * h * d2f_[i];
    const cplx A = f_[i + 1] - c0 - c1 - c2;
    const cplx B = h * df_[i + 1] - c1 - 2.0 * c2;
    const cplx C = h * h * d2f_[i + 1] - 2.0 * c2;
    const cplx c3 = 10.0 * A - 4.0 * B + 0.5 * C;
    const cplx c4 = -15.0 * A + 7.0 * B - C;
    const cplx c5 = 6.0 * A - 3.0 * B + 0.5 * C;

    const cplx p = c0 + s * (c1 + s * (c2 + s * (c3 + s * (c4 + s * c5))));
    const cplx dp = c1 + s * (2.0 * c2 + s * (3.0 * c3 + s * (4.0 * c4 + s * 5.0 * c5)));
    const cplx d2p = 2.0 * c2 + s * (6.0 * c3 + s * (12.0 * c4 + s * 20.0 * c5));
    return {p, dp / h, d2p / (h * h)};
}

void HermiteTable::write_csv(std::ostream& os) const {
    os << "omega,re_phi,im_phi,re_dphi,im_dphi,re_d2phi,im_d2phi\n";
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        os << fmt(nodes_[i]) << ',' << fmt(f_[i].real()) << ',' << fmt(f_[i].imag()) << ','
           << fmt(df_[i].real()) << ',' << fmt(df_[i].imag()) << ',' << fmt(d2f_[i].real()) << ','
           << fmt(d2f_[i].imag()) << '\n';
    }
}

HermiteTable HermiteTable::read_csv(std::istream& is) {
    std::vector<double> x;
    std::vector<cplx> f, df, d2f;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#' || std::isalpha(static_cast<unsigned char>(line[0]))) continue;
        std::istringstream row(line);
        std::array<double, 7> v{};
        for (std::size_t j = 0; j < v.size(); ++j) {
            std::string cell;
            if (!std::getline(row, cell, ',')) throw ConfigError("interpolant CSV row has fewer than 7 columns");
            try {
                v[j] = std::stod(cell);
            } catch (const std::exception&) {
                throw ConfigError("interpolant CSV cell is not a number: '" + cell + "'");
            }
        }
        x.push_back(v[0]);
        f.emplace_back(v[1], v[2]);
        df.emplace_back(v[3], v[4]);
        d2f.emplace_back(v[5], v[6]);
    }
    return HermiteTable(std::move(x), std::move(f), std::move(df), std::move(d2f));
}

// ---------------------------------------------------------------------------

CumulativeIntegral::CumulativeIntegral(std::function<cplx(double)> f, Interval range, double anchor,
                                       double spacing)
    : f_(std::move(f)), range_(range) {
    if (!(range.lo <= anchor && anchor <= range.hi)) {
        throw ConfigError("anchor " + fmt(anchor) + " lies outside the integration range");
    }
    const double width = range.hi - range.lo;
    const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(width / spacing)));
    nodes_.resize(n + 1);
    values_.assign(n + 1, 0.0);
    for (std::size_t i = 0; i <= n; ++i) nodes_[i] = range.lo + width * static_cast<double>(i) / static_cast<double>(n);
    nodes_[n] = range.hi;

    const std::function<double(double)> re = [this](double x) { return f_(x).real(); };
    const std::function<double(double)> im = [this](double x) { return f_(x).imag(); };
    for (std::size_t i = 1; i <= n; ++i) {
        if (nodes_[i] == nodes_[i - 1]) {
            values_[i] = values_[i - 1];
            continue;
        }
        values_[i] = values_[i - 1] + cplx(adaptive(re, nodes_[i - 1], nodes_[i]), adaptive(im, nodes_[i - 1], nodes_[i]));
    }
    const cplx base = (*this)(anchor);
    for (auto& v : values_) v -= base;
}

cplx CumulativeIntegral::operator()(double x) const {
    const double slack = 1e-12 * (1.0 + std::abs(range_.lo) + std::abs(range_.hi));
    if (!range_.contains(x, slack)) {
        throw DomainError(0, x, "integral evaluated outside [" + fmt(range_.lo) + ", " + fmt(range_.hi) + "]");
    }
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), x);
    std::size_t j = static_cast<std::size_t>(it - nodes_.begin());
    if (j == nodes_.size()) j = nodes_.size() - 1;
    if (j > 0 && std::abs(nodes_[j - 1] - x) <= std::abs(nodes_[j] - x)) --j;
    if (nodes_[j] == x) return values_[j];
    return values_[j] + gauss_fixed(f_, nodes_[j], x);
}

// ---------------------------------------------------------------------------

HermiteTable integrate_linear_ode(const std::function<double(double)>& coefficient, Interval range,
                                  InitialData init) {
    namespace ode = boost::numeric::odeint;
    using State = std::array<double, 4>;  // Re phi, Im phi, Re phi', Im phi'

    const auto rhs = [&coefficient](const State& y, State& dy, double w) {
        const double c = coefficient(w);
        dy[0] = y[2];
        dy[1] = y[3];
        dy[2] = c * y[0];
        dy[3] = c * y[1];
    };

    const double width = range.hi - range.lo;
    if (!(width > 0.0)) throw ConfigError("integration range is empty");
    const double max_dt = std::min(0.01, width / 32.0);
    auto stepper = ode::make_controlled(1e-12, 1e-10, max_dt, ode::runge_kutta_dopri5<State>());

    State y{init.value.real(), init.value.imag(), init.slope.real(), init.slope.imag()};
    std::vector<double> nodes;
    std::vector<cplx> f, df, d2f;
    const auto record = [&](double w) {
        const double c = coefficient(w);
        const cplx v(y[0], y[1]);
        nodes.push_back(w);
        f.push_back(v);
        df.emplace_back(y[2], y[3]);
        d2f.push_back(c * v);
    };

    double w = range.lo;
    double dt = max_dt / 8.0;
    record(w);
    const double underflow = 1e-13 * (1.0 + std::abs(range.lo) + std::abs(range.hi));
    while (w < range.hi) {
        const bool last = w + dt >= range.hi;
        if (last) dt = range.hi - w;
        const double before = w;
        const auto result = stepper.try_step(rhs, y, w, dt);
        if (result == ode::success) {
            if (last) w = range.hi;
            if (!(std::isfinite(y[0]) && std::isfinite(y[1]) && std::isfinite(y[2]) && std::isfinite(y[3]))) {
                throw IntegrationError("solution overflowed", w);
            }
            if (w > before) record(w);
        } else if (dt < underflow) {
            throw IntegrationError("step size underflow (coefficient blow-up?)", w);
        }
    }
    return HermiteTable(std::move(nodes), std::move(f), std::move(df), std::move(d2f));
}

HermiteTable solve_phi_a(const PotentialSpec& spec, int axis, const SeparationConstants& lambda, Interval range,
                         InitialData init) {
    check_range(spec.system(), axis, range);
    const auto c = [&](double w) { return ode_coefficient(spec, axis, w, lambda); };
    return integrate_linear_ode(c, range, init);
}

// ---------------------------------------------------------------------------

Phi0::Phi0(std::function<cplx(double)> rate, Interval range, double anchor)
    : exponent_(std::move(rate), range, anchor), anchor_(anchor) {}

cplx Phi0::operator()(double t) const { return std::exp(cplx(0.0, -1.0) * exponent_(t)); }

Phi0 solve_phi0(const PotentialSpec& spec, const SeparationConstants& lambda, Interval t_range, double anchor,
                bool real_t0_only) {
    auto rate = [spec, lambda, real_t0_only](double t) {
        cplx t0 = t0_profile(spec, t);
        if (real_t0_only) t0 = t0.real();
        const auto T = t_functions(spec.system(), spec.frame(), t);
        return t0 - (T[0] * lambda[0] + T[1] * lambda[1] + T[2] * lambda[2]);
    };
    return Phi0(rate, t_range, anchor);
}

// ---------------------------------------------------------------------------

SeparatedSolution::SeparatedSolution(PotentialSpec spec, SeparationConstants lambda, Phi0 phi0,
                                     std::array<HermiteTable, 3> phi, Modulation q)
    : spec_(std::move(spec)), lambda_(lambda), phi0_(std::move(phi0)), phi_(std::move(phi)), q_(q) {
    for (int a = 1; a <= 3; ++a) check_range(spec_.system(), a, phi_[static_cast<std::size_t>(a - 1)].range());
}

SeparatedSolution SeparatedSolution::build(PotentialSpec spec, SeparationConstants lambda,
                                           const SeparationSetup& setup) {
    std::array<HermiteTable, 3> phi;
    std::array<std::exception_ptr, 3> failure;
#pragma omp parallel for
    for (int a = 0; a < 3; ++a) {
        try {
            phi[static_cast<std::size_t>(a)] = solve_phi_a(spec, a + 1, lambda, setup.omega_ranges[static_cast<std::size_t>(a)],
                                                           setup.initial[static_cast<std::size_t>(a)]);
        } catch (...) {
            failure[static_cast<std::size_t>(a)] = std::current_exception();
        }
    }
    for (const auto& e : failure) {
        if (e) std::rethrow_exception(e);
    }
    Phi0 phi0 = solve_phi0(spec, setup.phi0_lambda_override.value_or(lambda), setup.t_range, setup.t_anchor,
                           setup.real_t0_only);
    const Modulation q = setup.modulation_override.value_or(
        spec.kind() == PotentialKind::electrostatic ? Modulation::phase : Modulation::unit);
    return SeparatedSolution(std::move(spec), lambda, std::move(phi0), std::move(phi), q);
}

cplx SeparatedSolution::at(double t, const Vec3& x, const Vec3& omega) const {
    cplx psi = phi0_(t);
    for (int a = 0; a < 3; ++a) {
        try {
            psi *= phi_[static_cast<std::size_t>(a)](omega[a]);
        } catch (const DomainError& e) {
            throw DomainError(a + 1, omega[a], std::string("axis ") + std::to_string(a + 1) + ": " + e.what());
        }
    }
    if (q_ == Modulation::phase) psi *= std::exp(cplx(0.0, phase_formula(spec_.frame(), t, x)));
    return psi;
}

cplx SeparatedSolution::evaluate(double t, const Vec3& x, const Vec3& omega_hint) const {
    const Vec3 omega = omega_at(spec_.system(), spec_.frame(), t, x, omega_hint);
    return at(t, x, omega);
}

cplx SeparatedSolution::evaluate_at(double t, const Vec3& omega) const {
    return at(t, embed(spec_.system(), spec_.frame(), t, omega), omega);
}

cplx evaluate_psi(const SeparatedSolution& solution, double t, const Vec3& x, const Vec3& omega_hint) {
    return solution.evaluate(t, x, omega_hint);
}

// ---------------------------------------------------------------------------

double hj_radicand(const PotentialSpec& spec, int axis, double omega_a, const SeparationConstants& lambda) {
    check_axis(spec.system(), axis, omega_a);
    const auto row = stackel_row(spec.system(), axis, omega_a);
    return -spec.f0()[static_cast<std::size_t>(axis - 1)](omega_a) + row[0] * lambda[0] + row[1] * lambda[1] +
           row[2] * lambda[2];
}

HJAction hj_solve(const PotentialSpec& spec, const SeparationConstants& lambda, const HJSetup& setup) {
    HJAction u(spec, lambda);
    for (int a = 1; a <= 3; ++a) {
        const auto idx = static_cast<std::size_t>(a - 1);
        const Interval r = setup.omega_ranges[idx];
        check_range(spec.system(), a, r);
        const int sign = setup.signs[idx];
        if (sign != 1 && sign != -1) throw ConfigError("HJ branch signs must be +1 or -1");
        for (int n = 0; n < kRadicandGrid; ++n) {
            const double w = r.lo + (r.hi - r.lo) * n / (kRadicandGrid - 1);
            if (hj_radicand(spec, a, w, lambda) < 0.0) {
                throw TurningPointError(a, w, "negative radicand on axis " + std::to_string(a) + " at omega = " + fmt(w));
            }
        }
        auto integrand = [spec, lambda, a, sign](double w) -> cplx {
            const double rad = hj_radicand(spec, a, w, lambda);
            if (rad < 0.0) throw TurningPointError(a, w, "negative radicand at omega = " + fmt(w));
            return sign * std::sqrt(rad);
        };
        u.phi_[idx] = CumulativeIntegral(integrand, r, r.lo);
    }
    auto rate = [spec, lambda](double t) -> cplx {
        const auto T = t_functions(spec.system(), spec.frame(), t);
        return -spec.t0_tilde()(t) - (T[0] * lambda[0] + T[1] * lambda[1] + T[2] * lambda[2]);
    };
    u.phi0_ = CumulativeIntegral(rate, setup.t_range, setup.t_anchor);
    u.offsets_ = setup.offsets;
    return u;
}

double HJAction::phi(int axis, double omega) const {
    const auto idx = static_cast<std::size_t>(axis - 1);
    return phi_[idx](omega).real() + offsets_[idx];
}

double HJAction::at(double t, const Vec3& x, const Vec3& omega) const {
    double u = phi0(t);
    for (int a = 1; a <= 3; ++a) u += phi(a, omega[a - 1]);
    if (spec_.kind() == PotentialKind::electrostatic) u += phase_factor_S(spec_, t, x);
    return u;
}

double HJAction::evaluate(double t, const Vec3& x, const Vec3& omega_hint) const {
    return at(t, x, omega_at(spec_.system(), spec_.frame(), t, x, omega_hint));
}

double HJAction::evaluate_at(double t, const Vec3& omega) const {
    return at(t, embed(spec_.system(), spec_.frame(), t, omega), omega);
}

}  // namespace emsep
