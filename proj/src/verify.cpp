#include "emsep/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <ostream>

#include "emsep/errors.hpp"
#include "emsep/stackel.hpp"

namespace emsep {

namespace {

constexpr cplx I{0.0, 1.0};

template <class T>
T d1(const T& p2, const T& p1, const T& m1, const T& m2, double h) {
    return (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * h);
}

template <class T>
T d2(const T& p2, const T& p1, const T& c, const T& m1, const T& m2, double h) {
    return (-p2 + 16.0 * p1 - 30.0 * c + 16.0 * m1 - m2) / (12.0 * h * h);
}

/// Value, gradient and Laplacian of a scalar field by 5-point stencils.
template <class T>
struct SpatialStencil {
    T center;
    std::array<T, 3> grad;
    T lap;
};

template <class T, class F>
SpatialStencil<T> spatial(const F& f, const Vec3& x, double h, bool with_lap) {
    SpatialStencil<T> s{f(x), {}, T{}};
    for (int j = 0; j < 3; ++j) {
        Vec3 e = Vec3::Zero();
        e[j] = h;
        const T p1 = f(x + e), m1 = f(x - e), p2 = f(x + 2.0 * e), m2 = f(x - 2.0 * e);
        s.grad[static_cast<std::size_t>(j)] = d1(p2, p1, m1, m2, h);
        if (with_lap) s.lap += d2(p2, p1, s.center, m1, m2, h);
    }
    return s;
}

template <class F>
auto guarded(const F& f) {
    return [&f](auto&&... args) {
        try {
            return f(std::forward<decltype(args)>(args)...);
        } catch (const StencilError&) {
            throw;
        } catch (const Error& e) {
            throw StencilError(std::string("stencil node failed: ") + e.what());
        }
    };
}

template <class Kernel>
std::vector<PointRecord> run_points(std::size_t n, Execution exec, const Kernel& kernel) {
    std::vector<PointRecord> out(n);
    const auto one = [&](std::size_t i) {
        try {
            out[i] = kernel(i);
        } catch (const std::exception& e) {
            out[i].index = i;
            out[i].error = e.what();
            out[i].residual = out[i].relative = std::numeric_limits<double>::quiet_NaN();
        }
    };
    if (exec == Execution::serial) {
        for (std::size_t i = 0; i < n; ++i) one(i);
    } else {
        const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t i = 0; i < count; ++i) one(static_cast<std::size_t>(i));
    }
    return out;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

nlohmann::json vec_json(const Vec3& v) { return nlohmann::json::array({v[0], v[1], v[2]}); }

double fold_max(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) {
        if (std::isnan(x)) return x;
        m = std::max(m, x);
    }
    return m;
}

}  // namespace

Residual se_residual(const ComplexField& psi, const PotentialSpec& spec, double t, const Vec3& x,
                     const Vec3& omega_hint, Steps steps) {
    const auto f = guarded(psi);
    const double k = steps.ht;
    const auto at_t = [&](const Vec3& y) { return f(t, y); };
    const auto s = spatial<cplx>(at_t, x, steps.hx, true);
    const cplx dt = d1(f(t + 2 * k, x), f(t + k, x), f(t - k, x), f(t - 2 * k, x), k);

    const double e = spec.e_charge();
    const PotentialValue pv = vector_potential(spec, t, x, omega_hint);
    const Vec3 eA = e * pv.A;
    const double eA0 = e * pv.A0;
    const double ediv = e * divergence_A(spec, t);
    const cplx adv = eA[0] * s.grad[0] + eA[1] * s.grad[1] + eA[2] * s.grad[2];

    const std::array<cplx, 6> terms{I * dt, -eA0 * s.center, s.lap, 2.0 * I * adv, I * ediv * s.center,
                                    -eA.squaredNorm() * s.center};
    cplx sum = 0.0;
    double scale = 0.0;
    for (const cplx& term : terms) {
        sum += term;
        scale = std::max(scale, std::abs(term));
    }
    return {sum, scale};
}

Residual stationary_residual(const std::function<cplx(const Vec3&)>& psi, const std::function<double(const Vec3&)>& A0,
                             const std::function<Vec3(const Vec3&)>& A, double e_charge, double E, const Vec3& x,
                             double hx) {
    const auto f = guarded(psi);
    const auto s = spatial<cplx>(f, x, hx, true);
    double div = 0.0;
    for (int j = 0; j < 3; ++j) {
        Vec3 d = Vec3::Zero();
        d[j] = hx;
        div += d1(A(x + 2.0 * d)[j], A(x + d)[j], A(x - d)[j], A(x - 2.0 * d)[j], hx);
    }
    const Vec3 eA = e_charge * A(x);
    const cplx adv = eA[0] * s.grad[0] + eA[1] * s.grad[1] + eA[2] * s.grad[2];
    const std::array<cplx, 6> terms{-s.lap,
                                    -2.0 * I * adv,
                                    -I * e_charge * div * s.center,
                                    eA.squaredNorm() * s.center,
                                    e_charge * A0(x) * s.center,
                                    E * s.center};
    cplx sum = 0.0;
    double scale = 0.0;
    for (const cplx& term : terms) {
        sum += term;
        scale = std::max(scale, std::abs(term));
    }
    return {sum, scale};
}

Residual hj_residual(const RealField& u, const PotentialSpec& spec, double t, const Vec3& x, const Vec3& omega_hint,
                     Steps steps) {
    const auto f = guarded(u);
    const double k = steps.ht;
    const auto at_t = [&](const Vec3& y) { return f(t, y); };
    const auto s = spatial<double>(at_t, x, steps.hx, false);
    const double dt = d1(f(t + 2 * k, x), f(t + k, x), f(t - k, x), f(t - 2 * k, x), k);

    const double e = spec.e_charge();
    const PotentialValue pv = vector_potential(spec, t, x, omega_hint);
    const Vec3 p = Vec3(s.grad[0], s.grad[1], s.grad[2]) + e * pv.A;
    const std::array<double, 3> terms{dt, e * pv.A0, p.squaredNorm()};
    return {terms[0] + terms[1] + terms[2],
            std::max({std::abs(terms[0]), std::abs(terms[1]), std::abs(terms[2])})};
}

std::vector<SamplePoint> sample_points(const Interval& t_range, const std::array<Interval, 3>& omega_ranges,
                                       std::size_t n, std::uint64_t seed, double margin) {
    UniformStream rng(seed);
    const auto inner = [margin](const Interval& r) {
        const double m = margin * (r.hi - r.lo);
        return Interval{r.lo + m, r.hi - m};
    };
    const Interval tr = inner(t_range);
    std::array<Interval, 3> wr{inner(omega_ranges[0]), inner(omega_ranges[1]), inner(omega_ranges[2])};
    std::vector<SamplePoint> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        SamplePoint p{rng.uniform(tr.lo, tr.hi), Vec3::Zero()};
        for (int a = 0; a < 3; ++a) p.omega[a] = rng.uniform(wr[static_cast<std::size_t>(a)].lo, wr[static_cast<std::size_t>(a)].hi);
        out.push_back(p);
    }
    return out;
}

Steps local_steps(const PotentialSpec& spec, const SamplePoint& p, Steps base) {
    const Vec3 r2 = metric_r_squared(spec.system(), spec.frame(), p.t, p.omega);
    const double ell = std::sqrt(r2.minCoeff());
    return {base.ht, base.hx * std::min(1.0, ell)};
}

double ResidualReport::max_relative() const {
    std::vector<double> v;
    for (const auto& p : points) v.push_back(p.relative);
    return fold_max(v);
}

double ResidualReport::max_residual() const {
    std::vector<double> v;
    for (const auto& p : points) v.push_back(p.residual);
    return fold_max(v);
}

double ResidualReport::mean_relative() const {
    if (points.empty()) return 0.0;
    double s = 0.0;
    for (const auto& p : points) s += p.relative;
    return s / static_cast<double>(points.size());
}

std::size_t ResidualReport::failures() const {
    return static_cast<std::size_t>(
        std::count_if(points.begin(), points.end(), [](const PointRecord& p) { return !p.error.empty(); }));
}

ResidualReport se_sweep(const SeparatedSolution& solution, const std::vector<SamplePoint>& points, Steps steps,
                        Execution exec) {
    const PotentialSpec& spec = solution.spec();
    const auto kernel = [&](std::size_t i) {
        const SamplePoint& p = points[i];
        const Vec3 x = embed(spec.system(), spec.frame(), p.t, p.omega);
        const ComplexField psi = [&](double t, const Vec3& y) { return solution.evaluate(t, y, p.omega); };
        const Residual r = se_residual(psi, spec, p.t, x, p.omega, local_steps(spec, p, steps));
        return PointRecord{i, p.t, x, p.omega, std::abs(r.value), r.scale, r.relative(), {}};
    };
    return {"schroedinger", steps, run_points(points.size(), exec, kernel)};
}

ResidualReport hj_sweep(const HJAction& action, const std::vector<SamplePoint>& points, Steps steps, Execution exec) {
    const PotentialSpec& spec = action.spec();
    const auto kernel = [&](std::size_t i) {
        const SamplePoint& p = points[i];
        const Vec3 x = embed(spec.system(), spec.frame(), p.t, p.omega);
        const RealField u = [&](double t, const Vec3& y) { return action.evaluate(t, y, p.omega); };
        const Residual r = hj_residual(u, spec, p.t, x, p.omega, local_steps(spec, p, steps));
        return PointRecord{i, p.t, x, p.omega, std::abs(r.value), r.scale, r.relative(), {}};
    };
    return {"hamilton_jacobi", steps, run_points(points.size(), exec, kernel)};
}

// ---------------------------------------------------------------------------

namespace {

GeometryRecord audit_point(const CoordinateSystem& sys, const FrameSpec& frame, std::size_t index,
                           const SamplePoint& p, const StackelOverride& stackel) {
    GeometryRecord rec;
    rec.index = index;
    rec.omega = p.omega;
    const double t = p.t;
    const Vec3& w = p.omega;

    const Mat3 G = omega_gradients(sys, frame, t, w);
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            const double c = std::abs(G.row(i).dot(G.row(j))) / (G.row(i).norm() * G.row(j).norm());
            rec.orthogonality = std::max(rec.orthogonality, c);
        }
    }

    const Mat3 F = stackel ? stackel(sys, w) : stackel_values(sys, w);
    const auto T = t_functions(sys, frame, t);
    for (int a = 0; a < 3; ++a) {
        double sum = 0.0;
        double scale = std::abs(T[static_cast<std::size_t>(a)]);
        for (int i = 0; i < 3; ++i) {
            const double term = F(i, a) * G.row(i).squaredNorm();
            sum += term;
            scale = std::max(scale, std::abs(term));
        }
        const double diff = std::abs(sum - T[static_cast<std::size_t>(a)]);
        rec.stackel = std::max(rec.stackel, scale > 0.0 ? diff / scale : diff);
    }

    const FrameState s = frame_state(frame, t);
    const Mat3 Jx = s.rotation * s.scaling().asDiagonal() * jacobian(sys, w);
    const Vec3 r2 = metric_r_squared(sys, frame, t, w);
    for (int i = 0; i < 3; ++i) {
        const double col = Jx.col(i).squaredNorm();
        rec.metric = std::max(rec.metric, std::abs(r2[i] - col) / col);
    }

    const double ell = std::sqrt(r2.minCoeff());
    const Vec3 x = embed(sys, frame, t, w);
    const Vec3 lap = ridders_laplacian([&](const Vec3& y) { return omega_at(sys, frame, t, y, w); }, x, 0.05 * ell);
    rec.harmonicity = lap.cwiseAbs().maxCoeff() * ell * ell;
    return rec;
}

double geo_max(const GeometryReport& r, double GeometryRecord::*field) {
    std::vector<double> v;
    for (const auto& p : r.points) v.push_back(p.*field);
    return fold_max(v);
}

}  // namespace

Vec3 ridders_laplacian(const std::function<Vec3(const Vec3&)>& f, const Vec3& x, double h0, double* error) {
    if (!(h0 > 0.0) || !std::isfinite(h0)) throw ConfigError("initial Laplacian step must be positive");
    constexpr int levels = 13;
    const Vec3 centre = f(x);
    constexpr double eps = std::numeric_limits<double>::epsilon();
    // Second difference at step h and its rounding floor: evaluation noise
    // in f plus the perturbation of x +- h itself, both divided by h^2.
    const auto second_difference = [&](double h, double& noise) {
        Vec3 lap = Vec3::Zero();
        noise = 0.0;
        for (int j = 0; j < 3; ++j) {
            Vec3 e = Vec3::Zero();
            e[j] = h;
            const Vec3 fp = f(x + e);
            const Vec3 fm = f(x - e);
            lap += (fp + fm - 2.0 * centre) / (h * h);
            const double values = fp.cwiseAbs().maxCoeff() + fm.cwiseAbs().maxCoeff() + 2.0 * centre.cwiseAbs().maxCoeff();
            const double slope = (fp - fm).cwiseAbs().maxCoeff() / (2.0 * h);
            noise += 4.0 * eps * (values + (x.cwiseAbs().maxCoeff() + h) * slope) / (h * h);
        }
        return lap;
    };
    // Tableau of halved steps; the error series is in even powers of h.
    std::array<std::array<Vec3, levels>, levels> a;
    double h = h0;
    double noise = 0.0;
    double best_err = std::numeric_limits<double>::infinity();
    Vec3 best = second_difference(h, noise);
    a[0][0] = best;
    for (int i = 1; i < levels; ++i) {
        h /= 2.0;
        a[0][static_cast<std::size_t>(i)] = second_difference(h, noise);
        double fac = 4.0;
        for (int j = 1; j <= i; ++j) {
            const auto J = static_cast<std::size_t>(j);
            const auto I = static_cast<std::size_t>(i);
            a[J][I] = (a[J - 1][I] * fac - a[J - 1][I - 1]) / (fac - 1.0);
            fac *= 4.0;
            const double err = std::max({(a[J][I] - a[J - 1][I]).cwiseAbs().maxCoeff(),
                                         (a[J][I] - a[J - 1][I - 1]).cwiseAbs().maxCoeff(), noise});
            if (err <= best_err) {
                best_err = err;
                best = a[J][I];
            }
        }
    }
    if (error) *error = best_err;
    return best;
}

double GeometryReport::max_orthogonality() const { return geo_max(*this, &GeometryRecord::orthogonality); }
double GeometryReport::max_stackel() const { return geo_max(*this, &GeometryRecord::stackel); }
double GeometryReport::max_harmonicity() const { return geo_max(*this, &GeometryRecord::harmonicity); }
double GeometryReport::max_metric() const { return geo_max(*this, &GeometryRecord::metric); }

std::size_t GeometryReport::failures() const {
    return static_cast<std::size_t>(
        std::count_if(points.begin(), points.end(), [](const GeometryRecord& p) { return !p.error.empty(); }));
}

GeometryReport geometry_audit_at(const CoordinateSystem& system, const FrameSpec& frame,
                                 const std::vector<SamplePoint>& points, Execution exec,
                                 const StackelOverride& stackel) {
    GeometryReport report{std::string(system.name()), points.empty() ? 0.0 : points.front().t, {}};
    report.points.resize(points.size());
    const auto one = [&](std::size_t i) {
        try {
            report.points[i] = audit_point(system, frame, i, points[i], stackel);
        } catch (const std::exception& e) {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            report.points[i] = GeometryRecord{i, points[i].omega, nan, nan, nan, nan, e.what()};
        }
    };
    if (exec == Execution::serial) {
        for (std::size_t i = 0; i < points.size(); ++i) one(i);
    } else {
        const auto count = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t i = 0; i < count; ++i) one(static_cast<std::size_t>(i));
    }
    return report;
}

GeometryReport geometry_audit(const CoordinateSystem& system, const FrameSpec& frame, double t, std::size_t n,
                              std::uint64_t seed, Execution exec, const StackelOverride& stackel) {
    std::vector<SamplePoint> points;
    for (const Vec3& w : sample_domain(system, seed, n)) points.push_back({t, w});
    auto report = geometry_audit_at(system, frame, points, exec, stackel);
    report.t = t;
    return report;
}

// ---------------------------------------------------------------------------

void write_csv(std::ostream& os, const ResidualReport& report) {
    os << "index,t,x1,x2,x3,omega1,omega2,omega3,residual,scale,relative,error\n";
    for (const auto& p : report.points) {
        os << p.index << ',' << fmt(p.t) << ',' << fmt(p.x[0]) << ',' << fmt(p.x[1]) << ',' << fmt(p.x[2]) << ','
           << fmt(p.omega[0]) << ',' << fmt(p.omega[1]) << ',' << fmt(p.omega[2]) << ',' << fmt(p.residual) << ','
           << fmt(p.scale) << ',' << fmt(p.relative) << ',' << '"' << p.error << '"' << '\n';
    }
}

void write_csv(std::ostream& os, const GeometryReport& report) {
    os << "index,omega1,omega2,omega3,orthogonality,stackel,harmonicity,metric,error\n";
    for (const auto& p : report.points) {
        os << p.index << ',' << fmt(p.omega[0]) << ',' << fmt(p.omega[1]) << ',' << fmt(p.omega[2]) << ','
           << fmt(p.orthogonality) << ',' << fmt(p.stackel) << ',' << fmt(p.harmonicity) << ',' << fmt(p.metric)
           << ',' << '"' << p.error << '"' << '\n';
    }
}

nlohmann::json to_json(const ResidualReport& report) {
    nlohmann::json points = nlohmann::json::array();
    for (const auto& p : report.points) {
        nlohmann::json j{{"index", p.index},       {"t", p.t},         {"x", vec_json(p.x)},
                         {"omega", vec_json(p.omega)}, {"residual", p.residual}, {"scale", p.scale},
                         {"relative", p.relative}};
        if (!p.error.empty()) j["error"] = p.error;
        points.push_back(std::move(j));
    }
    return {{"equation", report.equation},
            {"steps", {{"ht", report.steps.ht}, {"hx", report.steps.hx}}},
            {"summary",
             {{"count", report.points.size()},
              {"failures", report.failures()},
              {"max_relative", report.max_relative()},
              {"mean_relative", report.mean_relative()},
              {"max_residual", report.max_residual()}}},
            {"points", std::move(points)}};
}

nlohmann::json to_json(const GeometryReport& report) {
    nlohmann::json points = nlohmann::json::array();
    for (const auto& p : report.points) {
        nlohmann::json j{{"index", p.index},
                         {"omega", vec_json(p.omega)},
                         {"orthogonality", p.orthogonality},
                         {"stackel", p.stackel},
                         {"harmonicity", p.harmonicity},
                         {"metric", p.metric}};
        if (!p.error.empty()) j["error"] = p.error;
        points.push_back(std::move(j));
    }
    return {{"system", report.system},
            {"t", report.t},
            {"summary",
             {{"count", report.points.size()},
              {"failures", report.failures()},
              {"max_orthogonality", report.max_orthogonality()},
              {"max_stackel", report.max_stackel()},
              {"max_harmonicity", report.max_harmonicity()},
              {"max_metric", report.max_metric()}}},
            {"points", std::move(points)}};
}

}  // namespace emsep
