#include "emsep/stackel.hpp"

#include <cmath>

#include "emsep/errors.hpp"

namespace emsep {

namespace {

double sq(double v) { return v * v; }

}  // namespace

std::array<double, 3> stackel_row(const CoordinateSystem& system, int axis, double w) {
    if (axis < 1 || axis > 3) throw UsageError("Staeckel row axis must be 1, 2 or 3");
    const double a = system.a();
    const double a2 = a * a;
    switch (system.case_number()) {
        case 1:
            if (axis == 1) return {1, 0, 0};
            if (axis == 2) return {0, 1, 0};
            return {0, 0, 1};
        case 2:
            if (axis == 1) return {std::exp(2 * w), -1, 0};
            if (axis == 2) return {0, 1, 0};
            return {0, 0, 1};
        case 3:
            if (axis == 1) return {w * w, -1, 0};
            if (axis == 2) return {w * w, 1, 0};
            return {0, 0, 1};
        case 4:
            if (axis == 1) return {a2 * sq(std::cosh(w)), 1, 0};
            if (axis == 2) return {-a2 * sq(std::cos(w)), -1, 0};
            return {0, 0, 1};
        case 5:
            if (axis == 1) return {std::pow(w, -4), -1.0 / (w * w), 0};
            if (axis == 2) return {0, 1.0 / sq(std::cosh(w)), -1};
            return {0, 0, 1};
        case 6: {
            if (axis == 1) {
                const double s2 = 1.0 / sq(std::sinh(w));
                return {a2 * s2 * s2, -s2, -1};
            }
            if (axis == 2) {
                const double c2 = 1.0 / sq(std::cosh(w));
                return {a2 * c2 * c2, c2, -1};
            }
            return {0, 0, 1};
        }
        case 7: {
            if (axis == 1) {
                const double s2 = 1.0 / sq(std::sin(w));
                return {a2 * s2 * s2, -s2, 1};
            }
            if (axis == 2) {
                const double c2 = 1.0 / sq(std::cosh(w));
                return {-a2 * c2 * c2, c2, -1};
            }
            return {0, 0, 1};
        }
        case 8:
            if (axis == 1) return {std::exp(4 * w), -std::exp(2 * w), -1};
            if (axis == 2) return {std::exp(4 * w), std::exp(2 * w), -1};
            return {0, 0, 1};
        case 9:
            if (axis == 1) {
                const double c = std::cosh(2 * w);
                return {a2 * c * c, -a * c, -1};
            }
            if (axis == 2) {
                const double c = std::cos(2 * w);
                return {-a2 * c * c, a * c, 1};
            }
            {
                const double c = std::cosh(2 * w);
                return {a2 * c * c, a * c, -1};
            }
        case 10: {
            // Column 1 carries a^2 so that the Staeckel relation holds for any scale a.
            const auto& m = *system.modulus();
            if (axis == 1) {
                const auto j = elliptic::jacobi(w, m.k);
                const double r = sq(j.dn / j.sn);
                return {a2 * r * r, -r, 1};
            }
            if (axis == 2) {
                const double q = sq(m.kprime * elliptic::jacobi(w, m.kprime).cn);
                return {-a2 * q * q, q, -1};
            }
            const double r = sq(m.k * elliptic::jacobi(w, m.k).cn);
            return {a2 * r * r, r, 1};
        }
        case 11: {
            const auto& m = *system.modulus();
            if (axis == 1) return {std::pow(w, -4), -1.0 / (w * w), 0};
            if (axis == 2) return {0, sq(m.kprime * elliptic::jacobi(w, m.kprime).cn), -1};
            return {0, sq(m.k * elliptic::jacobi(w, m.k).cn), 1};
        }
    }
    throw UsageError("unknown coordinate case");
}

Mat3 stackel_values(const CoordinateSystem& system, const Vec3& omega) {
    check_domain(system, omega);
    Mat3 F;
    for (int i = 0; i < 3; ++i) {
        const auto row = stackel_row(system, i + 1, omega[i]);
        F.row(i) << row[0], row[1], row[2];
    }
    return F;
}

std::array<double, 3> t_functions(const CoordinateSystem& system, const FrameSpec& frame, double t) {
    const auto& h = frame.profiles().h;
    const double t1 = 1.0 / sq(h[0](t));
    switch (system.split_class()) {
        case SplitClass::complete: return {t1, 1.0 / sq(h[1](t)), 1.0 / sq(h[2](t))};
        case SplitClass::partial: return {t1, 0.0, 1.0 / sq(h[2](t))};
        case SplitClass::nonsplit: return {t1, 0.0, 0.0};
    }
    return {t1, 0.0, 0.0};
}

Vec3 unit_metric_r_squared(const CoordinateSystem& system, const Vec3& omega) {
    check_domain(system, omega);
    const double w1 = omega[0], w2 = omega[1], w3 = omega[2];
    const double a2 = system.a() * system.a();
    switch (system.case_number()) {
        case 1: return {1, 1, 1};
        case 2: {
            const double r = std::exp(2 * w1);
            return {r, r, 1};
        }
        case 3: {
            const double r = w1 * w1 + w2 * w2;
            return {r, r, 1};
        }
        case 4: {
            const double r = 0.5 * a2 * (std::cosh(2 * w1) - std::cos(2 * w2));
            return {r, r, 1};
        }
        case 5: {
            const double r = 1.0 / (w1 * w1 * sq(std::cosh(w2)));
            return {std::pow(w1, -4), r, r};
        }
        case 6: {
            const double s = 1.0 / sq(std::sinh(w1)), c = 1.0 / sq(std::cosh(w2));
            return {a2 * s * (s + c), a2 * c * (s + c), a2 * s * c};
        }
        case 7: {
            const double s = 1.0 / sq(std::sin(w1)), c = 1.0 / sq(std::cosh(w2));
            return {a2 * s * (s - c), a2 * c * (s - c), a2 * s * c};
        }
        case 8: {
            const double e1 = std::exp(2 * w1), e2 = std::exp(2 * w2);
            return {e1 * (e1 + e2), e2 * (e1 + e2), e1 * e2};
        }
        case 9: {
            const double A = std::cosh(2 * w1) - std::cos(2 * w2);
            const double B = std::cosh(2 * w1) + std::cosh(2 * w3);
            const double C = std::cos(2 * w2) + std::cosh(2 * w3);
            return {a2 * A * B, a2 * A * C, a2 * B * C};
        }
        case 10: {
            const auto& m = *system.modulus();
            const auto j1 = elliptic::jacobi(w1, m.k);
            const double P = sq(j1.dn / j1.sn);
            const double Q = sq(m.kprime * elliptic::jacobi(w2, m.kprime).cn);
            const double R = sq(m.k * elliptic::jacobi(w3, m.k).cn);
            return {a2 * (P - Q) * (P + R), a2 * (P - Q) * (Q + R), a2 * (P + R) * (Q + R)};
        }
        case 11: {
            const auto& m = *system.modulus();
            const double Q = sq(m.kprime * elliptic::jacobi(w2, m.kprime).cn);
            const double R = sq(m.k * elliptic::jacobi(w3, m.k).cn);
            const double r = (Q + R) / (w1 * w1);
            return {std::pow(w1, -4), r, r};
        }
    }
    throw UsageError("unknown coordinate case");
}

Vec3 metric_r_squared(const CoordinateSystem& system, const FrameSpec& frame, double t, const Vec3& omega) {
    const Vec3 unit = unit_metric_r_squared(system, omega);
    const auto& h = frame.profiles().h;
    const double h1 = sq(h[0](t));
    switch (system.split_class()) {
        case SplitClass::complete: return {h1 * unit[0], sq(h[1](t)) * unit[1], sq(h[2](t)) * unit[2]};
        case SplitClass::partial: return {h1 * unit[0], h1 * unit[1], sq(h[2](t)) * unit[2]};
        case SplitClass::nonsplit: return h1 * unit;
    }
    return h1 * unit;
}

}  // namespace emsep
