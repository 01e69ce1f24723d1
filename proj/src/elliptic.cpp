#include "emsep/elliptic.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "emsep/errors.hpp"

namespace emsep::elliptic {

namespace {

constexpr int kMaxLanden = 32;

void require_modulus(double k, bool allow_one) {
    const bool ok = std::isfinite(k) && k >= 0.0 && (allow_one ? k <= 1.0 : k < 1.0);
    if (!ok) {
        throw DomainError(0, k, "elliptic modulus outside [0, 1)");
    }
}

}  // namespace

double complete_K(double k) {
    require_modulus(k, false);
    double a = 1.0;
    double b = std::sqrt((1.0 - k) * (1.0 + k));
    for (int i = 0; i < kMaxLanden && std::abs(a - b) > 4.0 * std::numeric_limits<double>::epsilon() * a;
         ++i) {
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    return std::numbers::pi / (a + b);
}

Modulus Modulus::from_k(double k) {
    if (!(k > 0.0 && k < 1.0)) {
        throw DomainError(0, k, "elliptic modulus must satisfy 0 < k < 1");
    }
    const double kp = std::sqrt((1.0 - k) * (1.0 + k));
    return Modulus{k, kp, complete_K(k), complete_K(kp)};
}

JacobiValues jacobi(double u, double k) {
    require_modulus(k, true);
    if (k == 0.0) {
        return {std::sin(u), std::cos(u), 1.0, 0.0};
    }
    if (k == 1.0) {
        const double sech = 1.0 / std::cosh(u);
        return {std::tanh(u), sech, sech, 1.0};
    }

    // Descending Landen transformation (arithmetic-geometric mean scale).
    std::array<double, kMaxLanden + 1> a{};
    std::array<double, kMaxLanden + 1> c{};
    a[0] = 1.0;
    double b = std::sqrt((1.0 - k) * (1.0 + k));
    c[0] = k;
    int n = 0;
    while (n < kMaxLanden && std::abs(c[n]) > std::numeric_limits<double>::epsilon() * a[n]) {
        a[n + 1] = 0.5 * (a[n] + b);
        c[n + 1] = 0.5 * (a[n] - b);
        b = std::sqrt(a[n] * b);
        ++n;
    }
    double phi = std::ldexp(a[n] * u, n);
    for (int j = n; j > 0; --j) {
        phi = 0.5 * (phi + std::asin(c[j] / a[j] * std::sin(phi)));
    }
    const double sn = std::sin(phi);
    const double cn = std::cos(phi);
    // dn >= k' > 0 on the real line; the quotient form cos(phi0)/cos(phi1 - phi0)
    // is 0/0 at odd multiples of K.
    const double dn = std::sqrt((1.0 - k * sn) * (1.0 + k * sn));
    return {sn, cn, dn, k};
}

}  // namespace emsep::elliptic
