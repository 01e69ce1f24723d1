#pragma once

// Jacobi elliptic functions and complete elliptic integrals.
//
// Every function here takes the *modulus* k (not the parameter m = k^2).

namespace emsep::elliptic {

/// Complete elliptic integral of the first kind K(k), 0 <= k < 1.
double complete_K(double k);

struct Modulus {
    double k;
    double kprime;  // sqrt(1 - k^2)
    double K;       // complete_K(k)
    double Kprime;  // complete_K(kprime)

    /// Requires 0 < k < 1.
    static Modulus from_k(double k);
};

struct JacobiValues {
    double sn;
    double cn;
    double dn;
    double k;

    double dsn() const { return cn * dn; }
    double dcn() const { return -sn * dn; }
    double ddn() const { return -k * k * sn * cn; }
};

/// sn, cn, dn at real argument u. Accepts 0 <= k <= 1 (k == 1 only for tests).
JacobiValues jacobi(double u, double k);

}  // namespace emsep::elliptic
