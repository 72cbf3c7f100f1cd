#pragma once

// Jacobi elliptic functions sn, cn, dn and the complete elliptic integral
// K(m), parametrised by m = k^2 (modulus squared).

namespace mstab {

struct JacobiTriple {
    double sn, cn, dn;
};

// AGM / descending-Landen evaluation; 0 <= m <= 1, accuracy ~1e-14.
// Throws std::domain_error outside [0,1].
JacobiTriple eval_jacobi(double u, double m);

// Complete elliptic integral of the first kind via AGM; K(1) diverges.
double elliptic_K(double m);

} // namespace mstab
