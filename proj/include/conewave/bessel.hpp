#ifndef CONEWAVE_BESSEL_HPP
#define CONEWAVE_BESSEL_HPP

namespace conewave {

// Bessel function of the first kind, real order nu >= 0, argument x >= 0.
//
// Branches: ascending series for small x, backward (Miller) recurrence with
// the Watson normalization sum for intermediate x, and the large-argument
// Hankel expansion once it reaches round-off.  Validated against an
// arbitrary-precision reference table in the tests.
double bessel_j(double nu, double x);

// d/dx J_nu(x) via the recurrence J'_nu = (nu/x) J_nu - J_{nu+1}.
double bessel_j_prime(double nu, double x);

// Hankel large-argument modulus/phase sums:
//   J_nu(x) = sqrt(2/(pi x)) [P cos w - Q sin w],  w = x - nu pi/2 - pi/4.
// Valid (to round-off) for x >= bessel_asymptotic_threshold(nu).
struct BesselPQ {
    double p;
    double q;
};
BesselPQ bessel_pq(double nu, double x);
double bessel_asymptotic_threshold(double nu);

} // namespace conewave

#endif
