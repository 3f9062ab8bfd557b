#pragma once

// Scalar special functions over complex arguments: modified Bessel I/K,
// Bessel J, Hankel asymptotic components, confluent hypergeometrics, the
// entire Bessel-kernel building blocks, and complex log-gamma.
//
// Integer orders only (the library's kernels never need fractional order).
// Branch convention: principal square root and principal logarithm
// throughout; K_n(z) is defined on the cut plane C \ (-inf, 0].
//
// Accuracy targets (enforced by the test suite): 1e-10 relative for I and K
// on |z| <= 200 and J on |z| <= 60 away from zeros; series/asymptotic
// crossovers continuous to 1e-9; 0F1/I consistency to 1e-12 for |z| <= 50.

#include <complex>
#include <stdexcept>

namespace rmt::sf {

using cplx = std::complex<double>;

struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

// log Gamma(x) for x > 0 (wraps lgamma; deterministic single-thread libm).
double gammaln(double x);

// Digamma at positive integers: psi(n) = -gamma + sum_{k=1}^{n-1} 1/k.
double digamma_int(int n);

// Principal-branch log Gamma for complex z (Lanczos, reflection for Re z < 0.5).
cplx clgamma(cplx z);

// Modified Bessel I_n(z), n >= 0, entire in z.
cplx bessel_i(int n, cplx z);

// Modified Bessel K_n(z), any integer n (K_{-n} = K_n), z off (-inf, 0].
// Throws domain_error on the branch cut.
cplx bessel_k(int n, cplx z);

// e^{+z} K_n(z) and e^{-z} I_n(z); intended for large |z| with |arg z| small,
// where the unscaled values under/overflow or cancel externally.
cplx bessel_k_scaled(int n, cplx z);
cplx bessel_i_scaled(int n, cplx z);

// Bessel J_n(z), n >= 0, entire.
cplx bessel_j(int n, cplx z);

// Hankel functions H^{(1)}/H^{(2)} by their large-|z| asymptotic expansions
// (optimal truncation).  pm = +1 selects H^{(1)}, pm = -1 selects H^{(2)}.
// Accurate for |z| >= ~14, |arg z| < pi.  Valid for any integer order.
cplx hankel_h(int pm, int n, cplx z);
cplx hankel_h_deriv(int pm, int n, cplx z);

// Confluent hypergeometric limit 0F1(; c; z), integer c >= 1.
cplx hyp0f1(int c, cplx z);

// Kummer 1F1(a; c; z), integer a, integer c >= 1.
cplx hyp1f1(int a, int c, cplx z);

// Generalized 0F2(; b1, b2; z), integer b1, b2 >= 1.
cplx hyp0f2(int b1, int b2, cplx z);

// iota_n(z) = z^{-n/2} I_n(2 sqrt z) = 0F1(; n+1; z)/n!   (entire, n >= 0).
cplx iota(int n, cplx z);

// Entire Bessel-kernel parts (n >= 0):
//   ehat_n(z)   = z^{-n/2} J_n(sqrt z)            (entire)
//   gtilde_n(z) = z^{-n/2} sqrt(z) J_n'(sqrt z)   (entire)
// and their z-derivatives.
cplx ehat(int n, cplx z);
cplx gtilde(int n, cplx z);
cplx ehat_deriv(int n, cplx z);
cplx gtilde_deriv(int n, cplx z);

// H_n(x,y) = [ehat(x) gtilde(y) - ehat(y) gtilde(x)] / (2(x-y)), the entire
// two-variable Bessel-kernel core, with a confluent (L'Hopital) evaluation
// when |x-y| < 1e-8 * max(1,|x|,|y|).
cplx bessel_kernel_entire(int n, cplx x, cplx y);

// The Bessel kernel itself,
//   K^Bes_n(x,y) = [J_n(sqrt x) sqrt(y) J_n'(sqrt y)
//                   - J_n(sqrt y) sqrt(x) J_n'(sqrt x)] / (2(x-y)),
// equal to (xy)^{n/2} H_n(x,y) (principal powers).
cplx bessel_kernel(int n, cplx x, cplx y);

// Series/asymptotic crossover radii (exposed for the continuity tests).
inline constexpr double kcross_i = 30.0;
inline constexpr double kcross_k = 25.0;
inline constexpr double kcross_j = 20.0;

}  // namespace rmt::sf
