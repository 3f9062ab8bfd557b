#pragma once

// Gaussian quadrature rules (Golub-Welsch on the Jacobi matrix) and an
// adaptive Gauss-Kronrod 15(7) integrator for smooth/oscillatory 1-D work.

#include <complex>
#include <functional>
#include <vector>

namespace rmt::quad {

using cplx = std::complex<double>;

struct Rule1D {
    std::vector<double> x, w;
};

// n-point Gauss-Legendre on [-1, 1].
Rule1D gauss_legendre(int n);

// n-point Gauss-Legendre mapped to [a, b].
Rule1D gauss_legendre_ab(int n, double a, double b);

// n-point generalized Gauss-Laguerre: integral_0^inf f(t) t^alpha e^{-t} dt
// ~= sum w_i f(x_i), alpha > -1.
Rule1D gauss_laguerre_gen(int n, double alpha);

// n-point Gauss-Jacobi on (0,1) against weight (1-t)^a t^b, a,b > -1:
// integral_0^1 f(t) (1-t)^a t^b dt ~= sum w_i f(x_i).
Rule1D gauss_jacobi01(int n, double a, double b);

// Adaptive Gauss-Kronrod 15(7).  Bisects until the per-interval error
// estimate satisfies |err| <= max(abstol_local, reltol*|whole|).
double gk_adaptive(const std::function<double(double)>& f, double a, double b,
                   double abstol, double reltol, int max_depth = 48);

cplx gk_adaptive_c(const std::function<cplx(double)>& f, double a, double b,
                   double abstol, double reltol, int max_depth = 48);

}  // namespace rmt::quad
