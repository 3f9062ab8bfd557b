#pragma once

#include <functional>

#include <Eigen/Dense>

#include "ensemble.hpp"
#include "params.hpp"

namespace rmt::bi {

// Borodin-type biorthogonal system: K_N(x,y) = sum_ij c_ij eta_i(x) xi_j(y)
// with C = (G^{-1})^t, g_ij = int eta_i xi_j.
struct BiorthogonalSystem {
    int n = 0;
    std::function<double(int, double)> xi;   // xi_i(x), 1-based i
    std::function<double(int, double)> eta;  // eta_i(x), 1-based i
    Eigen::MatrixXd gram;                    // g_ij
    Eigen::MatrixXd coeffs;                  // c_ij = (G^{-1})^t
    double gram_cond = 0.0;                  // 1-norm condition estimate
};

// Gaussian-coupled system: xi_i(x) = I_kappa(2 delta_i sqrt x),
// eta_i(x) = x^{(nu+i-1)/2} K_{nu-kappa+i-1}(2 alpha sqrt x),
// g_ij = Gamma(nu+i) delta_j^kappa / (2 alpha^{nu+kappa+i+1}) (1-delta_j^2/alpha^2)^{-nu-i}.
// Requires pairwise-distinct positive deltas (min gap 1e-6 alpha); degenerate
// parameters are served by the contour route.
BiorthogonalSystem gaussian_system(const ens::GaussianEnsembleParams& p);

// Jacobi-type system: xi_i(x) = x^kappa 1F1(nu+nu'+N+1; kappa+1; delta_i^2 x/alpha),
// eta_i(x) = int_0^1 (1-t)^{nu+nu'-kappa+N-1} (x/t)^{nu-kappa+i-1} e^{-alpha x/t} dt/t,
// g_ij = Gamma(kappa+1)Gamma(nu+nu'-kappa+N)/Gamma(nu+nu'+N+1)
//        * Gamma(nu+i)/alpha^{nu+i} * (1-delta_j^2/alpha^2)^{-nu-i}.
BiorthogonalSystem jacobi_system(const JacobiEnsembleParams& p);

double kernel_gram(const BiorthogonalSystem& s, double x, double y);

// Brute-force density oracle: rho_1(x) = N int P_N(x, x_2..x_N) dx_2..dx_N by
// direct quadrature of the joint PDF; supports N <= 3 only.
double density_from_pdf_oracle(const ens::GaussianEnsembleParams& p, double x);

}  // namespace rmt::bi
