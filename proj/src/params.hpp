#pragma once

#include <string>
#include <vector>

#include "errors.hpp"

namespace rmt::ens {

// Coupled Gaussian pair (X1 is L x M, X2 is M x N); the point process lives on
// the N squared singular values of X1*X2.  deltas are the singular values of
// the coupling matrix, each in [0, alpha).
struct GaussianEnsembleParams {
    int n = 1;      // N, number of eigenvalues
    int l = 1;      // L >= N
    int m_dim = 1;  // M >= N
    double alpha = 1.0;
    std::vector<double> deltas;  // size N, 0 <= delta_j < alpha

    int nu() const { return m_dim - n; }
    int kappa() const { return l - n; }

    void validate() const {
        if (n < 1) throw domain_error("params: n must be >= 1");
        if (l < n) throw domain_error("params: l must be >= n");
        if (m_dim < n) throw domain_error("params: m_dim must be >= n");
        if (!(alpha > 0.0)) throw domain_error("params: alpha must be > 0");
        if ((int)deltas.size() != n)
            throw domain_error("params: deltas must have exactly n entries");
        for (double d : deltas) {
            if (!(d >= 0.0) || !(d < alpha))
                throw domain_error(
                    "params: each delta must satisfy 0 <= delta < alpha "
                    "(got delta=" + std::to_string(d) + ")");
        }
    }
};

}  // namespace rmt::ens

namespace rmt::bi {

// Jacobi-type coupled ensemble parameters; nu + nu_prime >= kappa.
struct JacobiEnsembleParams {
    int n = 1;
    int nu = 0;
    int nu_prime = 0;
    int kappa = 0;
    double alpha = 1.0;
    std::vector<double> deltas;

    void validate() const {
        if (n < 1) throw domain_error("jacobi params: n must be >= 1");
        if (nu < 0 || nu_prime < 0 || kappa < 0)
            throw domain_error("jacobi params: nu, nu_prime, kappa must be >= 0");
        if (nu + nu_prime < kappa)
            throw domain_error("jacobi params: need nu + nu_prime >= kappa");
        if (!(alpha > 0.0)) throw domain_error("jacobi params: alpha must be > 0");
        if ((int)deltas.size() != n)
            throw domain_error("jacobi params: deltas must have exactly n entries");
        for (double d : deltas) {
            if (!(d >= 0.0) || !(d < alpha))
                throw domain_error(
                    "jacobi params: each delta must satisfy 0 <= delta < alpha");
        }
    }
};

}  // namespace rmt::bi
