#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "errors.hpp"

namespace rmt::fred {

// Batch kernel evaluation: returns the matrix K(xs[i], ys[j]).
using KernelGridFn = std::function<Eigen::MatrixXd(const std::vector<double>&,
                                                   const std::vector<double>&)>;

enum class Transform { identity, square_map };

// Quadrature rule on (0, s) for Nystrom discretization of det(I - K).
// square_map uses x = s t^2 with t Gauss-Legendre on (0,1), Jacobian folded
// into the weights; it restores smoothness for kernels with algebraic
// behavior at the hard edge.
struct NystromRule {
    int nodes = 40;
    Transform transform = Transform::square_map;
    std::vector<double> points;
    std::vector<double> weights;
};

NystromRule nystrom_rule(double s, int nodes, Transform transform);

struct GapResult {
    double value = 1.0;      // raw det(I - K); clamp to [0,1] only when reporting
    double err_estimate = 0.0;
    int nodes_used = 0;
};

// P(no point of the process lies in (0, s)) = det(I - K) on L^2(0, s),
// discretized as det(delta_ij - sqrt(w_i) K(x_i, x_j) sqrt(w_j)).  Node count
// doubles from rule.nodes until successive determinants agree to 1e-8
// (ceiling max(160, 2 rule.nodes)); the last doubling step is reported as the
// error estimate.
GapResult gap_probability(const KernelGridFn& kernel, double s,
                          const NystromRule& rule);

// 1 - gap_probability at each grid value: the CDF of the smallest point.
std::vector<double> smallest_eigenvalue_cdf(const KernelGridFn& kernel,
                                            const std::vector<double>& s_grid,
                                            const NystromRule& rule);

// Closed-form limiting CDF of the smallest squared singular value for the
// rank-one spiked hard-edge kernel (m = 1, spike parameter pi1):
//   CDF(y) = [2 pi1^{nu+1} / (Gamma(nu+1) (1-pi1)^{kappa/2})]
//            * int_0^y t^{nu/2} K_{nu-kappa}(2 sqrt t)
//                      I_kappa(2 sqrt((1-pi1) t)) dt.
double goodform_limit(double pi1, int nu, int kappa, double y);

}  // namespace rmt::fred
