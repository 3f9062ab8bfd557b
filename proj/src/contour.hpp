#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"
#include "params.hpp"

namespace rmt::ct {

using cplx = std::complex<double>;

// Closed, simple, counterclockwise contour: a circle or an axis-aligned
// rectangle [re_min, re_max] x [-half_height, +half_height].  `nodes` is the
// discretization budget (exact node count for circles; total budget hint for
// rectangles, which use graded Gauss-Legendre panels).
struct ContourSpec {
    enum class Kind { circle, rectangle };
    Kind kind = Kind::circle;
    cplx center{0.0, 0.0};
    double radius = 1.0;
    double re_min = 0.0, re_max = 0.0, half_height = 0.0;
    int nodes = 64;

    static ContourSpec make_circle(cplx center, double radius, int nodes = 64);
    static ContourSpec make_rectangle(double re_min, double re_max,
                                      double half_height, int nodes = 512);

    double max_re() const;
    double min_re() const;
    // Strict interior test.
    bool contains(cplx p) const;
    // Distance from a point to the contour curve.
    double distance(cplx p) const;
};

// Discretized contour: sum_k w[k] * f(z[k])  approximates  (1/2pi i) oint f.
struct ContourNodes {
    std::vector<cplx> z;
    std::vector<cplx> w;
};

ContourNodes discretize(const ContourSpec& c);
// Same shape but with `nodes` overridden (used by escalation).
ContourNodes discretize(const ContourSpec& c, int nodes);

struct QuadResult {
    cplx value;           // finer-grid value
    double err_estimate;  // |value(2n) - value(n)|
};

// (1/2pi i) oint f dz with a node-doubling error estimate.
QuadResult quad_closed(const ContourSpec& c, const std::function<cplx(cplx)>& f);

enum class PairConfig { disjoint_right, nested };

struct ContourPair {
    ContourSpec outer;  // C_out: encircles the origin, max Re < 1
    ContourSpec inner;  // C_in: encircles all poles 1 - delta_l^2/alpha^2
    PairConfig config = PairConfig::disjoint_right;
};

// Pole locations 1 - delta_l^2 / alpha^2 of the v-integrand.
std::vector<double> pole_locations(double alpha, const std::vector<double>& deltas);

// Disjoint-right defaults: C_out = circle(0, 0.4 g_min); C_in centered at the
// midpoint of the poles with margin 0.25 g_min, g_min = min pole.  Throws
// domain_error when some delta equals alpha (pole at 0).
ContourPair default_contours(const ens::GaussianEnsembleParams& p);
ContourPair default_contours(const bi::JacobiEnsembleParams& p);

// Nested configuration (valid only when all deltas > 0): C_in = circle(0, r_in)
// covering all poles, C_out = circle(0, (r_in+1)/2).  Throws domain_error when
// there is no headroom below Re = 1.
ContourPair nested_contours(const ens::GaussianEnsembleParams& p);

// Geometric validity: origin inside outer, max Re(outer) < 1, all poles
// strictly inside inner, and the configuration's separation predicate.
bool pair_valid(const ContourPair& pair, const std::vector<double>& poles);

struct KernelGridResult {
    Eigen::MatrixXd values;   // nx x ny
    double max_im_residual;   // max |Im K| / (1 + |Re K|)
    double conv_estimate;     // node-doubling delta at the accepted level
    int nodes_used;           // per-contour node budget at the accepted level
};

// Factor layout of a double-contour bilinear kernel
//   K(x,y) = prefactor * (1/2pi i)^2 oint_u du oint_v dv
//              a_fun(u,x) b_fun(v,y) R(u)/R(v) / (u - v),
//   R(z) = prod_l (z - poles_l) / z^int_pow.
struct BilinearSpec {
    std::vector<double> poles;
    int int_pow = 0;          // (u/v)^{-int_pow}, integer
    double prefactor = 1.0;
    std::function<cplx(cplx, double)> a_fun;  // u-side special factor
    std::function<cplx(cplx, double)> b_fun;  // v-side special factor
};

// Evaluate a BilinearSpec kernel on a grid with node doubling.  Contour
// geometry (which contour encircles what, disjointness) is the caller's
// responsibility; the only hard requirements are that the two curves do not
// intersect and that the integrand is finite on both.
KernelGridResult bilinear_kernel_grid(const BilinearSpec& es,
                                      const ContourSpec& u_contour,
                                      const ContourSpec& v_contour,
                                      const std::vector<double>& xs,
                                      const std::vector<double>& ys);

// Finite-N Gaussian-coupled kernel K_N(x,y) on a grid (double contour
// integral, uniform in delta including coincident values).
KernelGridResult kernel_contour_grid(const ens::GaussianEnsembleParams& p,
                                     const ContourPair& pair,
                                     const std::vector<double>& xs,
                                     const std::vector<double>& ys);
double kernel_contour(const ens::GaussianEnsembleParams& p,
                      const ContourPair& pair, double x, double y);

// Finite-N Jacobi-type kernel on a grid.
KernelGridResult kernel_contour_grid_jacobi(const bi::JacobiEnsembleParams& p,
                                            const ContourPair& pair,
                                            const std::vector<double>& xs,
                                            const std::vector<double>& ys);
double kernel_contour_jacobi(const bi::JacobiEnsembleParams& p,
                             const ContourPair& pair, double x, double y);

// Entire dual pair for the Jacobi kernel.
// f1(n, kappa; z) = Gamma(n+1)/(Gamma(kappa+1) Gamma(n-kappa)) 1F1(n+1; kappa+1; z)
cplx f1_series(int n, int kappa, cplx z);
// f2(n, kappa; z) = int_0^1 (1-t)^{n-1} t^{kappa-1} e^{-z/t} dt,  Re z > 0.
// Fixed Gauss-Jacobi evaluator; node count chosen by doubling until stable on
// the caller-supplied probe arguments.
class F2Eval {
  public:
    F2Eval(int n, int kappa);
    cplx operator()(cplx z) const;

  private:
    int n_, kappa_;
};

}  // namespace rmt::ct
