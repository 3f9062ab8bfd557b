#pragma once

// Hard-edge limiting kernels of the coupled-product ensemble and their
// supporting machinery.  Four regimes:
//   I   - all spikes subcritical: a two-parameter (nu, kappa) deformation of
//         the Meijer-G hard-edge kernel,
//   II  - m spikes critical: a one-parameter (tau) interpolating kernel,
//   III - m spikes supercritical: a finite-rank perturbation of the Bessel
//         kernel,
//   IV  - the tau -> 0 endpoint of II: a finite coupled-product kernel.
// Regimes II-IV evaluate through the shared double-contour bilinear engine;
// regime I has its own (t, s)-representation.  The module also provides the
// rank-one split functions (lambda pairs), the Meijer-G line/residue
// evaluation identifying regime I, and the integrable (f, g) form of the
// regime-II bulk kernel with its fourth-order ODE system.

#include <complex>
#include <vector>

#include "contour.hpp"
#include "errors.hpp"

namespace rmt::lim {

using cplx = std::complex<double>;

enum class Family { II, III, IV };

struct LimitKernelParams {
    int nu = 0;                // nu >= 0
    int kappa = 0;             // kappa >= 0
    int m = 0;                 // number of critical/supercritical spikes
    double tau = 1.0;          // interpolation parameter (family II only)
    std::vector<double> pis;   // m spike positions
    // II/IV: pi_l in (0,1); III: pi_l in (0,inf); IV additionally m >= 1.
    void validate(Family f) const;
};

struct KernelEval {
    double value;
    double im_residual;   // |Im| / (1 + |Re|) of the accepted quadrature
    double err_estimate;  // escalation delta at acceptance
};

// Regime-I kernel K_I(xi, eta), xi, eta > 0 (m = 0; p.pis unused).
KernelEval kernel_I(const LimitKernelParams& p, double xi, double eta);

// Regime II (interpolating, tau > 0), III (perturbed Bessel), IV (tau-free).
KernelEval kernel_II(const LimitKernelParams& p, double xi, double eta);
KernelEval kernel_III(const LimitKernelParams& p, double xi, double eta);
KernelEval kernel_IV(const LimitKernelParams& p, double xi, double eta);

ct::KernelGridResult kernel_II_grid(const LimitKernelParams& p,
                                    const std::vector<double>& xs,
                                    const std::vector<double>& ys);
ct::KernelGridResult kernel_III_grid(const LimitKernelParams& p,
                                     const std::vector<double>& xs,
                                     const std::vector<double>& ys);
ct::KernelGridResult kernel_IV_grid(const LimitKernelParams& p,
                                    const std::vector<double>& xs,
                                    const std::vector<double>& ys);

// Bulk parts: the spike-product factor dropped, (u/v)^{-(nu+m)} kept.
KernelEval kernel_II0(const LimitKernelParams& p, double xi, double eta);
KernelEval kernel_III0(const LimitKernelParams& p, double xi, double eta);

// Bulk regime-II kernel through its (t, s) Bessel-kernel representation:
//   (xi/eta)^{kappa/2} (1/2pi i) int_0^inf dt oint_{C_0} ds
//     t^{kappa-1} s^{-kappa-1} e^{eta s - xi t + 1/s - 1/t}
//     * 4 tau (s/t)^{a/2} K^Bes_a(4tau/s, 4tau/t),      a = nu + m.
// Independent of the double-contour route; remains stable for large tau where
// the (u, v) contours cannot avoid e^{tau/v} blow-up below Re = 1.
KernelEval kernel_II0_bessel(const LimitKernelParams& p, double xi, double eta);

struct MeijerGResult {
    double value;
    double err_estimate;
};

// Meijer-G hard-edge kernel K_{nu,kappa}(x, y): v-contour as an adaptive
// residue series over v = 0, 1, 2, ..., u-integral on the line Re u = -1/2
// truncated at |Im u| = T with T doubled to stability.
MeijerGResult meijer_g_kernel(int nu, int kappa, double x, double y);

// Rank-one split functions.  For family f with parameters p and 1 <= k <= m:
//   lambda_tilde: the u-side single contour integral over C_0 (around the
//     origin only; radius scaled by radius_scale for deformation checks),
//   lambda_fn: the v-side single contour integral over a circle covering
//     {0} u {pi_1..pi_k} (the bulk split leaves an essential singularity at
//     v = 0 with nonzero residue for families II and III, so 0 must stay
//     inside; for family IV the v-integrand is regular at 0).
// Family IV uses the family-II definitions without the e^{-tau/u}, e^{tau/v}
// factors.  Decompositions:
//   II : K_II  = K_II0  +     sum_k lambda_tilde_k(xi) lambda_fn_k(eta)
//   III: K_III = K_III0 + 2 * sum_k lambda_tilde_k(xi) lambda_fn_k(eta)
//   IV : K_IV  =              sum_k lambda_tilde_k(xi) lambda_fn_k(eta)
double lambda_tilde(Family f, const LimitKernelParams& p, int k, double x,
                    double radius_scale = 1.0);
double lambda_fn(Family f, const LimitKernelParams& p, int k, double x,
                 double radius_scale = 1.0);

// Integrable form of the regime-II bulk kernel: two particular solutions
// f, g of the fourth-order pair
//   x^2 f'''' - (a-2k-1)x f''' - (2x+ak-k^2) f'' + (a-2k-tau+1) f' + f = 0
//   x^2 g'''' + (a-2k+1)x g''' - (2x+ak-k^2) g'' - (a-2k-tau-1) g' + g = 0
// (a = alpha_ord, k = kappa), with
//   f(x) = tau^{a/2} int_0^inf t^{kappa-a-3} e^{-xt-1/t} J-part(tau/t) dt
//   g(x) = residue series of tau^{a/2} (1/2pi i) oint s^{-kappa-3}
//            e^{xs+1/s} J-part(tau/s) ds.
struct IntegrableState {
    int alpha_ord = 0;  // nu + m
    int kappa = 0;
    double tau = 1.0;
};

IntegrableState make_integrable(const LimitKernelParams& p);

// r-th derivative (0 <= r <= 4), analytic differentiation under the
// integral/series (powers of -t or shifted factorials), never finite
// differences.
double integrable_f(const IntegrableState& st, double x, int deriv_order);
double integrable_g(const IntegrableState& st, double x, int deriv_order);

// Bilinear concomitant [f(x), g(y)] of the ODE pair.  At y = x it is the
// conserved pairing of the two solutions (constant in x; identically zero for
// this f, g pair, which is what makes the kernel diagonal finite).
double concomitant(const IntegrableState& st, double x, double y);

// K_II0 through the integrable representation
//   (xi/eta)^{kappa/2} [f(xi), g(eta)] / (eta - xi),
// diagonal by symmetric two-sided limit at offset 1e-5 with one Richardson
// averaging step.
double kernel_II_integrable(const IntegrableState& st, double xi, double eta);

enum class TransitionKind { to_I, to_III, to_IV };

struct TransitionReport {
    std::vector<double> taus;
    std::vector<double> sup_dist;  // sup-norm distance to the target kernel
    bool decreasing_tail = false;  // last three distances strictly decreasing
};

// Interpolation limits of the regime-II kernel along a tau schedule:
//   to_I  : sup |(1/tau) K_II(tau; x/tau, y/tau) - K_I(x, y)|,
//           schedule increasing (tau -> inf),
//   to_III: sup |e^{(2/tau)(sqrt x - sqrt y)} (1/tau^2)
//                K_II(tau, pi_l = tau*pihat_l; x/tau^2, y/tau^2)
//                - K_III(pihat; x, y)|, schedule decreasing (tau -> 0),
//           base.pis supplies the fixed pihat_l,
//   to_IV : sup |K_II(tau; x, y) - K_IV(x, y)|, schedule decreasing.
// Throws accuracy_error when the last three distances fail to decrease.
TransitionReport transition_limits(TransitionKind which,
                                   const LimitKernelParams& base,
                                   const std::vector<double>& tau_schedule,
                                   const std::vector<double>& grid);

}  // namespace rmt::lim
