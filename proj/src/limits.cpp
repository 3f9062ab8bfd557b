#include "limits.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "quadrature.hpp"
#include "specfun.hpp"

namespace rmt::lim {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double max_pi(const std::vector<double>& pis, int upto) {
    double m = 0.0;
    for (int l = 0; l < upto && l < (int)pis.size(); ++l)
        m = std::max(m, pis[(size_t)l]);
    return m;
}

// prod_{l < upto} (u - pi_l)
cplx spike_poly(const std::vector<double>& pis, int upto, cplx u) {
    cplx p(1.0, 0.0);
    for (int l = 0; l < upto; ++l) p *= u - pis[(size_t)l];
    return p;
}

// prod_{l <= upto} 1 / (v - pi_l)   (upto is 1-based count)
cplx spike_poles(const std::vector<double>& pis, int upto, cplx v) {
    cplx p(1.0, 0.0);
    for (int l = 0; l < upto; ++l) p /= v - pis[(size_t)l];
    return p;
}

struct ContourDuo {
    ct::ContourSpec outer;  // u side
    ct::ContourSpec inner;  // v side
};

// Families II/IV: both circles below Re = 1 (K-Bessel branch point at u = 1),
// inner covering {0} u {pi_l}, outer around the origin and around the inner.
ContourDuo contours_crit(const LimitKernelParams& p) {
    double cv, rv, rout;
    if (p.pis.empty()) {
        cv = 0.0;
        rv = 0.3;
        rout = 0.65;
    } else {
        double mp = max_pi(p.pis, p.m);
        double margin = std::clamp(0.1 * std::min(mp, 1.0 - mp), 0.02, 0.2);
        cv = 0.5 * mp;
        rv = cv + margin;
        rout = std::min(0.985, std::max(1.3 * mp + 0.1, cv + rv + 0.025));
        if (!(cv + rv + 0.0125 < rout))
            throw domain_error(
                "limit kernel: spikes too close to 1; nested contours below "
                "Re = 1 do not fit");
    }
    ContourDuo d;
    d.outer = ct::ContourSpec::make_circle(cplx(0.0, 0.0), rout, 192);
    d.inner = ct::ContourSpec::make_circle(cplx(cv, 0.0), rv, 192);
    return d;
}

// Family III: no branch cuts anywhere, only the scale of e^{+-1/z} matters.
ContourDuo contours_sup(const LimitKernelParams& p) {
    double mp = p.pis.empty() ? 0.0 : max_pi(p.pis, p.m);
    double cv = 0.5 * mp;
    double rv = cv + std::max(0.15 * mp, 0.3);
    double rout = 1.35 * (cv + rv) + 0.25;
    ContourDuo d;
    d.outer = ct::ContourSpec::make_circle(cplx(0.0, 0.0), rout, 192);
    d.inner = ct::ContourSpec::make_circle(cplx(cv, 0.0), rv, 192);
    return d;
}

ct::BilinearSpec spec_crit(const LimitKernelParams& p, bool with_poles,
                           double tau) {
    ct::BilinearSpec es;
    if (with_poles) es.poles = p.pis;
    es.int_pow = p.nu + p.m;
    es.prefactor = 2.0;
    const int kap = p.kappa;
    es.a_fun = [kap, tau](cplx u, double x) {
        cplx omu = 1.0 - u;
        cplx val = sf::bessel_k(kap, 2.0 * std::sqrt(omu * x)) *
                   std::pow(omu, 0.5 * kap);
        if (tau != 0.0) val *= std::exp(-tau / u);
        return val;
    };
    es.b_fun = [kap, tau](cplx v, double y) {
        cplx val = std::pow(y, 0.5 * kap) * sf::iota(kap, y * (1.0 - v));
        if (tau != 0.0) val *= std::exp(tau / v);
        return val;
    };
    return es;
}

ct::BilinearSpec spec_sup(const LimitKernelParams& p, bool with_poles) {
    ct::BilinearSpec es;
    if (with_poles) es.poles = p.pis;
    es.int_pow = p.nu + p.m;
    es.prefactor = 0.5;
    es.a_fun = [](cplx u, double x) {
        return std::exp(std::sqrt(x) * u - 1.0 / u) * std::pow(x, -0.25);
    };
    es.b_fun = [](cplx v, double y) {
        return std::exp(-std::sqrt(y) * v + 1.0 / v) * std::pow(y, -0.25);
    };
    return es;
}

// e^{2 sqrt(xi)} K_kappa(2 sqrt((1-u) xi)) (1-u)^{kappa/2} e^{-tau/u}, using
// sqrt(xi) - sqrt((1-u) xi) = sqrt(xi) u / (1 + sqrt(1-u)) so the growth
// cancels inside one exponent; stable for xi up to ~1e4 on small u-circles.
ct::BilinearSpec spec_crit_scaled(const LimitKernelParams& p, double tau) {
    ct::BilinearSpec es;
    es.poles = p.pis;
    es.int_pow = p.nu + p.m;
    es.prefactor = 2.0;
    const int kap = p.kappa;
    es.a_fun = [kap, tau](cplx u, double x) {
        cplx sq = std::sqrt(1.0 - u);
        double rx = std::sqrt(x);
        cplx expo = 2.0 * rx * u / (1.0 + sq) - tau / u;
        return std::pow(1.0 - u, 0.5 * kap) *
               sf::bessel_k_scaled(kap, 2.0 * rx * sq) * std::exp(expo);
    };
    es.b_fun = [kap, tau](cplx v, double y) {
        cplx sq = std::sqrt(1.0 - v);
        double ry = std::sqrt(y);
        cplx expo = -2.0 * ry * v / (1.0 + sq) + tau / v;
        return std::pow(1.0 - v, -0.5 * kap) *
               sf::bessel_i_scaled(kap, 2.0 * ry * sq) * std::exp(expo);
    };
    return es;
}

KernelEval eval_from_grid(const ct::KernelGridResult& g) {
    return {g.values(0, 0), g.max_im_residual, g.conv_estimate};
}

// ---------------------------------------------------------------------------
// Regime I: (eta/xi)^{kappa/2} (1/2pi i) int_0^inf dt oint_{|s|=1} ds
//   t^{kappa-1} s^{-kappa-1} e^{s-t} 4^{nu+1} xi^nu t^{-nu} H_nu(4 eta/s, 4 xi/t)
// with H_nu the entire two-argument Bessel kernel.  The t-integral is split at
// rho = 2 sqrt(xi/t) = P: the inner piece is smooth and handled adaptively on
// a log grid; the outer (oscillatory tail, t -> 0) is mapped to rho and the
// two Hankel halves of J_nu are rotated onto the rays P +- i y, where
// Gauss-Laguerre applies.
// ---------------------------------------------------------------------------

cplx region_smooth(int nu, int kap, double xi, cplx x_s, double t0, double t1) {
    return quad::gk_adaptive_c(
        [&](double w) {
            double t = std::exp(w);
            return std::pow(t, (double)(kap - nu)) * std::exp(-t) *
                   sf::bessel_kernel_entire(nu, x_s, cplx(4.0 * xi / t, 0.0));
        },
        std::log(t0), std::log(t1), 1e-15, 1e-11);
}

cplx region_tail(int nu, int kap, double xi, cplx x_s, double P,
                 const quad::Rule1D& gl) {
    cplx eh = sf::ehat(nu, x_s), gt = sf::gtilde(nu, x_s);
    const double pw = 2.0 * nu - 2.0 * kap - 1.0;
    cplx up(0.0, 0.0), down(0.0, 0.0);
    for (size_t i = 0; i < gl.x.size(); ++i) {
        double y = gl.x[i];
        double wy = gl.w[i] * std::exp(y);  // strip the e^{-y} weight
        {
            cplx rc(P, y);
            cplx rc2 = rc * rc;
            cplx q = std::pow(rc, pw) * std::exp(-4.0 * xi / rc2) /
                     (2.0 * (x_s - rc2));
            cplx br = eh * std::pow(rc, 1.0 - nu) *
                          (0.5 * sf::hankel_h_deriv(+1, nu, rc)) -
                      std::pow(rc, -(double)nu) * (0.5 * sf::hankel_h(+1, nu, rc)) * gt;
            up += wy * q * br;
        }
        {
            cplx rc(P, -y);
            cplx rc2 = rc * rc;
            cplx q = std::pow(rc, pw) * std::exp(-4.0 * xi / rc2) /
                     (2.0 * (x_s - rc2));
            cplx br = eh * std::pow(rc, 1.0 - nu) *
                          (0.5 * sf::hankel_h_deriv(-1, nu, rc)) -
                      std::pow(rc, -(double)nu) * (0.5 * sf::hankel_h(-1, nu, rc)) * gt;
            down += wy * q * br;
        }
    }
    return cplx(0.0, 1.0) * up - cplx(0.0, 1.0) * down;
}

}  // namespace

void LimitKernelParams::validate(Family f) const {
    if (nu < 0 || kappa < 0)
        throw domain_error("limit kernel: nu and kappa must be >= 0");
    if (m < 0 || (int)pis.size() != m)
        throw domain_error("limit kernel: pis must hold exactly m entries");
    if (f == Family::IV && m < 1)
        throw domain_error("limit kernel IV: at least one spike (m >= 1)");
    if (f == Family::II && !(tau > 0.0))
        throw domain_error("limit kernel II: tau must be > 0");
    for (double pi : pis) {
        if (f == Family::III) {
            if (!(pi > 0.0))
                throw domain_error("limit kernel III: spikes must be > 0");
        } else if (!(pi > 0.0 && pi < 1.0)) {
            throw domain_error("limit kernel II/IV: spikes must lie in (0,1)");
        }
    }
}

KernelEval kernel_I(const LimitKernelParams& p, double xi, double eta) {
    if (p.nu < 0 || p.kappa < 0)
        throw domain_error("kernel_I: nu and kappa must be >= 0");
    if (p.m != 0) throw domain_error("kernel_I: no spike parameters (m = 0)");
    if (!(xi > 0.0) || !(eta > 0.0))
        throw domain_error("kernel_I: evaluation points must be > 0");
    const int nu = p.nu, kap = p.kappa;
    const double P =
        std::max({18.0, 3.5 * std::sqrt(eta), 1.8 * (nu + 2.0) * (nu + 2.0)});
    const double t0 = 4.0 * xi / (P * P);
    const double t1 = std::max(50.0 + 5.0 * (nu + kap), 2.0 * t0 + 10.0);
    const double cA = std::pow(4.0, nu + 1.0) * std::pow(xi, (double)nu);
    const double cB = 8.0 * std::pow(4.0, (double)kap) * std::pow(xi, (double)kap);
    const quad::Rule1D gl = quad::gauss_laguerre_gen(88, 0.0);
    const double pref = std::pow(eta / xi, 0.5 * kap);

    auto level = [&](int M) {
        ct::ContourNodes nd =
            ct::discretize(ct::ContourSpec::make_circle(cplx(0.0, 0.0), 1.0, M));
        cplx acc(0.0, 0.0);
        for (size_t k = 0; k < nd.z.size(); ++k) {
            cplx s = nd.z[k];
            cplx x_s = 4.0 * eta / s;
            cplx F = std::pow(s, -(double)kap - 1.0) * std::exp(s) *
                     (cA * region_smooth(nu, kap, xi, x_s, t0, t1) +
                      cB * region_tail(nu, kap, xi, x_s, P, gl));
            acc += nd.w[k] * F;
        }
        if (!std::isfinite(acc.real()) || !std::isfinite(acc.imag()))
            throw numeric_error("kernel_I: non-finite quadrature sample");
        return acc;
    };

    cplx prev = level(64);
    cplx cur = level(128);
    double err = pref * std::abs(cur - prev);
    double allowed = std::max(1e-10, 1e-9 * pref * std::abs(cur));
    if (err > allowed) {
        prev = cur;
        cur = level(256);
        err = pref * std::abs(cur - prev);
        allowed = std::max(1e-10, 1e-9 * pref * std::abs(cur));
        if (err > allowed)
            throw accuracy_error(
                "kernel_I: s-contour refinement stalled (delta " +
                std::to_string(err) + ")");
    }
    double val = pref * cur.real();
    return {val, std::abs(pref * cur.imag()) / (1.0 + std::abs(val)), err};
}

// ---------------------------------------------------------------------------
// Regimes II, III, IV through the bilinear double-contour engine.
// ---------------------------------------------------------------------------

ct::KernelGridResult kernel_II_grid(const LimitKernelParams& p,
                                    const std::vector<double>& xs,
                                    const std::vector<double>& ys) {
    p.validate(Family::II);
    ContourDuo d = contours_crit(p);
    return ct::bilinear_kernel_grid(spec_crit(p, true, p.tau), d.outer, d.inner,
                                    xs, ys);
}

ct::KernelGridResult kernel_III_grid(const LimitKernelParams& p,
                                     const std::vector<double>& xs,
                                     const std::vector<double>& ys) {
    p.validate(Family::III);
    ContourDuo d = contours_sup(p);
    return ct::bilinear_kernel_grid(spec_sup(p, true), d.outer, d.inner, xs, ys);
}

ct::KernelGridResult kernel_IV_grid(const LimitKernelParams& p,
                                    const std::vector<double>& xs,
                                    const std::vector<double>& ys) {
    p.validate(Family::IV);
    ContourDuo d = contours_crit(p);
    return ct::bilinear_kernel_grid(spec_crit(p, true, 0.0), d.outer, d.inner,
                                    xs, ys);
}

KernelEval kernel_II(const LimitKernelParams& p, double xi, double eta) {
    return eval_from_grid(kernel_II_grid(p, {xi}, {eta}));
}

KernelEval kernel_III(const LimitKernelParams& p, double xi, double eta) {
    return eval_from_grid(kernel_III_grid(p, {xi}, {eta}));
}

KernelEval kernel_IV(const LimitKernelParams& p, double xi, double eta) {
    return eval_from_grid(kernel_IV_grid(p, {xi}, {eta}));
}

KernelEval kernel_II0(const LimitKernelParams& p, double xi, double eta) {
    p.validate(Family::II);
    ContourDuo d = contours_crit(p);
    return eval_from_grid(ct::bilinear_kernel_grid(spec_crit(p, false, p.tau),
                                                   d.outer, d.inner, {xi},
                                                   {eta}));
}

KernelEval kernel_III0(const LimitKernelParams& p, double xi, double eta) {
    p.validate(Family::III);
    ContourDuo d = contours_sup(p);
    return eval_from_grid(
        ct::bilinear_kernel_grid(spec_sup(p, false), d.outer, d.inner, {xi},
                                 {eta}));
}

KernelEval kernel_II0_bessel(const LimitKernelParams& p, double xi, double eta) {
    p.validate(Family::II);
    if (!(xi > 0.0) || !(eta > 0.0))
        throw domain_error("kernel_II0_bessel: evaluation points must be > 0");
    const int kap = p.kappa;
    const int a = p.nu + p.m;
    const double tau = p.tau;
    const double pref = std::pow(xi / eta, 0.5 * kap);
    const double cb = 4.0 * tau * std::pow(4.0 * tau, (double)a);
    const double rs = 1.0 / std::sqrt(eta);
    const double t_lo = 1.0 / 60.0;
    const double t_hi = (50.0 + 5.0 * (a + kap)) / xi;

    auto t_integral = [&](cplx s) {
        cplx fts = 4.0 * tau / s;
        return quad::gk_adaptive_c(
            [&](double w) {
                double t = std::exp(w);
                return std::pow(t, (double)(kap - a)) *
                       std::exp(-xi * t - 1.0 / t) *
                       sf::bessel_kernel_entire(a, fts, cplx(4.0 * tau / t, 0.0));
            },
            std::log(t_lo), std::log(t_hi), 1e-16, 1e-11);
    };
    auto level = [&](int M) {
        ct::ContourNodes nd =
            ct::discretize(ct::ContourSpec::make_circle(cplx(0.0, 0.0), rs, M));
        cplx acc(0.0, 0.0);
        for (size_t k = 0; k < nd.z.size(); ++k) {
            cplx s = nd.z[k];
            acc += nd.w[k] * std::pow(s, -(double)kap - 1.0) *
                   std::exp(eta * s + 1.0 / s) * t_integral(s);
        }
        if (!std::isfinite(acc.real()) || !std::isfinite(acc.imag()))
            throw numeric_error("kernel_II0_bessel: non-finite sample");
        return acc;
    };

    cplx prev = level(48);
    cplx cur = level(96);
    double scale = pref * cb;
    double err = scale * std::abs(cur - prev);
    double allowed = std::max(1e-11, 1e-9 * scale * std::abs(cur));
    if (err > allowed) {
        prev = cur;
        cur = level(192);
        err = scale * std::abs(cur - prev);
        allowed = std::max(1e-11, 1e-9 * scale * std::abs(cur));
        if (err > allowed)
            throw accuracy_error(
                "kernel_II0_bessel: s-contour refinement stalled (delta " +
                std::to_string(err) + ")");
    }
    double val = scale * cur.real();
    return {val, std::abs(scale * cur.imag()) / (1.0 + std::abs(val)), err};
}

// ---------------------------------------------------------------------------
// Meijer-G hard-edge kernel.
// ---------------------------------------------------------------------------

MeijerGResult meijer_g_kernel(int nu, int kappa, double x, double y) {
    if (nu < 0 || kappa < 0)
        throw domain_error("meijer_g_kernel: nu and kappa must be >= 0");
    if (!(x > 0.0) || !(y > 0.0))
        throw domain_error("meijer_g_kernel: evaluation points must be > 0");

    // residue series over v = n: precompute log denominators
    const int n_cap = 400;
    std::vector<double> logd((size_t)n_cap);
    for (int n = 0; n < n_cap; ++n)
        logd[(size_t)n] = sf::gammaln(n + 1.0) + sf::gammaln(n + nu + 1.0) +
                          sf::gammaln(n + kappa + 1.0);
    const double lx = std::log(x);

    auto residue_sum = [&](cplx u) {
        cplx acc(0.0, 0.0);
        int below = 0;
        for (int n = 0; n < n_cap; ++n) {
            double mag = std::exp(n * lx - logd[(size_t)n]);
            cplx term = ((n % 2 == 0) ? mag : -mag) / (kPi * (u - (double)n));
            acc += term;
            if (std::abs(term) < 1e-14 * std::abs(acc)) {
                if (++below >= 5) return acc;
            } else {
                below = 0;
            }
        }
        throw accuracy_error("meijer_g_kernel: residue series did not settle");
    };
    const double ly = std::log(y);
    auto line_integrand = [&](double t) {
        cplx u(-0.5, t);
        cplx lg = sf::clgamma(u + 1.0) + sf::clgamma(u + (double)nu + 1.0) +
                  sf::clgamma(u + (double)kappa + 1.0);
        cplx phi = std::sin(kPi * u) * std::exp(lg - (u + 1.0) * ly);
        return phi * residue_sum(u);
    };

    double T = 16.0;
    cplx v_prev = quad::gk_adaptive_c(line_integrand, -T, T, 1e-16, 1e-10);
    for (;;) {
        double T2 = 2.0 * T;
        cplx v_cur = v_prev +
                     quad::gk_adaptive_c(line_integrand, T, T2, 1e-16, 1e-10) +
                     quad::gk_adaptive_c(line_integrand, -T2, -T, 1e-16, 1e-10);
        double delta = std::abs(v_cur - v_prev) / (2.0 * kPi);
        if (delta <= 1e-8 * (1.0 + std::abs(v_cur) / (2.0 * kPi))) {
            double val = v_cur.real() / (2.0 * kPi);
            return {val, delta};
        }
        v_prev = v_cur;
        T = T2;
        if (T > 256.0)
            throw accuracy_error(
                "meijer_g_kernel: line truncation did not converge");
    }
}

// ---------------------------------------------------------------------------
// Rank-one split functions.
// ---------------------------------------------------------------------------

double lambda_tilde(Family f, const LimitKernelParams& p, int k, double x,
                    double radius_scale) {
    p.validate(f);
    if (k < 1 || k > p.m)
        throw domain_error("lambda_tilde: k must satisfy 1 <= k <= m");
    if (!(x > 0.0)) throw domain_error("lambda_tilde: x must be > 0");
    if (!(radius_scale > 0.0))
        throw domain_error("lambda_tilde: radius_scale must be > 0");

    if (f == Family::III) {
        double rx = std::sqrt(x);
        const int pw = p.nu + p.m;
        ct::ContourSpec c0 =
            ct::ContourSpec::make_circle(cplx(0.0, 0.0), 0.9 * radius_scale, 192);
        ct::QuadResult q = ct::quad_closed(c0, [&](cplx u) {
            return std::exp(rx * u - 1.0 / u) * std::pow(u, -(double)pw) *
                   spike_poly(p.pis, k - 1, u);
        });
        return q.value.real() / (2.0 * std::pow(x, 0.25));
    }
    const double tau = (f == Family::II) ? p.tau : 0.0;
    const int kap = p.kappa, pw = p.nu + p.m;
    double r0 = 0.45 * radius_scale;
    if (!(r0 < 0.98))
        throw domain_error(
            "lambda_tilde: origin contour would reach the K-Bessel branch "
            "point at u = 1");
    ct::ContourSpec c0 = ct::ContourSpec::make_circle(cplx(0.0, 0.0), r0, 192);
    ct::QuadResult q = ct::quad_closed(c0, [&](cplx u) {
        cplx omu = 1.0 - u;
        cplx val = sf::bessel_k(kap, 2.0 * std::sqrt(omu * x)) *
                   std::pow(omu, 0.5 * kap) * std::pow(u, -(double)pw) *
                   spike_poly(p.pis, k - 1, u);
        if (tau != 0.0) val *= std::exp(-tau / u);
        return val;
    });
    return 2.0 * q.value.real();
}

double lambda_fn(Family f, const LimitKernelParams& p, int k, double x,
                 double radius_scale) {
    p.validate(f);
    if (k < 1 || k > p.m)
        throw domain_error("lambda_fn: k must satisfy 1 <= k <= m");
    if (!(x > 0.0)) throw domain_error("lambda_fn: x must be > 0");
    if (!(radius_scale > 0.0))
        throw domain_error("lambda_fn: radius_scale must be > 0");
    const double mp = max_pi(p.pis, k);
    const int pw = p.nu + p.m;

    if (f == Family::III) {
        double rx = std::sqrt(x);
        double cv = 0.5 * mp;
        double rv = cv + std::max(0.15 * mp, 0.3) * radius_scale;
        ct::ContourSpec cp = ct::ContourSpec::make_circle(cplx(cv, 0.0), rv, 192);
        for (int l = 0; l < k; ++l)
            if (!cp.contains(cplx(p.pis[(size_t)l], 0.0)))
                throw domain_error("lambda_fn: contour does not cover spike");
        ct::QuadResult q = ct::quad_closed(cp, [&](cplx v) {
            return std::exp(-rx * v + 1.0 / v) * std::pow(v, (double)pw) *
                   spike_poles(p.pis, k, v);
        });
        return q.value.real() / (2.0 * std::pow(x, 0.25));
    }
    const double tau = (f == Family::II) ? p.tau : 0.0;
    const int kap = p.kappa;
    double cv = 0.5 * mp;
    double rv = cv + std::max(0.1 * std::min(mp, 1.0 - mp), 0.06) * radius_scale;
    ct::ContourSpec cp = ct::ContourSpec::make_circle(cplx(cv, 0.0), rv, 192);
    for (int l = 0; l < k; ++l)
        if (!cp.contains(cplx(p.pis[(size_t)l], 0.0)))
            throw domain_error("lambda_fn: contour does not cover spike");
    ct::QuadResult q = ct::quad_closed(cp, [&](cplx v) {
        cplx val = std::pow(x, 0.5 * kap) * sf::iota(kap, x * (1.0 - v)) *
                   std::pow(v, (double)pw) * spike_poles(p.pis, k, v);
        if (tau != 0.0) val *= std::exp(tau / v);
        return val;
    });
    return q.value.real();
}

// ---------------------------------------------------------------------------
// Integrable (f, g) form.
// ---------------------------------------------------------------------------

IntegrableState make_integrable(const LimitKernelParams& p) {
    p.validate(Family::II);
    return {p.nu + p.m, p.kappa, p.tau};
}

double integrable_f(const IntegrableState& st, double x, int deriv_order) {
    if (deriv_order < 0 || deriv_order > 4)
        throw domain_error("integrable_f: derivative order must be 0..4");
    if (!(x > 0.0)) throw domain_error("integrable_f: x must be > 0");
    if (!(st.tau > 0.0) || st.alpha_ord < 0 || st.kappa < 0)
        throw domain_error("integrable_f: invalid state");
    const int a = st.alpha_ord, kap = st.kappa, r = deriv_order;
    const double tau = st.tau;
    const double t_lo = 1.0 / 58.0;
    const double t_hi = (52.0 + 4.0 * (a + kap + r)) / x;
    double sign = (r % 2 == 0) ? 1.0 : -1.0;
    double val = quad::gk_adaptive(
        [&](double w) {
            double t = std::exp(w);
            return std::pow(t, (double)(kap - a - 2 + r)) *
                   std::exp(-x * t - 1.0 / t) *
                   sf::iota(a, cplx(-tau / t, 0.0)).real();
        },
        std::log(t_lo), std::log(t_hi), 1e-16, 1e-12);
    return sign * std::pow(tau, 0.5 * a) * val;
}

double integrable_g(const IntegrableState& st, double x, int deriv_order) {
    if (deriv_order < 0 || deriv_order > 4)
        throw domain_error("integrable_g: derivative order must be 0..4");
    if (!(st.tau > 0.0) || st.alpha_ord < 0 || st.kappa < 0)
        throw domain_error("integrable_g: invalid state");
    const int a = st.alpha_ord, kap = st.kappa, r = deriv_order;
    const double tau = st.tau, ltau = std::log(tau);
    const double ax = std::abs(x);
    const double lax = (ax > 0.0) ? std::log(ax) : 0.0;
    // g^{(r)}(x) = tau^{a/2} sum_{j,q} (-tau)^j / (j! (a+j)!)
    //                * x^{e-r} / ((e-r)! q!),   e = kappa + 2 + q + j,
    // terms with e < r vanish (polynomial part differentiated away).
    double acc = 0.0;
    for (int j = 0;; ++j) {
        double lj = j * ltau - sf::gammaln(j + 1.0) - sf::gammaln(a + j + 1.0);
        double jsign = (j % 2 == 0) ? 1.0 : -1.0;
        double row = 0.0;
        int below = 0;
        for (int q = 0;; ++q) {
            int e = kap + 2 + q + j;
            if (e >= r) {
                double lt = (e - r) * lax - sf::gammaln(e - r + 1.0) -
                            sf::gammaln(q + 1.0);
                double term = std::exp(lj + lt);
                if (x < 0.0 && ((e - r) % 2 != 0)) term = -term;
                if (x == 0.0) term = (e == r) ? std::exp(lj - sf::gammaln(q + 1.0)) : 0.0;
                row += term;
                if (std::abs(term) < 1e-18 * (std::abs(acc) + std::abs(row) + 1e-300)) {
                    if (++below >= 3) break;
                } else {
                    below = 0;
                }
            }
            if (q > 500)
                throw accuracy_error("integrable_g: series did not settle");
        }
        acc += jsign * row;
        if (std::abs(row) < 1e-18 * (std::abs(acc) + 1e-300) && j > 4) break;
        if (j > 400) throw accuracy_error("integrable_g: series did not settle");
    }
    return std::pow(tau, 0.5 * a) * acc;
}

double concomitant(const IntegrableState& st, double x, double y) {
    const double A = st.alpha_ord - 2.0 * st.kappa - st.tau;
    const double ak = (double)st.alpha_ord * st.kappa -
                      (double)st.kappa * st.kappa;
    double f0 = integrable_f(st, x, 0), f1 = integrable_f(st, x, 1),
           f2 = integrable_f(st, x, 2), f3 = integrable_f(st, x, 3);
    double g0 = integrable_g(st, y, 0), g1 = integrable_g(st, y, 1),
           g2 = integrable_g(st, y, 2), g3 = integrable_g(st, y, 3);
    return x * y * f3 * g3 + f2 * (g0 - (A - 1.0) * g1 - y * g2) +
           g2 * (f0 + (A + 1.0) * f1 - x * f2) - ak * f2 * g2 - f1 * g1;
}

double kernel_II_integrable(const IntegrableState& st, double xi, double eta) {
    if (!(xi > 0.0) || !(eta > 0.0))
        throw domain_error("kernel_II_integrable: evaluation points must be > 0");
    auto off_diag = [&](double a, double b) {
        return std::pow(a / b, 0.5 * st.kappa) * concomitant(st, a, b) /
               (b - a);
    };
    if (std::abs(eta - xi) > 1e-8 * (1.0 + std::abs(xi)))
        return off_diag(xi, eta);
    auto avg = [&](double h) {
        return 0.5 * (off_diag(xi, xi + h) + off_diag(xi, xi - h));
    };
    double h = 1e-5 * (1.0 + xi);
    return (4.0 * avg(0.5 * h) - avg(h)) / 3.0;
}

// ---------------------------------------------------------------------------
// Interpolation limits.
// ---------------------------------------------------------------------------

namespace {

// u-side split function on a rectangle hugging the negative axis: for large
// tau the factor e^{-tau/u} is O(1) on Re u <= 0 and dies on the right edge,
// so no cancellation blow-up anywhere.
double tilde_crit_rect(const LimitKernelParams& p, int k, double x) {
    const int kap = p.kappa, pw = p.nu + p.m;
    const double tau = p.tau;
    double L = 1.5 * tau + 2.0;
    ct::ContourSpec rect = ct::ContourSpec::make_rectangle(-L, 0.9, L, 1024);
    ct::QuadResult q = ct::quad_closed(rect, [&](cplx u) {
        cplx omu = 1.0 - u;
        return sf::bessel_k(kap, 2.0 * std::sqrt(omu * x)) *
               std::pow(omu, 0.5 * kap) * std::pow(u, -(double)pw) *
               std::exp(-tau / u) * spike_poly(p.pis, k - 1, u);
    });
    return 2.0 * q.value.real();
}

// v-side split function on a big origin circle: radius ~ tau/6 keeps
// e^{tau/v} bounded by e^6 while still covering {0} u {pi}.
double fn_crit_bigcircle(const LimitKernelParams& p, int k, double x) {
    const int kap = p.kappa, pw = p.nu + p.m;
    const double tau = p.tau;
    double R = std::max({1.4 * max_pi(p.pis, k) + 0.3, tau / 6.0, 0.6});
    ct::ContourSpec cp = ct::ContourSpec::make_circle(cplx(0.0, 0.0), R, 256);
    ct::QuadResult q = ct::quad_closed(cp, [&](cplx v) {
        return std::pow(x, 0.5 * kap) * sf::iota(kap, x * (1.0 - v)) *
               std::pow(v, (double)pw) * std::exp(tau / v) *
               spike_poles(p.pis, k, v);
    });
    return q.value.real();
}

// e^{2 sqrt xi - 2 sqrt eta} K_II(tau; xi, eta) on a grid, for the
// supercritical scaling xi = x/tau^2 where the unscaled kernel over/underflows.
ct::KernelGridResult kernel_II_scaled_grid(const LimitKernelParams& p,
                                           const std::vector<double>& xs,
                                           const std::vector<double>& ys) {
    p.validate(Family::II);
    double xmax = 0.0;
    for (double x : xs) xmax = std::max(xmax, x);
    for (double y : ys) xmax = std::max(xmax, y);
    double ru = 1.0 / (1.0 + 2.0 * std::sqrt(xmax));
    double mp = max_pi(p.pis, p.m);
    double cv = 0.6 * mp, rv = 0.72 * mp;
    if (p.pis.empty()) {
        cv = 0.0;
        rv = 0.25 * ru;
    }
    if (!(cv + rv < 0.8 * ru))
        throw domain_error(
            "kernel_II_scaled_grid: spikes too large for the scaled contour "
            "layout");
    ct::ContourSpec outer = ct::ContourSpec::make_circle(cplx(0.0, 0.0), ru, 256);
    ct::ContourSpec inner = ct::ContourSpec::make_circle(cplx(cv, 0.0), rv, 256);
    return ct::bilinear_kernel_grid(spec_crit_scaled(p, p.tau), outer, inner,
                                    xs, ys);
}

}  // namespace

TransitionReport transition_limits(TransitionKind which,
                                   const LimitKernelParams& base,
                                   const std::vector<double>& tau_schedule,
                                   const std::vector<double>& grid) {
    if (tau_schedule.size() < 3)
        throw domain_error("transition_limits: need at least three taus");
    if (grid.empty()) throw domain_error("transition_limits: empty grid");
    for (double g : grid)
        if (!(g > 0.0))
            throw domain_error("transition_limits: grid points must be > 0");
    const size_t n = grid.size();

    TransitionReport rep;
    rep.taus = tau_schedule;

    Eigen::MatrixXd target((Eigen::Index)n, (Eigen::Index)n);
    if (which == TransitionKind::to_I) {
        LimitKernelParams pI;
        pI.nu = base.nu;
        pI.kappa = base.kappa;
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
                target((Eigen::Index)i, (Eigen::Index)j) =
                    kernel_I(pI, grid[i], grid[j]).value;
    } else if (which == TransitionKind::to_III) {
        LimitKernelParams p3 = base;  // pis are the fixed pihat_l
        target = kernel_III_grid(p3, grid, grid).values;
    } else {
        target = kernel_IV_grid(base, grid, grid).values;
    }

    for (double tau : tau_schedule) {
        LimitKernelParams pt = base;
        pt.tau = tau;
        Eigen::MatrixXd cur((Eigen::Index)n, (Eigen::Index)n);
        if (which == TransitionKind::to_I) {
            // Bulk through the integrable (f, g) form: its one-dimensional
            // Laplace-type integrals stay cheap at large tau, where the
            // (t, s)-representation's oscillatory band becomes prohibitive.
            IntegrableState st = make_integrable(pt);
            std::vector<std::array<double, 4>> fs(n), gs(n);
            for (size_t i = 0; i < n; ++i)
                for (int r = 0; r < 4; ++r) {
                    fs[i][(size_t)r] = integrable_f(st, grid[i] / tau, r);
                    gs[i][(size_t)r] = integrable_g(st, grid[i] / tau, r);
                }
            const double A = st.alpha_ord - 2.0 * st.kappa - st.tau;
            const double ak = (double)st.alpha_ord * st.kappa -
                              (double)st.kappa * st.kappa;
            std::vector<std::vector<double>> lt((size_t)base.m),
                lf((size_t)base.m);
            for (int k = 1; k <= base.m; ++k) {
                lt[(size_t)k - 1].resize(n);
                lf[(size_t)k - 1].resize(n);
                for (size_t i = 0; i < n; ++i) {
                    lt[(size_t)k - 1][i] = tilde_crit_rect(pt, k, grid[i] / tau);
                    lf[(size_t)k - 1][i] = fn_crit_bigcircle(pt, k, grid[i] / tau);
                }
            }
            for (size_t i = 0; i < n; ++i)
                for (size_t j = 0; j < n; ++j) {
                    double x = grid[i] / tau, y = grid[j] / tau;
                    double v;
                    if (i == j) {
                        v = kernel_II_integrable(st, x, y);
                    } else {
                        double con = x * y * fs[i][3] * gs[j][3] +
                                     fs[i][2] * (gs[j][0] - (A - 1.0) * gs[j][1] -
                                                 y * gs[j][2]) +
                                     gs[j][2] * (fs[i][0] + (A + 1.0) * fs[i][1] -
                                                 x * fs[i][2]) -
                                     ak * fs[i][2] * gs[j][2] - fs[i][1] * gs[j][1];
                        v = std::pow(x / y, 0.5 * st.kappa) * con / (y - x);
                    }
                    for (int k = 0; k < base.m; ++k)
                        v += lt[(size_t)k][i] * lf[(size_t)k][j];
                    cur((Eigen::Index)i, (Eigen::Index)j) = v / tau;
                }
        } else if (which == TransitionKind::to_III) {
            for (size_t l = 0; l < pt.pis.size(); ++l) pt.pis[l] *= tau;
            std::vector<double> sc(n);
            for (size_t i = 0; i < n; ++i) sc[i] = grid[i] / (tau * tau);
            cur = kernel_II_scaled_grid(pt, sc, sc).values / (tau * tau);
        } else {
            cur = kernel_II_grid(pt, grid, grid).values;
        }
        rep.sup_dist.push_back((cur - target).cwiseAbs().maxCoeff());
    }

    size_t s = rep.sup_dist.size();
    rep.decreasing_tail = rep.sup_dist[s - 3] > rep.sup_dist[s - 2] &&
                          rep.sup_dist[s - 2] > rep.sup_dist[s - 1];
    if (!rep.decreasing_tail)
        throw accuracy_error(
            "transition_limits: distances not decreasing over the last three "
            "taus (" + std::to_string(rep.sup_dist[s - 3]) + ", " +
            std::to_string(rep.sup_dist[s - 2]) + ", " +
            std::to_string(rep.sup_dist[s - 1]) + ")");
    return rep;
}

}  // namespace rmt::lim
