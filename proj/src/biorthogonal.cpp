#include "biorthogonal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>

#include "errors.hpp"
#include "quadrature.hpp"
#include "specfun.hpp"

namespace rmt::bi {

namespace {

using cplx_t = std::complex<double>;

void require_distinct_positive(const std::vector<double>& deltas, double alpha) {
    std::vector<double> d = deltas;
    std::sort(d.begin(), d.end());
    if (!(d[0] > 1e-12 * alpha))
        throw domain_error(
            "biorthogonal: zero delta makes the Gram matrix singular; use the "
            "contour kernel (uniform in delta) instead");
    for (size_t i = 0; i + 1 < d.size(); ++i)
        if (d[i + 1] - d[i] < 1e-6 * alpha)
            throw domain_error(
                "biorthogonal: deltas closer than 1e-6*alpha make the Gram matrix "
                "numerically singular; use the contour kernel instead");
}

// Inverse-transpose with one step of iterative refinement, plus a 1-norm
// condition estimate.
void invert_gram(BiorthogonalSystem& s) {
    const Eigen::MatrixXd& g = s.gram;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(g);
    if (!lu.isInvertible())
        throw domain_error("biorthogonal: Gram matrix not invertible");
    Eigen::MatrixXd id = Eigen::MatrixXd::Identity(s.n, s.n);
    Eigen::MatrixXd x = lu.solve(id);
    x += lu.solve(id - g * x);
    auto norm1 = [](const Eigen::MatrixXd& m) {
        return m.cwiseAbs().colwise().sum().maxCoeff();
    };
    s.gram_cond = norm1(g) * norm1(x);
    s.coeffs = x.transpose();
}

}  // namespace

BiorthogonalSystem gaussian_system(const ens::GaussianEnsembleParams& p) {
    p.validate();
    require_distinct_positive(p.deltas, p.alpha);
    const int n = p.n, nu = p.nu(), kappa = p.kappa();
    const double a = p.alpha;
    const std::vector<double> deltas = p.deltas;

    BiorthogonalSystem s;
    s.n = n;
    s.xi = [deltas, kappa](int i, double x) {
        return sf::bessel_i(kappa, cplx_t(2.0 * deltas[(size_t)(i - 1)] * std::sqrt(x), 0.0))
            .real();
    };
    s.eta = [a, nu, kappa](int i, double x) {
        return std::pow(x, 0.5 * (nu + i - 1)) *
               sf::bessel_k(nu - kappa + i - 1, cplx_t(2.0 * a * std::sqrt(x), 0.0))
                   .real();
    };
    s.gram.resize(n, n);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            double dj = deltas[(size_t)(j - 1)];
            double lg = sf::gammaln((double)(nu + i)) +
                        (kappa > 0 ? kappa * std::log(dj) : 0.0) - std::log(2.0) -
                        (nu + kappa + i + 1) * std::log(a) -
                        (nu + i) * std::log1p(-dj * dj / (a * a));
            s.gram(i - 1, j - 1) = std::exp(lg);
        }
    invert_gram(s);
    return s;
}

BiorthogonalSystem jacobi_system(const JacobiEnsembleParams& p) {
    p.validate();
    require_distinct_positive(p.deltas, p.alpha);
    const int n = p.n, nu = p.nu, nup = p.nu_prime, kappa = p.kappa;
    const double a = p.alpha;
    const std::vector<double> deltas = p.deltas;
    const int hyp_a = nu + nup + n + 1;
    const double b_exp = (double)(nu + nup - kappa + n - 1);

    // eta quadrature rule: weight (1-t)^{b_exp}, doubled until stable on probe
    // arguments covering the exponent range of the family.
    auto rule = std::make_shared<quad::Rule1D>();
    {
        auto eval = [&](const quad::Rule1D& r, int i, double x) {
            double s = 0.0;
            for (size_t k = 0; k < r.x.size(); ++k) {
                double t = r.x[k];
                s += r.w[k] * std::pow(x / t, (double)(nu - kappa + i - 1)) *
                     std::exp(-a * x / t) / t;
            }
            return s;
        };
        quad::Rule1D prev = quad::gauss_jacobi01(64, b_exp, 0.0);
        bool done = false;
        for (int q = 128; q <= 2048 && !done; q *= 2) {
            quad::Rule1D cur = quad::gauss_jacobi01(q, b_exp, 0.0);
            double worst = 0.0;
            for (int i : {1, n})
                for (double x : {0.05 / a, 0.5 / a, 2.0 / a, 10.0 / a}) {
                    double va = eval(prev, i, x), vb = eval(cur, i, x);
                    worst = std::max(worst, std::abs(va - vb) / (1e-300 + std::abs(vb)));
                }
            if (worst <= 1e-10) {
                *rule = cur;
                done = true;
            } else {
                prev = std::move(cur);
            }
        }
        if (!done)
            throw accuracy_error("jacobi_system: eta quadrature not stable at 2048 nodes");
    }

    BiorthogonalSystem s;
    s.n = n;
    s.xi = [deltas, a, kappa, hyp_a](int i, double x) {
        double di = deltas[(size_t)(i - 1)];
        return std::pow(x, (double)kappa) *
               sf::hyp1f1(hyp_a, kappa + 1, cplx_t(di * di * x / a, 0.0)).real();
    };
    s.eta = [rule, a, nu, kappa, b_exp](int i, double x) {
        const double pt = (double)(nu - kappa + i - 1);
        if (x == 0.0)
            return pt > 0.0 ? std::exp(sf::gammaln(pt) - pt * std::log(a))
                            : std::numeric_limits<double>::infinity();
        if (a * x < 0.05) {
            // The fixed Gauss-Jacobi rule in t cannot resolve the
            // exp(-a x / t) boundary layer at t ~ a x once a x is small.
            // Substituting u = x (1 + s) gives
            //   eta = x^pt e^{-ax} int_0^inf s^b (1+s)^{pt-1-b} e^{-axs} ds,
            // a power-law/exponential profile that a log-grid adaptive rule
            // integrates to near machine precision for every pt.
            double z = a * x;
            double s_hi = (45.0 + 10.0 * (b_exp + std::max(pt, 0.0) + 2.0)) / z;
            double integral = quad::gk_adaptive(
                [&](double w) {
                    double sv = std::exp(w);
                    return std::pow(sv, b_exp + 1.0) *
                           std::pow(1.0 + sv, pt - 1.0 - b_exp) *
                           std::exp(-z * sv);
                },
                std::log(1e-16), std::log(s_hi), 1e-300, 1e-12);
            return std::pow(x, pt) * std::exp(-z) * integral;
        }
        double sum = 0.0;
        for (size_t k = 0; k < rule->x.size(); ++k) {
            double t = rule->x[k];
            sum += rule->w[k] * std::pow(x / t, (double)(nu - kappa + i - 1)) *
                   std::exp(-a * x / t) / t;
        }
        return sum;
    };
    s.gram.resize(n, n);
    const double lg_front = sf::gammaln((double)(kappa + 1)) +
                            sf::gammaln((double)(nu + nup - kappa + n)) -
                            sf::gammaln((double)(nu + nup + n + 1));
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            double dj = deltas[(size_t)(j - 1)];
            double lg = lg_front + sf::gammaln((double)(nu + i)) -
                        (nu + i) * std::log(a) -
                        (nu + i) * std::log1p(-dj * dj / (a * a));
            s.gram(i - 1, j - 1) = std::exp(lg);
        }
    invert_gram(s);
    return s;
}

double kernel_gram(const BiorthogonalSystem& s, double x, double y) {
    if (s.gram_cond > 1e12)
        std::fprintf(stderr,
                     "kernel_gram: warning: Gram condition %.3e exceeds 1e12; "
                     "values may be inaccurate\n",
                     s.gram_cond);
    Eigen::VectorXd ev(s.n), xv(s.n);
    for (int i = 1; i <= s.n; ++i) {
        ev(i - 1) = s.eta(i, x);
        xv(i - 1) = s.xi(i, y);
    }
    return ev.dot(s.coeffs * xv);
}

double density_from_pdf_oracle(const ens::GaussianEnsembleParams& p, double x) {
    if (p.n > 3)
        throw domain_error("density_from_pdf_oracle: supports N <= 3 only");
    if (p.n == 1) return ens::joint_pdf(p, {x});
    const double cap = std::pow(40.0 / p.alpha, 2.0);  // K_* argument ~ 80
    const double lo = std::log(1e-12), hi = std::log(cap);
    if (p.n == 2) {
        auto f = [&](double u) {
            double y = std::exp(u);
            return ens::joint_pdf(p, {x, y}) * y;
        };
        return 2.0 * quad::gk_adaptive(f, lo, hi, 1e-12, 1e-9);
    }
    auto outer = [&](double u) {
        double y = std::exp(u);
        auto inner = [&](double v) {
            double z = std::exp(v);
            return ens::joint_pdf(p, {x, y, z}) * z;
        };
        return quad::gk_adaptive(inner, lo, hi, 1e-13, 1e-7) * y;
    };
    return 3.0 * quad::gk_adaptive(outer, lo, hi, 1e-12, 1e-7);
}

}  // namespace rmt::bi
