#include "fredholm.hpp"

#include <cmath>
#include <complex>

#include "quadrature.hpp"
#include "specfun.hpp"

namespace rmt::fred {

namespace {

double det_i_minus_k(const KernelGridFn& kernel, const NystromRule& rule) {
    const int n = (int)rule.points.size();
    Eigen::MatrixXd k = kernel(rule.points, rule.points);
    if (k.rows() != n || k.cols() != n)
        throw numeric_error("gap: kernel grid shape mismatch");
    Eigen::VectorXd sw(n);
    for (int i = 0; i < n; ++i) sw(i) = std::sqrt(rule.weights[(size_t)i]);
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n) -
                        sw.asDiagonal() * k * sw.asDiagonal();
    double det = Eigen::PartialPivLU<Eigen::MatrixXd>(m).determinant();
    if (!std::isfinite(det)) throw numeric_error("gap: determinant is not finite");
    return det;
}

}  // namespace

NystromRule nystrom_rule(double s, int nodes, Transform transform) {
    if (!(s > 0.0)) throw domain_error("nystrom_rule: s must be > 0");
    if (nodes < 2) throw domain_error("nystrom_rule: need at least 2 nodes");
    NystromRule r;
    r.nodes = nodes;
    r.transform = transform;
    r.points.resize((size_t)nodes);
    r.weights.resize((size_t)nodes);
    if (transform == Transform::identity) {
        quad::Rule1D gl = quad::gauss_legendre_ab(nodes, 0.0, s);
        for (int i = 0; i < nodes; ++i) {
            r.points[(size_t)i] = gl.x[(size_t)i];
            r.weights[(size_t)i] = gl.w[(size_t)i];
        }
    } else {
        quad::Rule1D gl = quad::gauss_legendre_ab(nodes, 0.0, 1.0);
        for (int i = 0; i < nodes; ++i) {
            double t = gl.x[(size_t)i];
            r.points[(size_t)i] = s * t * t;
            r.weights[(size_t)i] = 2.0 * s * t * gl.w[(size_t)i];
        }
    }
    return r;
}

GapResult gap_probability(const KernelGridFn& kernel, double s,
                          const NystromRule& rule) {
    if (s < 0.0) throw domain_error("gap_probability: s must be >= 0");
    if (s == 0.0) return GapResult{1.0, 0.0, 0};
    const double tol = 1e-8;
    const int ceiling = std::max(160, 2 * rule.nodes);
    int n = rule.nodes;
    double d_prev = det_i_minus_k(kernel, nystrom_rule(s, n, rule.transform));
    for (;;) {
        int n2 = 2 * n;
        double d_cur = det_i_minus_k(kernel, nystrom_rule(s, n2, rule.transform));
        double err = std::abs(d_cur - d_prev);
        if (err <= tol || n2 >= ceiling) return GapResult{d_cur, err, n2};
        n = n2;
        d_prev = d_cur;
    }
}

std::vector<double> smallest_eigenvalue_cdf(const KernelGridFn& kernel,
                                            const std::vector<double>& s_grid,
                                            const NystromRule& rule) {
    std::vector<double> out;
    out.reserve(s_grid.size());
    for (double s : s_grid)
        out.push_back(1.0 - gap_probability(kernel, s, rule).value);
    return out;
}

double goodform_limit(double pi1, int nu, int kappa, double y) {
    if (!(pi1 > 0.0 && pi1 < 1.0))
        throw domain_error("goodform_limit: pi1 must lie in (0,1)");
    if (nu < 0 || kappa < 0)
        throw domain_error("goodform_limit: nu and kappa must be >= 0");
    if (y < 0.0) throw domain_error("goodform_limit: y must be >= 0");
    if (y == 0.0) return 0.0;
    const double root_c = std::sqrt(1.0 - pi1);
    const double lg_const = std::log(2.0) + (nu + 1.0) * std::log(pi1) -
                            sf::gammaln(nu + 1.0) -
                            0.5 * kappa * std::log(1.0 - pi1);
    // Hankel asymptotic tail sum S(z) = sum_k a_k(m) (sign z)^{-k} with
    // a_k(m) = prod_j (4m^2-(2j-1)^2) / (k! 8^k); sign +1 for K, -1 for I.
    auto hankel_sum = [](int m, double z, double sign) {
        double s = 1.0, t = 1.0;
        for (int k = 1; k <= 12; ++k) {
            t *= sign * (4.0 * m * m - (2.0 * k - 1.0) * (2.0 * k - 1.0)) /
                 (8.0 * k * z);
            s += t;
            if (std::abs(t) < 1e-18) break;
        }
        return s;
    };
    // substitute t = r^2: integrand 2 r^{nu+1} K_{nu-kappa}(2r) I_kappa(2 sqrt(1-pi1) r)
    auto integrand = [&](double r) {
        double zk = 2.0 * r, zi = 2.0 * root_c * r;
        if (zk > 650.0 || zi > 650.0) {
            // K underflows while I overflows out there; assemble the product
            // K_m(zk) I_kappa(zi) = e^{zi-zk} S_K S_I / (2 sqrt(zk zi)) in
            // log space instead (leading Hankel forms sqrt(pi/2z) e^{-z} and
            // e^z / sqrt(2 pi z))
            double lg = std::log(2.0) + (nu + 1.0) * std::log(r) + (zi - zk) -
                        0.5 * std::log(4.0 * zk * zi);
            return std::exp(lg) * hankel_sum(std::abs(nu - kappa), zk, 1.0) *
                   hankel_sum(kappa, zi, -1.0);
        }
        double kv = sf::bessel_k(std::abs(nu - kappa), std::complex<double>(zk, 0.0))
                        .real();
        double iv = sf::bessel_i(kappa, std::complex<double>(zi, 0.0)).real();
        return 2.0 * std::pow(r, nu + 1.0) * kv * iv;
    };
    // decay exp(-2 r (1 - sqrt(1-pi1))) caps the useful range
    double r_hi = std::min(std::sqrt(y), (52.0 + 5.0 * (nu + kappa)) / (1.0 - root_c));
    double integral =
        quad::gk_adaptive(integrand, 1e-14, r_hi, 1e-14, 1e-11);
    return std::exp(lg_const) * integral;
}

}  // namespace rmt::fred
