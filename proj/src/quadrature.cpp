#include "quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "errors.hpp"

namespace rmt::quad {

namespace {

// Golub-Welsch: nodes are eigenvalues of the symmetric tridiagonal Jacobi
// matrix built from the monic three-term recurrence p_{k+1} = (x-a_k)p_k -
// b_k p_{k-1}; weights are mu0 * (first eigenvector component)^2.
Rule1D golub_welsch(const std::vector<double>& a, const std::vector<double>& b,
                    double mu0) {
    int n = (int)a.size();
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        J(i, i) = a[i];
        if (i + 1 < n) {
            double off = std::sqrt(b[i + 1]);
            J(i, i + 1) = off;
            J(i + 1, i) = off;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    Rule1D r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < n; ++i) {
        r.x[i] = es.eigenvalues()(i);
        double v = es.eigenvectors()(0, i);
        r.w[i] = mu0 * v * v;
    }
    return r;
}

}  // namespace

Rule1D gauss_legendre(int n) {
    std::vector<double> a(n, 0.0), b(n, 0.0);
    for (int k = 1; k < n; ++k) b[k] = (double)(k * k) / (4.0 * k * k - 1.0);
    return golub_welsch(a, b, 2.0);
}

Rule1D gauss_legendre_ab(int n, double a, double b) {
    Rule1D r = gauss_legendre(n);
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
        r.x[i] = mid + half * r.x[i];
        r.w[i] *= half;
    }
    return r;
}

Rule1D gauss_laguerre_gen(int n, double alpha) {
    if (alpha <= -1.0)
        throw std::invalid_argument("gauss_laguerre_gen: alpha must be > -1");
    std::vector<double> a(n), b(n, 0.0);
    for (int k = 0; k < n; ++k) a[k] = 2.0 * k + alpha + 1.0;
    for (int k = 1; k < n; ++k) b[k] = (double)k * (k + alpha);
    return golub_welsch(a, b, std::tgamma(alpha + 1.0));
}

Rule1D gauss_jacobi01(int n, double A, double B) {
    if (A <= -1.0 || B <= -1.0)
        throw std::invalid_argument("gauss_jacobi01: exponents must be > -1");
    // Rules get rebuilt with identical parameters by every contour-kernel
    // evaluation, so memoize the eigensolve-heavy construction.
    static std::mutex cache_mutex;
    static std::map<std::tuple<int, double, double>, Rule1D> cache;
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = cache.find({n, A, B});
        if (it != cache.end()) return it->second;
    }
    // Monic recurrence for weight (1-x)^A (1+x)^B on [-1,1]
    // (Gautschi's tables), then map x -> t = (1+x)/2 with weight rescale.
    std::vector<double> a(n), b(n, 0.0);
    double ab = A + B;
    a[0] = (B - A) / (ab + 2.0);
    for (int k = 1; k < n; ++k) {
        double d = (2.0 * k + ab) * (2.0 * k + ab + 2.0);
        a[k] = (B * B - A * A) / d;
    }
    for (int k = 1; k < n; ++k) {
        double num = 4.0 * k * (k + A) * (k + B) * (k + ab);
        double den = (2.0 * k + ab) * (2.0 * k + ab) * (2.0 * k + ab + 1.0) *
                     (2.0 * k + ab - 1.0);
        b[k] = num / den;
    }
    double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(A + 1.0) +
                          std::lgamma(B + 1.0) - std::lgamma(ab + 2.0));
    Rule1D r = golub_welsch(a, b, mu0);
    // map to (0,1): t = (1+x)/2; (1-x)^A(1+x)^B dx = 2^{A+B+1}(1-t)^A t^B dt
    double scale = std::exp(-(ab + 1.0) * std::log(2.0));
    for (int i = 0; i < n; ++i) {
        r.x[i] = 0.5 * (1.0 + r.x[i]);
        r.w[i] *= scale;
    }
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        cache.emplace(std::make_tuple(n, A, B), r);
    }
    return r;
}

namespace {

// QUADPACK 15-point Kronrod / 7-point Gauss constants.
const double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
const double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
const double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename R>
struct GKStack {
    struct Seg {
        double a, b;
        R val;
        double err;
        int depth;
    };
    std::vector<Seg> segs;
};

template <typename R, typename F>
void gk15(const F& f, double a, double b, R& val, double& err) {
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    R sumk = kWgk[7] * f(mid);
    R sumg = kWg[3] * f(mid);
    for (int i = 0; i < 7; ++i) {
        R fl = f(mid - half * kXgk[i]);
        R fr = f(mid + half * kXgk[i]);
        sumk += kWgk[i] * (fl + fr);
        if (i % 2 == 1) sumg += kWg[i / 2] * (fl + fr);
    }
    val = half * sumk;
    err = std::abs(half * (sumk - sumg));
    if (!(std::abs(val) < std::numeric_limits<double>::infinity())) {
        std::ostringstream os;
        os << "non-finite integrand sample in [" << a << ", " << b << "]";
        throw numeric_error(os.str());
    }
}

template <typename R, typename F>
R gk_adaptive_impl(const F& f, double a, double b, double abstol,
                   double reltol, int max_depth) {
    R whole;
    double err0;
    gk15<R>(f, a, b, whole, err0);
    typedef typename GKStack<R>::Seg Seg;
    std::vector<Seg> stack{Seg{a, b, whole, err0, 0}};
    R total = R(0);
    double total_mag = std::abs(whole);
    while (!stack.empty()) {
        Seg s = stack.back();
        stack.pop_back();
        double local_tol =
            std::max(abstol * (s.b - s.a) / (b - a), reltol * total_mag);
        if (s.err <= local_tol || s.depth >= max_depth ||
            s.b - s.a < 1e-15 * (std::abs(s.a) + std::abs(s.b) + 1.0)) {
            total += s.val;
            continue;
        }
        double mid = 0.5 * (s.a + s.b);
        R v1, v2;
        double e1, e2;
        gk15<R>(f, s.a, mid, v1, e1);
        gk15<R>(f, mid, s.b, v2, e2);
        total_mag = std::max(total_mag, std::abs(v1 + v2));
        stack.push_back(Seg{s.a, mid, v1, e1, s.depth + 1});
        stack.push_back(Seg{mid, s.b, v2, e2, s.depth + 1});
    }
    return total;
}

}  // namespace

double gk_adaptive(const std::function<double(double)>& f, double a, double b,
                   double abstol, double reltol, int max_depth) {
    return gk_adaptive_impl<double>(f, a, b, abstol, reltol, max_depth);
}

cplx gk_adaptive_c(const std::function<cplx(double)>& f, double a, double b,
                   double abstol, double reltol, int max_depth) {
    return gk_adaptive_impl<cplx>(f, a, b, abstol, reltol, max_depth);
}

}  // namespace rmt::quad
