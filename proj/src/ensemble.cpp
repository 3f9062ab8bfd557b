#include "ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "errors.hpp"
#include "specfun.hpp"
#include "threads.hpp"

namespace rmt::ens {

using cplx_t = std::complex<double>;

SplitMix64 draw_stream(uint64_t seed, uint64_t draw_index) {
    // Decorrelate (seed, draw) into one SplitMix64 state: run the seed through
    // one mixing pass, fold in the draw index with a distinct odd constant.
    SplitMix64 pre(seed);
    uint64_t s0 = pre.next();
    return SplitMix64(s0 ^ (0xD1B54A32D192ED03ull * (draw_index + 1)));
}

std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> sample_pair(
    const GaussianEnsembleParams& p, uint64_t seed, uint64_t draw_index) {
    p.validate();
    const int L = p.l, M = p.m_dim, N = p.n;
    const double a = p.alpha;
    SplitMix64 rng = draw_stream(seed, draw_index);
    Eigen::MatrixXcd x1 = Eigen::MatrixXcd::Zero(L, M);
    Eigen::MatrixXcd x2 = Eigen::MatrixXcd::Zero(M, N);
    // Coupled rows j < N of X1 with columns j of X2: the pair
    // (X1(j,k), X2(k,j)) is jointly Gaussian with real-part covariance
    // (1/(2(a^2-d^2))) [[a, d],[d, a]] and the d-sign flipped for the
    // imaginary parts.  Cholesky factor: l11 = sqrt(a/(2D)), l21 = d/sqrt(2aD),
    // l22 = 1/sqrt(2a), D = a^2 - d^2.
    for (int j = 0; j < N; ++j) {
        const double d = p.deltas[j];
        const double D = a * a - d * d;
        const double l11 = std::sqrt(a / (2.0 * D));
        const double l21 = d / std::sqrt(2.0 * a * D);
        const double l22 = 1.0 / std::sqrt(2.0 * a);
        for (int k = 0; k < M; ++k) {
            auto [z1, z2] = rng.normal_pair();
            auto [z3, z4] = rng.normal_pair();
            double re1 = l11 * z1;
            double re2 = l21 * z1 + l22 * z2;
            double im1 = l11 * z3;
            double im2 = -l21 * z3 + l22 * z4;
            x1(j, k) = cplx_t(re1, im1);
            x2(k, j) = cplx_t(re2, im2);
        }
    }
    // Uncoupled rows j >= N of X1: E|entry|^2 = 1/a.
    const double s = 1.0 / std::sqrt(2.0 * a);
    for (int j = N; j < L; ++j)
        for (int k = 0; k < M; ++k) {
            auto [za, zb] = rng.normal_pair();
            x1(j, k) = cplx_t(s * za, s * zb);
        }
    return {std::move(x1), std::move(x2)};
}

std::vector<double> squared_singular_values(const Eigen::MatrixXcd& x1,
                                            const Eigen::MatrixXcd& x2) {
    if (x1.cols() != x2.rows())
        throw domain_error("squared_singular_values: non-conformable shapes");
    Eigen::MatrixXcd y = x1 * x2;
    Eigen::MatrixXcd h = y.adjoint() * y;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    if (es.info() != Eigen::Success)
        throw numeric_error("squared_singular_values: eigensolver failed");
    Eigen::VectorXd ev = es.eigenvalues();  // ascending
    double scale = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
    std::vector<double> out(ev.size());
    for (int i = 0; i < ev.size(); ++i) {
        double v = ev(i);
        if (v < 0.0) {
            if (v < -1e-12 * std::max(scale, 1.0))
                throw numeric_error("squared_singular_values: negative eigenvalue "
                                    "beyond rounding tolerance");
            v = 0.0;
        }
        out[(size_t)i] = v;
    }
    return out;
}

SampleBatch sample_batch(const GaussianEnsembleParams& p, uint64_t seed, int draws) {
    p.validate();
    if (draws < 1) throw domain_error("sample_batch: draws must be >= 1");
    SampleBatch b;
    b.params = p;
    b.seed = seed;
    b.draws = draws;
    b.eigenvalues.resize(draws, p.n);
    // Slot-filling parallel loop: draw d always lands in row d regardless of
    // worker count, so batches are byte-identical for any RMT_THREADS.
    rmt::parallel_for((size_t)draws, [&](size_t d) {
        auto [x1, x2] = sample_pair(p, seed, (uint64_t)d);
        std::vector<double> ev = squared_singular_values(x1, x2);
        for (int i = 0; i < p.n; ++i) b.eigenvalues((Eigen::Index)d, i) = ev[(size_t)i];
    });
    return b;
}

namespace {

// log|det| + sign via column-scaled partial-pivot LU.
std::pair<double, double> logabsdet(Eigen::MatrixXd m) {
    const int n = (int)m.rows();
    double logscale = 0.0;
    for (int j = 0; j < n; ++j) {
        double s = m.col(j).cwiseAbs().maxCoeff();
        if (s == 0.0) return {-std::numeric_limits<double>::infinity(), 0.0};
        m.col(j) /= s;
        logscale += std::log(s);
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
    double logdet = logscale;
    double sign = lu.permutationP().determinant();  // +1 or -1
    Eigen::VectorXd diag = lu.matrixLU().diagonal();
    for (int i = 0; i < n; ++i) {
        double d = diag(i);
        if (d == 0.0) return {-std::numeric_limits<double>::infinity(), 0.0};
        if (d < 0.0) sign = -sign;
        logdet += std::log(std::abs(d));
    }
    return {logdet, sign};
}

// P_N(x) for pairwise-distinct positive deltas, log-scale assembly.
double joint_pdf_distinct(const GaussianEnsembleParams& p,
                          const std::vector<double>& xs) {
    const int n = p.n, nu = p.nu(), kappa = p.kappa();
    const double a = p.alpha;
    std::vector<double> d = p.deltas;
    std::sort(d.begin(), d.end());  // PDF is invariant under relabeling

    Eigen::MatrixXd m1(n, n), m2(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double sx = std::sqrt(xs[(size_t)j]);
            m1(i, j) = sf::bessel_i(kappa, cplx_t(2.0 * d[(size_t)i] * sx, 0.0)).real();
            m2(i, j) = std::pow(xs[(size_t)j], 0.5 * (nu + i)) *
                       sf::bessel_k(nu - kappa + i, cplx_t(2.0 * a * sx, 0.0)).real();
        }
    auto [ld1, s1] = logabsdet(m1);
    auto [ld2, s2] = logabsdet(m2);
    if (s1 == 0.0 || s2 == 0.0) return 0.0;

    // log Z_N
    double logz = sf::gammaln(n + 1.0) - n * std::log(2.0) -
                  (n * (kappa + nu + n) + 0.5 * n * (n + 1)) * std::log(a);
    double zsign = 1.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double gap = d[(size_t)j] * d[(size_t)j] - d[(size_t)i] * d[(size_t)i];
            logz += std::log(std::abs(gap));
            if (gap < 0.0) zsign = -zsign;  // ascending sort keeps this +1
        }
    for (int j = 1; j <= n; ++j) {
        double dj = d[(size_t)(j - 1)];
        // delta^kappa == 1 when kappa == 0; skip the log so delta = 0 does
        // not produce 0 * (-inf).
        if (kappa > 0) logz += kappa * std::log(dj);
        logz += sf::gammaln((double)(j + nu)) -
                (nu + n) * std::log1p(-dj * dj / (a * a));
    }
    double val = s1 * s2 * zsign * std::exp(ld1 + ld2 - logz);
    return val;
}

bool needs_perturbation(const GaussianEnsembleParams& p) {
    const double tol = 1e-6 * p.alpha;
    std::vector<double> d = p.deltas;
    std::sort(d.begin(), d.end());
    if (p.kappa() >= 1 && d[0] < tol) return true;  // delta^kappa / row collapse
    for (size_t i = 0; i + 1 < d.size(); ++i)
        if (d[i + 1] - d[i] < tol) return true;
    return false;
}

GaussianEnsembleParams perturb_deltas(const GaussianEnsembleParams& p, double eps) {
    // Split every delta in squared coordinates: delta_j^2 + eps * alpha^2 * r_j
    // with distinct ranks r_j; flip direction if that would cross alpha.
    GaussianEnsembleParams q = p;
    const double a2 = p.alpha * p.alpha;
    std::vector<size_t> idx(p.deltas.size());
    std::iota(idx.begin(), idx.end(), (size_t)0);
    std::sort(idx.begin(), idx.end(),
              [&](size_t i, size_t j) { return p.deltas[i] < p.deltas[j]; });
    for (size_t r = 0; r < idx.size(); ++r) {
        double d2 = p.deltas[idx[r]] * p.deltas[idx[r]];
        double shift = eps * a2 * (double)(r + 1) / (double)idx.size();
        double nd2 = (d2 + shift < a2 * (1.0 - 1e-9)) ? d2 + shift : d2 - shift;
        q.deltas[idx[r]] = std::sqrt(std::max(nd2, 0.0));
    }
    return q;
}

}  // namespace

double joint_pdf(const GaussianEnsembleParams& p, const std::vector<double>& x,
                 PdfInfo* info) {
    p.validate();
    if ((int)x.size() != p.n) throw domain_error("joint_pdf: x must have n entries");
    for (double xi : x)
        if (!(xi > 0.0)) throw domain_error("joint_pdf: coordinates must be > 0");
    if (info) info->perturbed = false;
    if (!needs_perturbation(p)) return joint_pdf_distinct(p, x);

    if (info) info->perturbed = true;
    // Richardson over the splitting parameter: f(e) = f0 + c1 e + c2 e^2 + ...
    const double e0 = 1e-5;
    double f1 = joint_pdf_distinct(perturb_deltas(p, e0), x);
    double f2 = joint_pdf_distinct(perturb_deltas(p, e0 / 2.0), x);
    double f4 = joint_pdf_distinct(perturb_deltas(p, e0 / 4.0), x);
    double g1 = 2.0 * f2 - f1;
    double g2 = 2.0 * f4 - f2;
    return (4.0 * g2 - g1) / 3.0;
}

Histogram empirical_density(const SampleBatch& batch, const std::vector<double>& edges) {
    if (batch.draws < 1 || batch.eigenvalues.rows() == 0)
        throw domain_error("empirical_density: empty batch");
    if (edges.size() < 2 || !std::is_sorted(edges.begin(), edges.end()))
        throw domain_error("empirical_density: need ascending bin edges");
    Histogram h;
    h.edges = edges;
    h.counts.assign(edges.size() - 1, 0);
    for (Eigen::Index d = 0; d < batch.eigenvalues.rows(); ++d)
        for (Eigen::Index i = 0; i < batch.eigenvalues.cols(); ++i) {
            double v = batch.eigenvalues(d, i);
            auto it = std::upper_bound(edges.begin(), edges.end(), v);
            if (it == edges.begin() || it == edges.end()) continue;
            ++h.counts[(size_t)(it - edges.begin() - 1)];
        }
    h.total_points = batch.draws;
    h.mass.resize(h.counts.size());
    for (size_t b = 0; b < h.counts.size(); ++b)
        h.mass[b] = (double)h.counts[b] / (double)batch.draws;
    return h;
}

void write_batch_csv(const SampleBatch& batch, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw numeric_error("write_batch_csv: cannot open " + path);
    std::fprintf(f, "draw,idx,value\n");
    for (Eigen::Index d = 0; d < batch.eigenvalues.rows(); ++d)
        for (Eigen::Index i = 0; i < batch.eigenvalues.cols(); ++i)
            std::fprintf(f, "%lld,%lld,%.17g\n", (long long)d, (long long)i,
                         batch.eigenvalues(d, i));
    std::fclose(f);
}

}  // namespace rmt::ens
