#include "adsteich/optim.hpp"

#include <cmath>
#include <cstddef>

#include "adsteich/errors.hpp"

namespace ats::opt {

namespace {

double half_sq_norm(const std::vector<double>& r) {
    double s = 0;
    for (double v : r) s += v * v;
    return 0.5 * s;
}

// Cholesky solve of (A + lambda diag(A)) x = b for small SPD-ish A.
bool solve_damped(std::vector<double> A, std::vector<double> b, double lambda,
                  std::vector<double>* out) {
    const size_t n = b.size();
    for (size_t i = 0; i < n; ++i) {
        A[i * n + i] *= (1.0 + lambda);
        A[i * n + i] += 1e-14;
    }
    // in-place Cholesky
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j <= i; ++j) {
            double s = A[i * n + j];
            for (size_t k = 0; k < j; ++k) s -= A[i * n + k] * A[j * n + k];
            if (i == j) {
                if (s <= 0.0) return false;
                A[i * n + i] = std::sqrt(s);
            } else {
                A[i * n + j] = s / A[j * n + j];
            }
        }
    }
    // forward/backward substitution
    for (size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (size_t k = 0; k < i; ++k) s -= A[i * n + k] * b[k];
        b[i] = s / A[i * n + i];
    }
    for (size_t ii = n; ii-- > 0;) {
        double s = b[ii];
        for (size_t k = ii + 1; k < n; ++k) s -= A[k * n + ii] * b[k];
        b[ii] = s / A[ii * n + ii];
    }
    *out = std::move(b);
    return true;
}

} // namespace

LMResult levmar_box(const ResidualFn& residuals, std::vector<double> x0,
                    const std::vector<double>& lo, const std::vector<double>& hi,
                    const LMOptions& opts) {
    const size_t n = x0.size();
    if (lo.size() != n || hi.size() != n)
        throw range_error("levmar_box: bound size mismatch");

    auto clip = [&](std::vector<double>& x) {
        for (size_t i = 0; i < n; ++i) x[i] = std::min(hi[i], std::max(lo[i], x[i]));
    };
    clip(x0);

    LMResult res;
    res.x = x0;
    std::vector<double> r = residuals(res.x);
    const size_t m = r.size();
    res.cost = half_sq_norm(r);

    double lambda = opts.lambda_init;
    std::vector<double> J(m * n), JtJ(n * n), Jtr(n), step, trial(n);

    for (res.iters = 0; res.iters < opts.max_iters; ++res.iters) {
        if (res.cost < opts.tol_cost) {
            res.converged = true;
            break;
        }
        // forward-difference Jacobian, stepping inward at the box edge
        for (size_t j = 0; j < n; ++j) {
            std::vector<double> xp = res.x;
            double hstep = opts.fd_step * std::max(1.0, std::abs(xp[j]));
            if (xp[j] + hstep > hi[j]) hstep = -hstep;
            xp[j] += hstep;
            const std::vector<double> rp = residuals(xp);
            for (size_t i = 0; i < m; ++i) J[i * n + j] = (rp[i] - r[i]) / hstep;
        }
        for (size_t a = 0; a < n; ++a) {
            Jtr[a] = 0;
            for (size_t i = 0; i < m; ++i) Jtr[a] += J[i * n + a] * r[i];
            for (size_t b = 0; b <= a; ++b) {
                double s = 0;
                for (size_t i = 0; i < m; ++i) s += J[i * n + a] * J[i * n + b];
                JtJ[a * n + b] = JtJ[b * n + a] = s;
            }
        }

        bool accepted = false;
        for (int attempt = 0; attempt < 24 && !accepted; ++attempt) {
            std::vector<double> neg_g(n);
            for (size_t i = 0; i < n; ++i) neg_g[i] = -Jtr[i];
            if (!solve_damped(JtJ, neg_g, lambda, &step)) {
                lambda *= 10.0;
                continue;
            }
            trial = res.x;
            double step_norm = 0;
            for (size_t i = 0; i < n; ++i) {
                trial[i] += step[i];
                step_norm += step[i] * step[i];
            }
            clip(trial);
            const std::vector<double> rt = residuals(trial);
            const double ct = half_sq_norm(rt);
            if (ct < res.cost) {
                res.x = trial;
                r = rt;
                res.cost = ct;
                lambda = std::max(1e-12, lambda * 0.35);
                accepted = true;
                if (step_norm < opts.tol_step * opts.tol_step) {
                    res.converged = true;
                    return res;
                }
            } else {
                lambda *= 10.0;
                if (lambda > 1e14) break;
            }
        }
        if (!accepted) {
            // no descent direction left at any damping: local minimum
            // within the box
            res.converged = true;
            break;
        }
    }
    if (res.cost < opts.tol_cost) res.converged = true;
    return res;
}

} // namespace ats::opt
