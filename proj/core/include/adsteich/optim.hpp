#pragma once

// Small dense box-constrained Levenberg-Marquardt with forward-difference
// Jacobians. Problem sizes here are tiny (<= 8 parameters), so normal
// equations with a Cholesky solve are plenty.

#include <functional>
#include <vector>

namespace ats::opt {

using ResidualFn = std::function<std::vector<double>(const std::vector<double>&)>;

struct LMOptions {
    int max_iters = 500;
    double fd_step = 1e-7;
    double tol_cost = 1e-24;
    double tol_step = 1e-13;
    double lambda_init = 1e-3;
};

struct LMResult {
    std::vector<double> x;
    double cost = 0;  // 0.5 * sum of squared residuals
    int iters = 0;
    bool converged = false;
};

LMResult levmar_box(const ResidualFn& residuals, std::vector<double> x0,
                    const std::vector<double>& lo, const std::vector<double>& hi,
                    const LMOptions& opts = {});

} // namespace ats::opt
