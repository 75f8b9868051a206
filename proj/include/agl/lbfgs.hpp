#pragma once

#include <functional>
#include <vector>

namespace agl {

/// Limited-memory BFGS with Armijo backtracking. The initial Hessian is
/// gamma * diag(precond) with the standard Barzilai-Borwein gamma; pass an
/// empty precond for the identity. Deterministic: fixed evaluation and
/// update order, no randomness.
struct LbfgsOptions {
    int memory = 10;
    int max_iters = 1000;
    double grad_tol = 1e-8;  // sup-norm of the raw gradient
    double c1 = 1e-4;
    int max_backtracks = 40;
    std::vector<double> precond;
    std::function<void(int iter, double energy, double grad_sup)> on_accept;
};

struct LbfgsResult {
    std::vector<double> x;
    double energy = 0.0;
    double grad_sup = 0.0;
    int iterations = 0;
    bool converged = false;
    bool line_search_failed = false;
};

/// eval(x, grad_out) returns the objective and fills the gradient.
LbfgsResult lbfgs_minimize(
    std::vector<double> x0,
    const std::function<double(const std::vector<double>&, std::vector<double>&)>& eval,
    const LbfgsOptions& opt);

}  // namespace agl
