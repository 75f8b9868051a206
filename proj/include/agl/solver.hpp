#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "agl/boundary.hpp"
#include "agl/energy.hpp"
#include "agl/field.hpp"

namespace agl {

struct SolveConfig {
    SymmetryClass cls{-1, Sign::plus};
    double delta = 0.0;
    double R = 20.0;
    int Nr = 128;
    int Ntheta = 128;

    enum class Init { radial, construction, file };
    Init init = Init::radial;
    int construction_N = 0;   // satellite rings for init = construction
    std::string init_file;    // field CSV for init = file

    double tol = 1e-6;        // gradient sup-norm target
    int max_iters = 50000;
    int symmetrize_every = 25;
    double circle_tol = 1e-10;

    void validate() const;
};

struct SolveResult {
    Field2D field;
    EnergyBreakdown breakdown;
    int iterations = 0;
    double final_gradient_norm = 0.0;
    double boundary_C = 0.0;
    bool converged = false;
    BoundaryPhase boundary;
    std::vector<int> winding_probes;    // periodic probe at r ~ 0.75 R
    std::vector<double> energy_trace;   // accepted energies (monotone)
};

/// Thrown when the descent stalls; carries the best iterate.
struct SolveFailure : std::runtime_error {
    SolveResult best;
    SolveFailure(const std::string& msg, SolveResult b)
        : std::runtime_error(msg), best(std::move(b)) {}
};

/// Equivariant energy minimization on the disk D_R with the circle-problem
/// minimizer as Dirichlet datum: preconditioned L-BFGS with backtracking on
/// the free sector DOFs, reflection projection every symmetrize_every
/// accepted steps, monotone energies, stop at gradient sup-norm <= tol.
/// A warm_start field (same class and R) overrides the configured init.
SolveResult minimize_2d(const SolveConfig& config, const Field2D* warm_start = nullptr);

/// Warm-started continuation along an ascending delta list (first entry
/// typically 0). Failures propagate with the failing delta in the message.
std::vector<SolveResult> continuation_delta(const std::vector<double>& delta_list,
                                            SolveConfig base);

/// Initial iterate used for init = radial: the scaled radial ansatz with the
/// boundary phase correction tapered in by (r/R)^2.
Field2D radial_initial_field(const SolveConfig& config, const BoundaryPhase& phase);

// Summary serialization (JSON) used by the CLI and the sweep harness.
std::string result_summary_json(const SolveConfig& config, const SolveResult& result,
                                double elapsed_seconds);

}  // namespace agl
