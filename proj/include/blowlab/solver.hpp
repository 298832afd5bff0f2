#pragma once

#include "blowlab/exponents.hpp"
#include "blowlab/mesh.hpp"

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace blowlab {

/// Regularized model flux (g^2 + eps^2)^{(p-1)/2} g; odd and nondecreasing
/// in g. Exact for the heat case p = 1.
double flux(double g, double p, double eps);

/// d flux / dg, nonnegative.
double flux_slope(double g, double p, double eps);

struct NewtonOptions {
    double tol = 1e-10;      ///< residual sup-norm target, relative to state scale
    int max_iter = 30;
    double dt_min_rel = 1e-14; ///< abort threshold for dt, relative to T
};

struct NewtonStats {
    int iterations = 0;
    double residual = 0.0;
    bool fallback = false;
};

class NonConvergence : public std::runtime_error {
public:
    explicit NonConvergence(const std::string& what) : std::runtime_error(what) {}
};

using SourceFn = std::function<double(double x, double t)>;
using BoundaryFn = std::function<double(double t)>;

/// One backward-Euler step of (|u|^{q-1}u)_t = (flux(u_x))_x + source on the
/// uniform grid. The Newton unknown is v = |u|^{q-1}u. `u_prev` holds all
/// nx+2 nodes at the previous level; the returned vector holds the new level
/// with the supplied Dirichlet values installed at both ends.
/// Throws NonConvergence when the damped Newton iteration (with a relaxed
/// fixed-point fallback) cannot reach the tolerance; callers should retry
/// with a smaller dt.
std::vector<double> step(const ProblemParams& params, double hx, double eps,
                         const std::vector<double>& u_prev, double dt, double t_new,
                         double bc_left, double bc_right, const SourceFn* source,
                         const NewtonOptions& opts, NewtonStats* stats = nullptr);

struct SolveOptions {
    NewtonOptions newton;
    double eps = -1.0;                 ///< flux regularization; < 0 means eps = hx
    int store_every = 1;               ///< 0: keep only the final level
    std::function<double(double x)> u0;
    BoundaryFn bc_left, bc_right;
    const SourceFn* source = nullptr;
    /// Called once per accepted level (including t = 0) in time order.
    std::function<void(double t, std::span<const double> u, const NewtonStats&)> observer;
};

struct SolutionTrajectory {
    Mesh mesh;
    std::vector<double> times; ///< every accepted level, starting at 0
    std::vector<NewtonStats> stats; ///< per accepted level (entry 0 is trivial)
    std::vector<double> stored_times;
    std::vector<std::vector<double>> levels; ///< stored on the store_every stride + final
    double eps_used = 0.0;
    long total_newton_iterations = 0;
    int total_halvings = 0;
};

class AbortedRun : public std::runtime_error {
public:
    AbortedRun(const std::string& what, SolutionTrajectory partial)
        : std::runtime_error(what), partial_trajectory(std::move(partial)) {}
    SolutionTrajectory partial_trajectory;
};

/// Marches the mesh levels with adaptive sub-stepping: a non-converging step
/// halves dt within the current interval and retries; dt underflow raises
/// AbortedRun carrying everything accepted so far.
SolutionTrajectory solve(const ProblemParams& params, const Mesh& mesh, const SolveOptions& opts);

} // namespace blowlab
