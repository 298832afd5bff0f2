#pragma once

#include "blowlab/exponents.hpp"
#include "blowlab/solver.hpp"

#include <span>
#include <stdexcept>
#include <vector>

namespace blowlab {

/// Geometric grid of interior depths s in (0, 1/2), `pts_per_decade` points
/// per decade, with any `extra` values inserted exactly.
std::vector<double> make_s_grid(double s_min, double s_max, int pts_per_decade,
                                std::span<const double> extra = {});

/// Tabulated interior energies over (time level) x (depth):
///   E(t,s)  = int_0^t int_{s < x < 1-s} |u_x|^{p+1} dx dtau
///   h(t,s)  = int_{s < x < 1-s} |u|^{q+1} dx        (instantaneous)
///   hsup    = running max of h over levels up to t
/// plus the whole-domain (s = 0) series used for calibration checks.
/// Between levels every quantity is interpolated linearly in t.
struct EnergyProfile {
    std::vector<double> s;
    std::vector<double> t;
    std::vector<double> E, h_inst, h_sup; ///< row-major [level][s-index]
    std::vector<double> E0, h0_inst, h0_sup;

    size_t ns() const { return s.size(); }
    size_t nt() const { return t.size(); }

    double energy_at(double tq, double sq) const;
    double h_at(double tq, double sq) const;
    double hsup_at(double tq, double sq) const;
    /// sup of the piecewise-linear h(.,s) over the window [t0, t1].
    double h_window_sup(double t0, double t1, double sq) const;
    /// E0 + running-sup h0 at time tq (whole domain).
    double global_at(double tq) const;
};

/// Streaming tabulation: feed accepted solver levels in time order.
class EnergyAccumulator {
public:
    EnergyAccumulator(std::vector<double> s_grid, double p, double q);
    void add_level(double t, std::span<const double> u, double hx);
    const EnergyProfile& profile() const { return prof_; }
    EnergyProfile take() { return std::move(prof_); }

private:
    double p_, q_;
    EnergyProfile prof_;
    std::vector<double> prev_grad_row_, prev_grad0_;
    std::vector<double> node_grad_, node_mass_, prefix_grad_, prefix_mass_;
};

/// Post-hoc tabulation from a fully stored trajectory (store_every == 1).
EnergyProfile tabulate_energies(const SolutionTrajectory& traj, std::vector<double> s_grid,
                                const ProblemParams& params);

/// Cumulative interior gradient energy of a stored trajectory at (t, s).
/// s must lie in (0, 1/2); t inside the stored range.
double energy_E(const SolutionTrajectory& traj, double t, double s, const ProblemParams& params);

/// Running sup of the interior (q+1)-mass of a stored trajectory at (t, s).
double energy_h_sup(const SolutionTrajectory& traj, double t, double s, const ProblemParams& params);

class UnresolvedRoot : public std::runtime_error {
public:
    explicit UnresolvedRoot(const std::string& what) : std::runtime_error(what) {}
};

/// Layer partition {t_j} generated from the measured energies at depth
/// s_tilde: each layer carries the energy quantum prescribed by the
/// contraction relation
///   (t_j - t_{j-1})^{-alpha} = xi^alpha / (omega0 T^{alpha - alpha1}) *
///       ( E(t_j) - E(t_{j-1}) + sup_{(t_{j-1}, t_j)} h ).
/// When the total energy at s_tilde stays below the threshold
/// 2 omega0 T^{-alpha1} xi^{-alpha} the construction is vacuous and
/// `alternative` is set instead.
struct LayerSequence {
    double s_tilde = 0.0;
    double omega0 = 0.0; ///< amplitude used by the construction
    double threshold = 0.0;
    bool alternative = false;
    double t_prime = 0.0; ///< stopping time: the first t_j beyond it closes the ladder
    std::vector<double> t;     ///< t[0] = 0, ..., t[j0]
    std::vector<double> delta; ///< delta[j-1] = t[j] - t[j-1]
    std::vector<double> identity_residual; ///< relative defect of the defining relation
    bool tie_broken = false; ///< a flat energy plateau made a root non-unique
    int j0() const { return static_cast<int>(delta.size()); }
};

struct GammaOptions {
    double root_tol = 1e-12; ///< bisection width in t
    int max_layers = 200;
};

LayerSequence gamma_sequence(const EnergyProfile& profile, double s_tilde,
                             const ProblemParams& params, const GammaOptions& opts = {});

/// Geometric-decay check delta_{j+1} <= xi delta_j, including the closing
/// increment T - t_{j0}. Probative only when the whole-domain energies obey
/// E + sup h <= omega0 (T-t)^{-alpha} on the tabulated levels.
struct MonotonicityReport {
    bool precondition_ok = false;
    bool vacuous = false; ///< no or one layer: nothing to compare
    std::vector<double> ratios;
    double max_ratio = 0.0;
    double xi = 0.0;
    bool pass = false;
};
MonotonicityReport check_qualified_monotonicity(const LayerSequence& seq, double xi,
                                                const EnergyProfile& profile,
                                                const ProblemParams& params,
                                                double tol_ratio = 1e-6);

/// Per-layer energies E_j(s) = E(t_j,s) - E(t_{j-1},s) and windowed sups
/// h_j(s) over the s grid; Sum_j E_j telescopes back to E(t_{j0}, s).
struct LayeredEnergies {
    std::vector<double> s;
    std::vector<double> E, h; ///< row-major [layer][s-index]
    double telescoping_residual = 0.0;
    int j0 = 0;
};
LayeredEnergies layered_energies(const EnergyProfile& profile, const LayerSequence& seq);

/// Weighted layer sums U_j at s_tilde and the boundedness statistic
/// sup_j U_j(s_tilde) delta_j^{alpha-alpha1} / omega0. Finiteness of the
/// statistic is the checkable content of the start bound of the iteration.
struct WeightedDiagnostic {
    bool xi_choice_valid = false; ///< theta1 < 1 and theta2 < 1
    double theta1 = 0.0, theta2 = 0.0;
    std::vector<double> A, H;   ///< per layer at s_tilde
    std::vector<double> U1, U2; ///< per layer at s_tilde
    std::vector<double> stat;   ///< U_j(s_tilde) delta_j^{alpha-alpha1} / omega0
    double sup_stat = 0.0;
    double last_sup_ratio = 0.0; ///< final ratio of successive running sups
};
WeightedDiagnostic weighted_energy_diagnostic(const EnergyProfile& profile,
                                              const LayerSequence& seq,
                                              const ProblemParams& params);

} // namespace blowlab
