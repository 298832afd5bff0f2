#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace blowlab {

/// Explicit constant and exponent of the power-law conclusion
///   f(s) <= C s^{-e},  C = 2^{rho/(lambda(1-lambda)^2)} a^{1/(1-lambda)},
///   e = rho/(1-lambda)
/// for any nonincreasing f obeying f(s+delta) <= a delta^{-rho} f(s)^lambda.
struct StampacchiaBound {
    double coefficient = 0.0;
    double exponent = 0.0;
};
StampacchiaBound stampacchia_bound(double a, double rho, double lambda);

/// A tabulated nonincreasing nonnegative function together with the
/// functional-inequality constants it is tested against.
struct StampacchiaInput {
    double a = 1.0;
    double rho = 1.0;
    double lambda = 0.5;
    std::vector<double> s; ///< strictly increasing, in (0, s0)
    std::vector<double> f; ///< nonincreasing, nonnegative
};

struct StampacchiaReport {
    bool premise_holds = false; ///< f(s+delta) <= a delta^{-rho} f(s)^lambda on all pairs
    bool bound_holds = false;   ///< f(s) <= C s^{-e} pointwise
    double worst_premise_ratio = 0.0;
    double worst_bound_ratio = 0.0;
    double premise_violation_s = 0.0, premise_violation_delta = 0.0;
    bool table_dense_enough = true; ///< >= 32 points per decade requested
};
StampacchiaReport stampacchia_check(const StampacchiaInput& input);

/// Inputs of the two-branch iteration lemma: the extremal family solves
///   M_j = lambda M_{j-1} + (1-lambda) max{ k_j1 (-M_j')^{1+gamma1},
///                                          k_j2 (-M_j')^{1+gamma2} }
/// with M_j(0) = K_j, where k_j1 = c1 eps_j^{gamma1},
/// k_j2 = c2 eps_j^{gamma2}, K_j = c3 eps_j^{-(1-delta)}.
struct Lemma926Input {
    double c1 = 1.0, c2 = 1.0, c3 = 1.0;
    double delta = 0.5;
    double gamma1 = 1.0, gamma2 = 2.0;
    double lambda = 0.5;
    std::vector<double> eps; ///< strictly decreasing positive, one per layer
};

class StiffStep : public std::runtime_error {
public:
    explicit StiffStep(const std::string& what) : std::runtime_error(what) {}
};

struct Lemma926Family {
    std::vector<double> s;
    std::vector<double> M; ///< row-major [layer][s-index]
    int j0 = 0;
    size_t ns() const { return s.size(); }
};

/// Integrates the equality version of the system layer by layer on the given
/// s grid (adaptive sub-stepping, extinction clipped at zero). Initial values
/// are imposed at the left endpoint of the grid.
Lemma926Family lemma926_propagate(const Lemma926Input& input, const std::vector<double>& s_grid);

/// Envelope extraction against the predicted bound
///   M_j(s) <= max{ B1 s^{-sigma}, B2 },  sigma = (1+gamma1)(1-delta)/(delta gamma1).
struct EnvelopeReport {
    double sigma = 0.0;       ///< theoretical envelope exponent
    double fitted_slope = 0.0; ///< magnitude of the log-log envelope slope
    double B1 = 0.0;          ///< max of V(s) s^sigma over the power window
    double B2 = 0.0;          ///< max of V(s) over the tail window
    double split_s = 0.0;     ///< boundary between the two windows
    bool slope_ok = false;    ///< fitted slope <= sigma * 1.05
    int fit_points = 0;
};
EnvelopeReport lemma926_bound_check(const Lemma926Family& family, const Lemma926Input& input);

/// Strictly decreasing epsilon sequence covering [eps_end, eps_start] with
/// seeded log-uniform jitter; identical seeds give identical sequences.
std::vector<double> random_eps_sequence(double eps_start, double eps_end, int j0, std::uint64_t seed);

/// Sweep across several epsilon sequences and layer counts; the lemma
/// promises envelope constants independent of both, so the fitted (B1, B2)
/// must agree across the sweep within drift_tol.
struct Lemma926SweepConfig {
    Lemma926Input base;            ///< eps ignored; regenerated per run
    std::vector<int> j0_list{15, 30, 60};
    int num_sequences = 3;
    double eps_start = 0.1;
    double eps_end = 1e-6;
    double s0 = 0.5;
    double s_min = 1e-4;
    int s_points_per_decade = 48;
    double drift_tol = 0.10;
    std::uint64_t seed = 1;
};
struct Lemma926SweepResult {
    std::vector<EnvelopeReport> runs;
    double b1_drift = 0.0;
    double b2_drift = 0.0;
    double worst_slope = 0.0;
    double sigma = 0.0;
    bool pass = false;
};
Lemma926SweepResult lemma926_sweep(const Lemma926SweepConfig& cfg);

} // namespace blowlab
