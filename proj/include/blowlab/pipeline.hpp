#pragma once

#include "blowlab/config.hpp"
#include "blowlab/energy.hpp"
#include "blowlab/exponents.hpp"
#include "blowlab/regime.hpp"
#include "blowlab/solver.hpp"
#include "blowlab/verify.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace blowlab {

/// Everything one scenario produces in memory: the measured profile, the
/// final level, the per-level series, the derived layer diagnostics, and the
/// calibration amplitudes.
struct RunArtifacts {
    RunConfig cfg;
    ProblemParams params;
    ExponentSet exps;
    BoundaryRegime regime;
    Mesh mesh;
    double eps_used = 0.0;

    EnergyProfile profile;
    std::vector<double> x_nodes;
    std::vector<double> u_final;
    std::vector<double> level_times; ///< == profile.t
    std::vector<double> interior_max;
    std::vector<double> trace_values;
    std::vector<double> stored_times;              ///< trajectory checkpoints (optional)
    std::vector<std::vector<double>> stored_levels;

    double omega0_eff = 0.0;   ///< closed-form budget amplitude
    double omega0_run = 0.0;   ///< measured sup of (E0 + sup h0)(T-t)^alpha
    double omega0_gamma = 0.0; ///< amplitude driving the layer machinery
    double beta_eff = 0.0;
    bool in_theorem_window = false;

    LayerSequence seq;
    LayeredEnergies layers;
    MonotonicityReport mono;
    WeightedDiagnostic weighted;

    long total_newton_iterations = 0;
    int total_halvings = 0;
    bool aborted = false;
    std::string abort_reason;
};

/// Resolved regime for a config (handles kappa = auto).
BoundaryRegime make_regime(const RunConfig& cfg);

/// Runs solve + energy tabulation + layer diagnostics. Throws ConfigError on
/// an invalid parameter set; an AbortedRun is converted into partial
/// artifacts with `aborted` set.
RunArtifacts run_scenario(const RunConfig& cfg);

/// Writes every artifact (CSVs, flat checkpoint, manifest) under `dir`.
/// Returns the list of files written (manifest excluded).
std::vector<std::string> write_artifacts(const RunArtifacts& art, const std::string& dir,
                                         std::uint64_t seed);

/// Rebuilds artifacts (including the layer diagnostics) from the flat
/// checkpoint written by write_artifacts.
RunArtifacts load_artifacts(const std::string& dir);

struct VerificationReport {
    std::string scenario;
    std::vector<CheckResult> checks;
    bool overall_pass = false; ///< all applicable, probative checks pass
    std::string json;          ///< full report, pretty-printed
};
VerificationReport build_verification_report(const RunArtifacts& art);

/// Lemma suite: the explicit-constant fixtures plus the sweep.
struct LemmaSuiteResult {
    bool fixtures_pass = false;
    bool sweep_pass = false;
    std::string json;
};
LemmaSuiteResult run_lemma_suite(const RunConfig::LemmasCfg& cfg, double drift_tol,
                                 std::uint64_t seed);

/// Exponent table (key = value lines) for cmd_exponents.
std::string exponent_table(const ProblemParams& params);

} // namespace blowlab
