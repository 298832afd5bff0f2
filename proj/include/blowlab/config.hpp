#pragma once

#include "blowlab/exponents.hpp"
#include "blowlab/mesh.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace blowlab {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// One scenario: flat key = value sections mirroring the module names.
/// Serialization is canonical (fixed order, %.17g numbers), so a parsed
/// config re-serializes byte-identically.
struct RunConfig {
    std::string scenario_id = "default";

    ProblemParams problem; // [problem]

    struct RegimeCfg { // [regime]
        double f0 = 1.0;
        bool kappa_auto = true; ///< kappa = alpha/(q+1) * (1 - eps_cal)
        double kappa = 0.0;     ///< used when kappa_auto = false
        double eps_cal = 0.02;
        double cutoff_width = 0.1;
        bool symmetric = true;
        std::string cutoff = "linear"; ///< linear | cubic
        std::string u0 = "cutoff";     ///< cutoff | uniform
        bool operator==(const RegimeCfg&) const = default;
    } regime;

    MeshSpec mesh; // [mesh]

    struct SolverCfg { // [solver]
        std::string eps_mode = "hx"; ///< hx | fixed
        double eps_value = 0.0;
        double newton_tol = 1e-10;
        int newton_max_iter = 30;
        double dt_min_rel = 1e-14;
        bool operator==(const SolverCfg&) const = default;
    } solver;

    struct EnergyCfg { // [energy]
        double s_tilde = 0.02;
        int s_points_per_decade = 24;
        double s_min_factor = 4.0; ///< s_min = factor * hx
        double s_max = 0.4;
        double s_probe = 0.25;
        bool operator==(const EnergyCfg&) const = default;
    } energy;

    struct TolCfg { // [tolerances]
        double tol_slope = 0.05;
        double growth_cap = 1.5;
        double window_ratio = 10.0;
        double tol_ratio = 1e-6;
        double root_tol = 1e-12;
        double drift_tol = 0.10;
        double flat_span = 2.0;
        bool operator==(const TolCfg&) const = default;
    } tol;

    struct OutputCfg { // [output]
        std::string dir = "out";
        bool write_trajectory = false;
        std::string trajectory_format = "csv"; ///< csv | bin
        int csv_time_stride = 10;
        bool operator==(const OutputCfg&) const = default;
    } output;

    struct LemmasCfg { // [lemmas]
        double c1 = 1.0, c2 = 1.0, c3 = 1.0;
        double delta = 0.5;
        double gamma1 = 1.0, gamma2 = 2.0;
        double lambda = 0.5;
        std::vector<int> j0_list{15, 30, 60};
        int num_sequences = 3;
        double eps_start = 0.1;
        double eps_end = 1e-6;
        double s0 = 0.5;
        double s_min = 1e-4;
        int s_points_per_decade = 48;
        bool operator==(const LemmasCfg&) const = default;
    } lemmas;

    bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& cfg);

} // namespace blowlab
