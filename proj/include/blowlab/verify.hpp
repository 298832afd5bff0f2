#pragma once

#include "blowlab/energy.hpp"
#include "blowlab/exponents.hpp"

#include <span>
#include <string>
#include <vector>

namespace blowlab {

/// Ordinary least squares on (log x, log y) restricted to [lo, hi];
/// points with y <= 0 are dropped.
struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0; ///< 95% half-width is 1.96 * this
    int npoints = 0;
    double window_lo = 0.0, window_hi = 0.0;
    double y_min = 0.0, y_max = 0.0; ///< dynamic range inside the window
};
FitResult loglog_fit(std::span<const double> x, std::span<const double> y, double lo, double hi);

struct VerifyOptions {
    double tol_slope = 0.05;  ///< slope bounds are exponent * (1 + tol_slope)
    double flat_span = 2.0;   ///< below this dynamic range a fit is non-probative
    double growth_cap = 1.5;  ///< interior growth cap over the localization window
    double window_ratio = 10.0; ///< (T-t) contraction defining the final window
    double hx = 0.0;          ///< discretization floor for profile fits
    double fit_s_max = 0.4;
};

struct CheckResult {
    std::string name;
    bool applicable = true;  ///< false: skipped with a reason in detail
    bool probative = true;   ///< false: data too flat/empty to decide
    bool pass = false;
    double measured = 0.0;
    double bound = 0.0;
    double ci95 = 0.0;
    std::string detail;
};

/// Log-log slope of E + sup h against s over the middle decade of the s grid
/// at the final tabulated time; passes when the measured blow-up-in-s rate
/// does not exceed nu.
CheckResult theorem1_check(const EnergyProfile& profile, const ExponentSet& exps,
                           const VerifyOptions& opts);

/// Near-boundary log-log slope of the final profile |u| against
/// d(x) = min(x, 1-x); bound is mu. Skipped unless 0 < p-1 < q < 1.
CheckResult corollary_profile_check(std::span<const double> x, std::span<const double> u_final,
                                    const ExponentSet& exps, const VerifyOptions& opts);

/// Interior max must stay within growth_cap over the final window while the
/// trace is free to blow up; the trace growth is reported alongside.
CheckResult localization_check(std::span<const double> times, std::span<const double> interior_max,
                               std::span<const double> trace, double T, const VerifyOptions& opts);

/// Amplitude-scaling companion: the ratio of interior energies of two runs
/// may not exceed the (q+1)/(beta(p-q)) power of their amplitude ratio.
CheckResult omega_scaling_check(const EnergyProfile& low, const EnergyProfile& high,
                                double omega_low, double omega_high, const ExponentSet& exps,
                                const ProblemParams& params, const VerifyOptions& opts);

} // namespace blowlab
