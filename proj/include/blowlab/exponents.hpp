#pragma once

#include <string>
#include <vector>

namespace blowlab {

/// One experiment's parameter tuple: the equation exponents (p, q), the
/// spatial dimension n, the blow-up time T, the regime amplitude omega0 and
/// decay exponent beta, plus the free constants (xi, gamma, alpha1) used by
/// the layer diagnostics.
struct ProblemParams {
    double p = 2.0;      ///< gradient exponent, must exceed q
    double q = 1.0;      ///< time-term exponent, > 0
    int n = 1;           ///< spatial dimension (formulas keep it symbolic; runs use n=1)
    double T = 1.0;      ///< blow-up time, >= 1
    double omega0 = 1.0; ///< regime amplitude
    double beta = 1.0;   ///< regime decay exponent, in (0, beta0)
    double xi = 0.3;     ///< layer contraction ratio, in (0, 1)
    double gamma = 0.2;  ///< free constant > 0 of the layer system
    double alpha1 = 0.9; ///< auxiliary exponent, in (1/p, alpha)

    bool operator==(const ProblemParams&) const = default;
};

/// All derived exponents. nu bounds the interior energy growth in s, mu the
/// final profile; theta, nu1, mu1, nu2, mu2 drive the layer inequalities.
struct ExponentSet {
    double alpha = 0.0;
    double beta0 = 0.0;
    double nu = 0.0;
    double mu = 0.0;
    double theta = 0.0;
    double nu1 = 0.0;
    double mu1 = 0.0;
    double nu2 = 0.0;
    double mu2 = 0.0;
    bool corollary_applicable = false; ///< true iff 0 < p-1 < q < 1
    bool beta_in_range = false;        ///< true iff 0 < beta < beta0
};

/// Evaluates every derived exponent by direct formula.
/// Throws std::invalid_argument when p <= q, q <= 0, beta <= 0 or n < 1.
/// An out-of-range beta (beta >= beta0) is reported via beta_in_range, not an
/// error, so the exponent surface can still be tabulated.
ExponentSet compute_exponents(const ProblemParams& params);

/// Contraction factors theta1, theta2 of the weighted layer sums for the
/// chosen (xi, gamma, alpha1). Both must be < 1 for the layer diagnostics
/// to be conclusive.
struct ContractionFactors {
    double theta1 = 0.0;
    double theta2 = 0.0;
};
ContractionFactors xi_contraction_factors(const ProblemParams& params,
                                          const ExponentSet& exps);

struct ParamCheck {
    std::string name;      ///< short id, e.g. "p>q"
    std::string condition; ///< instantiated inequality with numbers
    bool pass = false;
};

struct ValidationReport {
    std::vector<ParamCheck> checks;
    bool ok = false;                   ///< every check passed
    double theta1 = 0.0;
    double theta2 = 0.0;
    double xi_max = 0.0;               ///< largest admissible xi for the given gamma, alpha1
    std::string binding_xi_constraint; ///< which xi condition is tightest
};

/// Report-only check of every parameter-range condition; never mutates input
/// and never throws. Solver runs require ok == true.
ValidationReport validate_params(const ProblemParams& params);

} // namespace blowlab
