#pragma once

#include "blowlab/exponents.hpp"

namespace blowlab {

enum class CutoffKind { Linear, Cubic };

/// A power-law Dirichlet blow-up regime f(t) = f0 (T-t)^{-kappa} carried by
/// the boundary, extended into the domain as f(t) * phi(x) with a cutoff phi
/// that equals 1 on the boundary collar of width w/2 and 0 at distance >= w.
struct BoundaryRegime {
    double f0 = 1.0;
    double kappa = 0.5;
    double cutoff_width = 0.1; ///< w, in (0, 1/2)
    double T = 1.0;
    bool symmetric = true;     ///< both endpoints carry the trace
    CutoffKind cutoff = CutoffKind::Linear;
};

/// Boundary value at time t. Throws std::domain_error unless 0 <= t < T.
double dirichlet_trace(const BoundaryRegime& regime, double t);

/// Cutoff profile phi at x in [0,1] (for the one-sided regime the cutoff is
/// attached to the left endpoint only).
double cutoff_value(const BoundaryRegime& regime, double x);

/// Cutoff integrals over the whole domain:
///   mass = int phi^{q+1} dx,   grad = int |phi'|^{p+1} dx.
/// Closed form for the linear cutoff, quadrature for the cubic one.
struct CutoffIntegrals {
    double mass = 0.0;
    double grad = 0.0;
};
CutoffIntegrals cutoff_integrals(const BoundaryRegime& regime, double p, double q);

/// The three terms of the energy budget of the product extension at time t:
///   sup_mass  = sup_{tau<t} int |f phi|^{q+1} dx
///   grad      = int_0^t int |f phi'|^{p+1} dx dtau
///   mass_time = ( int_0^t ( int |f phi|^{q+1} dx )^{1/(q+1)} dtau )^{q+1}
/// The divergence flags describe the t -> T limit of each term.
struct BudgetTerms {
    double sup_mass = 0.0;
    double grad = 0.0;
    double mass_time = 0.0;
    double total = 0.0;
    bool sup_mass_divergent = false;
    bool grad_divergent = false;
    bool mass_time_divergent = false;
};
BudgetTerms energy_budget(const BoundaryRegime& regime, const ProblemParams& params, double t);

/// sup over t < T of F(t) (T-t)^alpha -- the amplitude the regime realizes
/// inside the sub-critical window. Finite exactly when the budget stays
/// below the critical growth rate.
struct EffectiveAmplitude {
    double omega0_eff = 0.0;
    double t_at_sup = 0.0;
};
EffectiveAmplitude effective_amplitude(const BoundaryRegime& regime, const ProblemParams& params);

/// Default trace exponent alpha/(q+1) * (1 - eps_cal): the mass term of the
/// budget then tracks the target growth (T-t)^{-alpha} with margin eps_cal.
double default_kappa(const ProblemParams& params, double eps_cal);

/// Budget growth translated back into an effective regime decay exponent;
/// the run sits inside the theorem's window iff 0 < beta_eff < beta0.
double effective_beta(const ProblemParams& params, double kappa);

} // namespace blowlab
