#include "blowlab/regime.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace blowlab {

double dirichlet_trace(const BoundaryRegime& r, double t) {
    if (!(t >= 0.0) || !(t < r.T))
        throw std::domain_error("dirichlet_trace: t must lie in [0, T)");
    return r.f0 * std::pow(r.T - t, -r.kappa);
}

namespace {

// Ramp profile on tau in [0,1], tau = 0 at the collar edge (phi = 1),
// tau = 1 at distance w (phi = 0).
double ramp_value(CutoffKind kind, double tau) {
    if (kind == CutoffKind::Linear)
        return 1.0 - tau;
    return 1.0 - tau * tau * (3.0 - 2.0 * tau);
}

double ramp_slope_mag(CutoffKind kind, double tau) {
    if (kind == CutoffKind::Linear)
        return 1.0;
    return 6.0 * tau * (1.0 - tau);
}

// int_0^t (T - tau)^{-a} dtau, exact.
double power_time_integral(double T, double t, double a) {
    if (a == 0.0)
        return t;
    if (a == 1.0)
        return std::log(T / (T - t));
    return (std::pow(T - t, 1.0 - a) - std::pow(T, 1.0 - a)) / (a - 1.0);
}

// Simpson quadrature of fn over [0,1], npanels even.
template <class F>
double simpson01(F&& fn, int npanels) {
    const double h = 1.0 / npanels;
    double acc = fn(0.0) + fn(1.0);
    for (int i = 1; i < npanels; ++i)
        acc += fn(i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

} // namespace

double cutoff_value(const BoundaryRegime& r, double x) {
    const double w = r.cutoff_width;
    const double d = r.symmetric ? std::min(x, 1.0 - x) : x;
    if (d <= 0.5 * w)
        return 1.0;
    if (d >= w)
        return 0.0;
    return ramp_value(r.cutoff, (d - 0.5 * w) / (0.5 * w));
}

CutoffIntegrals cutoff_integrals(const BoundaryRegime& r, double p, double q) {
    if (!(r.cutoff_width > 0.0) || !(r.cutoff_width < 0.5))
        throw std::domain_error("cutoff_integrals: cutoff width must lie in (0, 1/2)");
    const double w = r.cutoff_width;
    const double half = 0.5 * w;
    const double sides = r.symmetric ? 2.0 : 1.0;

    CutoffIntegrals c;
    if (r.cutoff == CutoffKind::Linear) {
        // flat part + int_0^1 (1-tau)^{q+1} * half dtau
        c.mass = sides * (half + half / (q + 2.0));
        c.grad = sides * half * std::pow(1.0 / half, p + 1.0);
    } else {
        const double mass_ramp =
            simpson01([&](double t) { return std::pow(ramp_value(r.cutoff, t), q + 1.0); }, 512);
        const double grad_ramp =
            simpson01([&](double t) { return std::pow(ramp_slope_mag(r.cutoff, t) / half, p + 1.0); }, 512);
        c.mass = sides * (half + half * mass_ramp);
        c.grad = sides * half * grad_ramp;
    }
    return c;
}

BudgetTerms energy_budget(const BoundaryRegime& r, const ProblemParams& pr, double t) {
    if (!(t >= 0.0) || !(t < r.T))
        throw std::domain_error("energy_budget: t must lie in [0, T)");
    const CutoffIntegrals c = cutoff_integrals(r, pr.p, pr.q);
    const double q1 = pr.q + 1.0;
    const double p1 = pr.p + 1.0;

    BudgetTerms b;
    // The trace is nondecreasing for kappa >= 0, so the sup sits at tau = t.
    const double ft = r.f0 * std::pow(r.T - t, -r.kappa);
    const double f0_now = r.kappa >= 0.0 ? ft : r.f0 * std::pow(r.T, -r.kappa);
    b.sup_mass = std::pow(f0_now, q1) * c.mass;
    b.grad = std::pow(r.f0, p1) * c.grad * power_time_integral(r.T, t, r.kappa * p1);
    b.mass_time = c.mass * std::pow(r.f0 * power_time_integral(r.T, t, r.kappa), q1);
    b.total = b.sup_mass + b.grad + b.mass_time;

    b.sup_mass_divergent = r.kappa > 0.0 && r.f0 != 0.0;
    b.grad_divergent = r.kappa * p1 >= 1.0 && r.f0 != 0.0;
    b.mass_time_divergent = r.kappa >= 1.0 && r.f0 != 0.0;
    return b;
}

EffectiveAmplitude effective_amplitude(const BoundaryRegime& r, const ProblemParams& pr) {
    const ExponentSet e = compute_exponents(pr);
    EffectiveAmplitude out;
    // F(t)(T-t)^alpha is a smooth combination of powers of (T-t); a dense
    // logarithmic sweep of (T-t) pins its sup to plotting accuracy.
    const int n = 600;
    const double lg_hi = 0.0;   // T - t = T
    const double lg_lo = -12.0; // T - t = 1e-12 T
    for (int i = 0; i <= n; ++i) {
        const double rem = r.T * std::pow(10.0, lg_hi + (lg_lo - lg_hi) * i / n);
        const double t = r.T - rem;
        if (t < 0.0)
            continue;
        const double val = energy_budget(r, pr, t).total * std::pow(rem, e.alpha);
        if (val > out.omega0_eff) {
            out.omega0_eff = val;
            out.t_at_sup = t;
        }
    }
    return out;
}

double default_kappa(const ProblemParams& pr, double eps_cal) {
    const ExponentSet e = compute_exponents(pr);
    return e.alpha / (pr.q + 1.0) * (1.0 - eps_cal);
}

double effective_beta(const ProblemParams& pr, double kappa) {
    // F grows like (T-t)^{-max(kappa (q+1), kappa (p+1) - 1)}.
    const double growth = std::max(kappa * (pr.q + 1.0), kappa * (pr.p + 1.0) - 1.0);
    return (pr.q + 1.0) / (pr.p - pr.q) - growth;
}

} // namespace blowlab
