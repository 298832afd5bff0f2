#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "blowlab/regime.hpp"

#include <cmath>
#include <stdexcept>

using namespace blowlab;

namespace {

ProblemParams base_params() {
    ProblemParams pr;
    pr.p = 1.5;
    pr.q = 0.8;
    pr.n = 1;
    pr.beta = 1.0;
    return pr;
}

// Brute-force budget: composite Simpson in x per time node, trapezoid in t
// on a fine graded grid. Independent of the closed-form path.
BudgetTerms quadrature_budget(const BoundaryRegime& r, const ProblemParams& pr, double t_eval) {
    const int nxq = 4000;
    const int ntq = 20000;
    auto fbar = [&](double tau, double x) { return dirichlet_trace(r, tau) * cutoff_value(r, x); };

    auto space_mass = [&](double tau) {
        double acc = 0.0;
        for (int i = 0; i <= nxq; ++i) {
            const double x = static_cast<double>(i) / nxq;
            const double w = (i == 0 || i == nxq) ? 0.5 : 1.0;
            acc += w * std::pow(std::abs(fbar(tau, x)), pr.q + 1.0);
        }
        return acc / nxq;
    };
    auto space_grad = [&](double tau) {
        double acc = 0.0;
        const double dx = 1.0 / nxq;
        for (int i = 0; i < nxq; ++i) {
            const double x0 = i * dx, x1 = (i + 1) * dx;
            const double g = (cutoff_value(r, x1) - cutoff_value(r, x0)) / dx;
            acc += dx * std::pow(std::abs(dirichlet_trace(r, tau) * g), pr.p + 1.0);
        }
        return acc;
    };

    BudgetTerms b;
    b.sup_mass = space_mass(t_eval);
    double grad = 0.0, mass_path = 0.0;
    double prev_t = 0.0, prev_g = space_grad(0.0);
    double prev_m = std::pow(space_mass(0.0), 1.0 / (pr.q + 1.0));
    for (int k = 1; k <= ntq; ++k) {
        const double tau = t_eval * k / ntq;
        const double g = space_grad(tau);
        const double m = std::pow(space_mass(tau), 1.0 / (pr.q + 1.0));
        grad += 0.5 * (tau - prev_t) * (g + prev_g);
        mass_path += 0.5 * (tau - prev_t) * (m + prev_m);
        prev_t = tau;
        prev_g = g;
        prev_m = m;
    }
    b.grad = grad;
    b.mass_time = std::pow(mass_path, pr.q + 1.0);
    b.total = b.sup_mass + b.grad + b.mass_time;
    return b;
}

} // namespace

TEST_CASE("trace values") {
    BoundaryRegime r;
    r.f0 = 1.0;
    r.kappa = 0.5;
    r.T = 1.0;
    CHECK(dirichlet_trace(r, 0.75) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(dirichlet_trace(r, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    r.f0 = 2.0;
    r.kappa = 1.0;
    CHECK(dirichlet_trace(r, 0.9) == doctest::Approx(20.0).epsilon(1e-14));
    CHECK_THROWS_AS(dirichlet_trace(r, 1.0), std::domain_error);
    CHECK_THROWS_AS(dirichlet_trace(r, -0.1), std::domain_error);
}

TEST_CASE("trace is strictly increasing for kappa > 0") {
    BoundaryRegime r;
    r.kappa = 0.7;
    double prev = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double t = 0.99 * i / 49.0;
        const double v = dirichlet_trace(r, t);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("constant trace budget matches the degenerate closed form") {
    const ProblemParams pr = base_params();
    BoundaryRegime r;
    r.f0 = 1.0;
    r.kappa = 0.0;
    r.cutoff_width = 0.1;
    const CutoffIntegrals c = cutoff_integrals(r, pr.p, pr.q);
    for (double t : {0.1, 0.5, 0.9}) {
        const BudgetTerms b = energy_budget(r, pr, t);
        CHECK(b.sup_mass == doctest::Approx(c.mass).epsilon(1e-13));
        CHECK(b.grad == doctest::Approx(t * c.grad).epsilon(1e-13));
        CHECK(b.mass_time == doctest::Approx(std::pow(t, pr.q + 1.0) * c.mass).epsilon(1e-13));
        CHECK_FALSE(b.sup_mass_divergent);
        CHECK_FALSE(b.grad_divergent);
        CHECK_FALSE(b.mass_time_divergent);
    }
}

TEST_CASE("zero regime has zero budget") {
    const ProblemParams pr = base_params();
    BoundaryRegime r;
    r.f0 = 0.0;
    r.kappa = 0.9;
    const BudgetTerms b = energy_budget(r, pr, 0.5);
    CHECK(b.total == 0.0);
    CHECK_FALSE(b.sup_mass_divergent);
}

TEST_CASE("closed-form budget agrees with numerical quadrature") {
    const ProblemParams pr = base_params();
    BoundaryRegime r;
    r.f0 = 1.0;
    r.kappa = default_kappa(pr, 0.0); // alpha/(q+1) ~ 0.873
    r.cutoff_width = 0.1;
    CHECK(r.kappa == doctest::Approx(0.873).epsilon(2e-3));
    for (double t : {0.3, 0.8}) {
        const BudgetTerms closed = energy_budget(r, pr, t);
        const BudgetTerms quad = quadrature_budget(r, pr, t);
        CHECK(closed.sup_mass == doctest::Approx(quad.sup_mass).epsilon(5e-3));
        CHECK(closed.grad == doctest::Approx(quad.grad).epsilon(5e-3));
        CHECK(closed.mass_time == doctest::Approx(quad.mass_time).epsilon(5e-3));
    }
    const EffectiveAmplitude amp = effective_amplitude(r, pr);
    CHECK(std::isfinite(amp.omega0_eff));
    CHECK(amp.omega0_eff > 0.0);
    // At the sup the cutoff gradient term carries the budget.
    const BudgetTerms at_sup = energy_budget(r, pr, amp.t_at_sup);
    CHECK(at_sup.grad > at_sup.sup_mass + at_sup.mass_time);
}

TEST_CASE("doubling f0 scales the budget terms exactly") {
    const ProblemParams pr = base_params();
    BoundaryRegime r;
    r.f0 = 0.7;
    r.kappa = 0.6;
    r.cutoff_width = 0.15;
    BoundaryRegime r2 = r;
    r2.f0 = 1.4;
    const BudgetTerms a = energy_budget(r, pr, 0.77);
    const BudgetTerms b = energy_budget(r2, pr, 0.77);
    CHECK(b.sup_mass / a.sup_mass == doctest::Approx(std::pow(2.0, pr.q + 1.0)).epsilon(1e-12));
    CHECK(b.grad / a.grad == doctest::Approx(std::pow(2.0, pr.p + 1.0)).epsilon(1e-12));
    CHECK(b.mass_time / a.mass_time == doctest::Approx(std::pow(2.0, pr.q + 1.0)).epsilon(1e-12));
}

TEST_CASE("calibrated regime stays inside the sub-critical window") {
    const ProblemParams pr = base_params();
    const ExponentSet e = compute_exponents(pr);
    BoundaryRegime r;
    r.f0 = 1.0;
    r.kappa = default_kappa(pr, 0.02);
    r.cutoff_width = 0.1;
    // F(t) (T-t)^alpha bounded on a grid approaching T.
    double worst = 0.0;
    for (int i = 0; i <= 200; ++i) {
        const double rem = std::pow(10.0, -8.0 * i / 200.0);
        const double t = 1.0 - rem;
        const double v = energy_budget(r, pr, t).total * std::pow(rem, e.alpha);
        worst = std::max(worst, v);
    }
    const EffectiveAmplitude amp = effective_amplitude(r, pr);
    CHECK(worst <= amp.omega0_eff * (1.0 + 1e-9));
    CHECK(std::isfinite(worst));
    CHECK(effective_beta(pr, r.kappa) > 0.0);
    CHECK(effective_beta(pr, r.kappa) < e.beta0);
}

TEST_CASE("divergence flags follow the exponent thresholds") {
    const ProblemParams pr = base_params();
    BoundaryRegime r;
    r.kappa = 1.2; // kappa >= 1: all three terms blow up
    BudgetTerms b = energy_budget(r, pr, 0.5);
    CHECK(b.sup_mass_divergent);
    CHECK(b.grad_divergent);
    CHECK(b.mass_time_divergent);
    r.kappa = 0.2; // kappa(p+1) = 0.5 < 1: only the sup term grows
    b = energy_budget(r, pr, 0.5);
    CHECK(b.sup_mass_divergent);
    CHECK_FALSE(b.grad_divergent);
    CHECK_FALSE(b.mass_time_divergent);
}

TEST_CASE("one-sided regime halves the cutoff integrals") {
    const ProblemParams pr = base_params();
    BoundaryRegime r;
    r.cutoff_width = 0.2;
    BoundaryRegime one = r;
    one.symmetric = false;
    const CutoffIntegrals cs = cutoff_integrals(r, pr.p, pr.q);
    const CutoffIntegrals co = cutoff_integrals(one, pr.p, pr.q);
    CHECK(co.mass == doctest::Approx(0.5 * cs.mass).epsilon(1e-13));
    CHECK(co.grad == doctest::Approx(0.5 * cs.grad).epsilon(1e-13));
    CHECK(cutoff_value(one, 1.0) == 0.0);
    CHECK(cutoff_value(one, 0.0) == 1.0);
}

TEST_CASE("cubic cutoff integrals are close to but distinct from linear") {
    const ProblemParams pr = base_params();
    BoundaryRegime lin;
    lin.cutoff_width = 0.1;
    BoundaryRegime cub = lin;
    cub.cutoff = CutoffKind::Cubic;
    const CutoffIntegrals cl = cutoff_integrals(lin, pr.p, pr.q);
    const CutoffIntegrals cc = cutoff_integrals(cub, pr.p, pr.q);
    CHECK(cc.mass != doctest::Approx(cl.mass).epsilon(1e-6));
    CHECK(cc.mass > 0.0);
    CHECK(cc.grad > cl.grad); // steeper mid-ramp slope, p+1 power
}
