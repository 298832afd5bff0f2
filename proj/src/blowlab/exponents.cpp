#include "blowlab/exponents.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace blowlab {

ExponentSet compute_exponents(const ProblemParams& pr) {
    if (!(pr.q > 0.0))
        throw std::invalid_argument("compute_exponents: q must be > 0");
    if (!(pr.p > pr.q))
        throw std::invalid_argument("compute_exponents: requires p > q");
    if (!(pr.beta > 0.0))
        throw std::invalid_argument("compute_exponents: beta must be > 0");
    if (pr.n < 1)
        throw std::invalid_argument("compute_exponents: n must be >= 1");

    const double p = pr.p;
    const double q = pr.q;
    const double beta = pr.beta;
    const double n = static_cast<double>(pr.n);
    const double pq = p - q;

    ExponentSet e;
    e.beta0 = (q + 1.0) / pq - 1.0 / p;
    e.alpha = (q + 1.0) / pq - beta;
    e.theta = (n * pq + q + 1.0) / (n * pq + (q + 1.0) * (p + 1.0));

    const double denom1 = q * (p + 1.0) + e.theta * pq;
    e.nu1 = (1.0 - e.theta) * (q + 1.0) / denom1;
    e.mu1 = (1.0 - e.theta) * pq / denom1;
    e.nu2 = (q + 1.0) / (q * (p + 1.0));
    e.mu2 = pq / (q * (p + 1.0));

    e.nu = (n * pq + (q + 1.0) * (p + 1.0)) * (q + 1.0 - beta * pq) / (beta * pq * pq);
    e.mu = (n * pq + (p + 1.0) * (q + 1.0) - beta * pq * (p + 1.0)) / (beta * pq * pq);

    e.corollary_applicable = (p > 1.0) && (p - 1.0 < q) && (q < 1.0);
    e.beta_in_range = (beta < e.beta0);
    return e;
}

ContractionFactors xi_contraction_factors(const ProblemParams& pr, const ExponentSet& e) {
    ContractionFactors f;
    const double g1 = std::pow(1.0 + pr.gamma, 1.0 / (1.0 + e.mu1));
    const double g2 = std::pow(1.0 + pr.gamma, 1.0 / (1.0 + e.mu2));
    f.theta1 = g1 * std::pow(pr.xi, pr.alpha1 - e.nu1 / (1.0 + e.mu1));
    f.theta2 = g2 * std::pow(pr.xi, pr.alpha1 - e.nu2 / (1.0 + e.mu2));
    return f;
}

namespace {

std::string fmt_cond(const char* lhs, double lv, const char* rel, const char* rhs, double rv) {
    std::ostringstream os;
    os.precision(6);
    os << lhs << " = " << lv << " " << rel << " " << rhs << " = " << rv;
    return os.str();
}

} // namespace

ValidationReport validate_params(const ProblemParams& pr) {
    ValidationReport rep;
    auto add = [&rep](const std::string& name, const std::string& cond, bool pass) {
        rep.checks.push_back({name, cond, pass});
    };

    const bool basics_ok = pr.q > 0.0 && pr.p > pr.q && pr.beta > 0.0 && pr.n >= 1;

    {
        std::ostringstream os;
        os.precision(6);
        os << "q = " << pr.q << " > 0";
        add("q>0", os.str(), pr.q > 0.0);
    }
    add("p>q", fmt_cond("p", pr.p, ">", "q", pr.q), pr.p > pr.q);
    add("n>=1", fmt_cond("n", pr.n, ">=", "1", 1.0), pr.n >= 1);
    add("T>=1", fmt_cond("T", pr.T, ">=", "1", 1.0), pr.T >= 1.0);
    {
        std::ostringstream os;
        os.precision(6);
        os << "omega0 = " << pr.omega0 << " > 0";
        add("omega0>0", os.str(), pr.omega0 > 0.0);
    }
    {
        std::ostringstream os;
        os.precision(6);
        os << "beta = " << pr.beta << " > 0";
        add("beta>0", os.str(), pr.beta > 0.0);
    }
    {
        std::ostringstream os;
        os.precision(6);
        os << "gamma = " << pr.gamma << " > 0";
        add("gamma>0", os.str(), pr.gamma > 0.0);
    }
    {
        std::ostringstream os;
        os.precision(6);
        os << "xi = " << pr.xi << " in (0,1)";
        add("xi_in_(0,1)", os.str(), pr.xi > 0.0 && pr.xi < 1.0);
    }

    if (!basics_ok || !(pr.gamma > 0.0) || !(pr.xi > 0.0 && pr.xi < 1.0)) {
        add("beta<beta0", "not evaluated (base conditions failed)", false);
        add("alpha1_range", "not evaluated (base conditions failed)", false);
        add("xi<(1+gamma)^(-1/alpha1)", "not evaluated (base conditions failed)", false);
        add("theta1<1", "not evaluated (base conditions failed)", false);
        add("theta2<1", "not evaluated (base conditions failed)", false);
        rep.ok = false;
        return rep;
    }

    const ExponentSet e = compute_exponents(pr);
    add("beta<beta0", fmt_cond("beta", pr.beta, "<", "beta0", e.beta0), pr.beta < e.beta0);

    const double inv_p = 1.0 / pr.p;
    {
        std::ostringstream os;
        os.precision(6);
        os << "1/p = " << inv_p << " < alpha1 = " << pr.alpha1 << " < alpha = " << e.alpha;
        add("alpha1_range", os.str(), pr.alpha1 > inv_p && pr.alpha1 < e.alpha);
    }

    // Admissible xi: the first cap and the two contraction conditions.
    // Both contraction exponents alpha1 - nu_k/(1+mu_k) are positive once
    // alpha1 > 1/p, so each condition is a cap on xi.
    const double cap0 = std::pow(1.0 + pr.gamma, -1.0 / pr.alpha1);
    const double e1 = pr.alpha1 - e.nu1 / (1.0 + e.mu1);
    const double e2 = pr.alpha1 - e.nu2 / (1.0 + e.mu2);
    const double cap1 = e1 > 0.0 ? std::pow(1.0 + pr.gamma, -1.0 / ((1.0 + e.mu1) * e1)) : 0.0;
    const double cap2 = e2 > 0.0 ? std::pow(1.0 + pr.gamma, -1.0 / ((1.0 + e.mu2) * e2)) : 0.0;

    const ContractionFactors f = xi_contraction_factors(pr, e);
    rep.theta1 = f.theta1;
    rep.theta2 = f.theta2;

    add("xi<(1+gamma)^(-1/alpha1)", fmt_cond("xi", pr.xi, "<", "cap", cap0), pr.xi < cap0);
    add("theta1<1", fmt_cond("theta1", f.theta1, "<", "1", 1.0), f.theta1 < 1.0);
    add("theta2<1", fmt_cond("theta2", f.theta2, "<", "1", 1.0), f.theta2 < 1.0);

    rep.xi_max = cap0;
    rep.binding_xi_constraint = "xi<(1+gamma)^(-1/alpha1)";
    if (cap1 < rep.xi_max) {
        rep.xi_max = cap1;
        rep.binding_xi_constraint = "theta1<1";
    }
    if (cap2 < rep.xi_max) {
        rep.xi_max = cap2;
        rep.binding_xi_constraint = "theta2<1";
    }

    rep.ok = true;
    for (const auto& c : rep.checks)
        rep.ok = rep.ok && c.pass;
    return rep;
}

} // namespace blowlab
