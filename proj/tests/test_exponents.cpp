#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "blowlab/exponents.hpp"

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>

using namespace blowlab;

namespace {

// Exact rational arithmetic oracle for the closed-form exponent formulas.
// Inputs with small denominators keep every intermediate within __int128.
struct Frac {
    long long num = 0;
    long long den = 1;

    Frac() = default;
    Frac(long long n) : num(n), den(1) {}
    Frac(long long n, long long d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den < 0) {
            den = -den;
            num = -num;
        }
        const long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    static long long checked(__int128 v) {
        REQUIRE(v <= INT64_MAX);
        REQUIRE(v >= INT64_MIN);
        return static_cast<long long>(v);
    }

    friend Frac operator+(Frac a, Frac b) {
        return Frac(checked(static_cast<__int128>(a.num) * b.den + static_cast<__int128>(b.num) * a.den),
                    checked(static_cast<__int128>(a.den) * b.den));
    }
    friend Frac operator-(Frac a, Frac b) { return a + Frac(-b.num, b.den); }
    friend Frac operator*(Frac a, Frac b) {
        return Frac(checked(static_cast<__int128>(a.num) * b.num),
                    checked(static_cast<__int128>(a.den) * b.den));
    }
    friend Frac operator/(Frac a, Frac b) {
        REQUIRE(b.num != 0);
        return Frac(checked(static_cast<__int128>(a.num) * b.den),
                    checked(static_cast<__int128>(a.den) * b.num));
    }
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

struct RationalExponents {
    Frac alpha, beta0, nu, mu, theta, nu1, mu1, nu2, mu2;
};

RationalExponents rational_oracle(Frac p, Frac q, Frac n, Frac beta) {
    RationalExponents r;
    const Frac one(1), pq = p - q, q1 = q + one, p1 = p + one;
    r.beta0 = q1 / pq - one / p;
    r.alpha = q1 / pq - beta;
    r.theta = (n * pq + q1) / (n * pq + q1 * p1);
    const Frac d1 = q * p1 + r.theta * pq;
    r.nu1 = (one - r.theta) * q1 / d1;
    r.mu1 = (one - r.theta) * pq / d1;
    r.nu2 = q1 / (q * p1);
    r.mu2 = pq / (q * p1);
    r.nu = (n * pq + q1 * p1) * (q1 - beta * pq) / (beta * pq * pq);
    r.mu = (n * pq + p1 * q1 - beta * pq * p1) / (beta * pq * pq);
    return r;
}

double rel_err(double got, double want) {
    if (want == 0.0)
        return std::abs(got);
    return std::abs(got - want) / std::abs(want);
}

} // namespace

TEST_CASE("hand-derived values for p=2, q=1, n=1, beta=1") {
    ProblemParams pr;
    pr.p = 2.0;
    pr.q = 1.0;
    pr.n = 1;
    pr.beta = 1.0;
    const ExponentSet e = compute_exponents(pr);
    CHECK(rel_err(e.beta0, 1.5) <= 1e-12);
    CHECK(rel_err(e.alpha, 1.0) <= 1e-12);
    CHECK(rel_err(e.theta, 3.0 / 7.0) <= 1e-12);
    CHECK(rel_err(e.nu1, 1.0 / 3.0) <= 1e-12);
    CHECK(rel_err(e.mu1, 1.0 / 6.0) <= 1e-12);
    CHECK(rel_err(e.nu2, 2.0 / 3.0) <= 1e-12);
    CHECK(rel_err(e.mu2, 1.0 / 3.0) <= 1e-12);
    CHECK(rel_err(e.nu, 7.0) <= 1e-12);
    CHECK(rel_err(e.mu, 4.0) <= 1e-12);
    CHECK_FALSE(e.corollary_applicable); // needs p-1 < q
    CHECK(e.beta_in_range);
}

TEST_CASE("hand-derived values for p=1.5, q=0.8, n=1, beta=1") {
    ProblemParams pr;
    pr.p = 1.5;
    pr.q = 0.8;
    pr.n = 1;
    pr.beta = 1.0;
    const ExponentSet e = compute_exponents(pr);
    // 5.2 * 1.1 / 0.49 and 3.45 / 0.49, recomputed by hand.
    CHECK(rel_err(e.nu, 5.72 / 0.49) <= 1e-12);
    CHECK(rel_err(e.mu, 3.45 / 0.49) <= 1e-12);
    CHECK(rel_err(e.beta0, 1.8 / 0.7 - 2.0 / 3.0) <= 1e-12);
    CHECK(rel_err(e.alpha, 1.8 / 0.7 - 1.0) <= 1e-12);
    CHECK(e.corollary_applicable);
    CHECK(e.nu == doctest::Approx(11.673469).epsilon(1e-6));
    CHECK(e.mu == doctest::Approx(7.040816).epsilon(1e-6));
    CHECK(e.beta0 == doctest::Approx(1.904762).epsilon(1e-6));
}

TEST_CASE("nu vanishes at beta = (q+1)/(p-q), flagged out of range") {
    ProblemParams pr;
    pr.p = 2.0;
    pr.q = 1.0;
    pr.n = 1;
    pr.beta = 2.0; // (q+1)/(p-q)
    const ExponentSet e = compute_exponents(pr);
    CHECK(e.nu == doctest::Approx(0.0));
    CHECK_FALSE(e.beta_in_range);
}

TEST_CASE("rational-arithmetic oracle over a grid of rational inputs") {
    struct Case {
        Frac p, q, beta;
        int n;
    };
    const Case cases[] = {
        {Frac(2), Frac(1), Frac(1), 1},          {Frac(3, 2), Frac(4, 5), Frac(1), 1},
        {Frac(3, 2), Frac(4, 5), Frac(1, 2), 1}, {Frac(3), Frac(2), Frac(1, 4), 2},
        {Frac(5, 2), Frac(1, 2), Frac(3, 4), 1}, {Frac(2), Frac(1), Frac(1, 3), 3},
        {Frac(9, 5), Frac(9, 10), Frac(6, 5), 1},
    };
    for (const auto& c : cases) {
        ProblemParams pr;
        pr.p = c.p.value();
        pr.q = c.q.value();
        pr.beta = c.beta.value();
        pr.n = c.n;
        const ExponentSet e = compute_exponents(pr);
        const RationalExponents r = rational_oracle(c.p, c.q, Frac(c.n), c.beta);
        CHECK(rel_err(e.alpha, r.alpha.value()) <= 1e-12);
        CHECK(rel_err(e.beta0, r.beta0.value()) <= 1e-12);
        CHECK(rel_err(e.nu, r.nu.value()) <= 1e-12);
        CHECK(rel_err(e.mu, r.mu.value()) <= 1e-12);
        CHECK(rel_err(e.theta, r.theta.value()) <= 1e-12);
        CHECK(rel_err(e.nu1, r.nu1.value()) <= 1e-12);
        CHECK(rel_err(e.mu1, r.mu1.value()) <= 1e-12);
        CHECK(rel_err(e.nu2, r.nu2.value()) <= 1e-12);
        CHECK(rel_err(e.mu2, r.mu2.value()) <= 1e-12);
    }
}

TEST_CASE("rejections") {
    ProblemParams pr;
    pr.p = 1.0;
    pr.q = 2.0;
    CHECK_THROWS_AS(compute_exponents(pr), std::invalid_argument);
    pr = ProblemParams{};
    pr.q = 0.0;
    CHECK_THROWS_AS(compute_exponents(pr), std::invalid_argument);
    pr = ProblemParams{};
    pr.beta = -1.0;
    CHECK_THROWS_AS(compute_exponents(pr), std::invalid_argument);
}

TEST_CASE("nu and mu strictly decrease in beta on (0, beta0)") {
    ProblemParams pr;
    pr.p = 1.5;
    pr.q = 0.8;
    pr.n = 1;
    const double beta0 = compute_exponents(pr).beta0;
    double prev_nu = 1e300, prev_mu = 1e300;
    for (int i = 1; i <= 40; ++i) {
        pr.beta = beta0 * i / 41.0;
        const ExponentSet e = compute_exponents(pr);
        CHECK(e.nu < prev_nu);
        CHECK(e.mu < prev_mu);
        CHECK(e.nu > 0.0);
        CHECK(e.mu > 0.0);
        prev_nu = e.nu;
        prev_mu = e.mu;
    }
}

TEST_CASE("theta in (0,1) and cross identities across the (p,q) plane") {
    for (double p = 1.1; p <= 4.01; p += 0.29) {
        for (double q = 0.1; q < p - 0.05; q += 0.17) {
            for (int n : {1, 2, 3}) {
                ProblemParams pr;
                pr.p = p;
                pr.q = q;
                pr.n = n;
                pr.beta = 0.3;
                const ExponentSet e = compute_exponents(pr);
                CHECK(e.theta > 0.0);
                CHECK(e.theta < 1.0);
                // nu = (1+mu1)/mu1 * alpha/beta and mu = (n+nu)/(q+1):
                // the layer exponents and the headline exponents cohere.
                CHECK(rel_err(e.nu, (1.0 + e.mu1) / e.mu1 * e.alpha / pr.beta) <= 1e-10);
                CHECK(rel_err(e.mu, (n + e.nu) / (q + 1.0)) <= 1e-10);
                // nu2/(1+mu2) collapses to 1/p.
                CHECK(rel_err(e.nu2 / (1.0 + e.mu2), 1.0 / p) <= 1e-12);
            }
        }
    }
}

TEST_CASE("validate_params fixture: all pass") {
    ProblemParams pr;
    pr.p = 1.5;
    pr.q = 0.8;
    pr.beta = 1.0;
    pr.alpha1 = 0.9;
    pr.xi = 0.3;
    pr.gamma = 0.2;
    const ValidationReport rep = validate_params(pr);
    for (const auto& c : rep.checks) {
        INFO(c.name, ": ", c.condition);
        CHECK(c.pass);
    }
    CHECK(rep.ok);
    CHECK(rep.theta1 < 1.0);
    CHECK(rep.theta2 < 1.0);
    CHECK(rep.xi_max > 0.3);
}

TEST_CASE("validate_params fixture: p <= q fails the ordering") {
    ProblemParams pr;
    pr.p = 1.0;
    pr.q = 2.0;
    const ValidationReport rep = validate_params(pr);
    CHECK_FALSE(rep.ok);
    bool found = false;
    for (const auto& c : rep.checks)
        if (c.name == "p>q") {
            found = true;
            CHECK_FALSE(c.pass);
        }
    CHECK(found);
}

TEST_CASE("validate_params fixture: beta above beta0") {
    ProblemParams pr;
    pr.p = 2.0;
    pr.q = 1.0;
    pr.beta = 1.6; // beta0 = 1.5
    const ValidationReport rep = validate_params(pr);
    CHECK_FALSE(rep.ok);
    for (const auto& c : rep.checks)
        if (c.name == "beta<beta0")
            CHECK_FALSE(c.pass);
}

TEST_CASE("binding xi constraint is reported") {
    ProblemParams pr;
    pr.p = 1.5;
    pr.q = 0.8;
    pr.beta = 1.0;
    pr.alpha1 = 0.9;
    pr.gamma = 1.0; // large gamma: theta2 < 1 becomes the tight cap
    pr.xi = 0.3;
    const ValidationReport rep = validate_params(pr);
    CHECK(rep.binding_xi_constraint == "theta2<1");
    CHECK_FALSE(rep.ok); // xi = 0.3 exceeds the theta2 cap at gamma = 1
    ProblemParams ok = pr;
    ok.xi = 0.5 * rep.xi_max;
    CHECK(validate_params(ok).ok);
}
