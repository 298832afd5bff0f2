#include "blowlab/lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace blowlab {

StampacchiaBound stampacchia_bound(double a, double rho, double lambda) {
    if (!(lambda > 0.0) || !(lambda < 1.0))
        throw std::invalid_argument("stampacchia_bound: lambda must lie in (0, 1)");
    if (!(a > 0.0) || !(rho > 0.0))
        throw std::invalid_argument("stampacchia_bound: a and rho must be positive");
    StampacchiaBound b;
    b.coefficient = std::pow(2.0, rho / (lambda * (1.0 - lambda) * (1.0 - lambda))) *
                    std::pow(a, 1.0 / (1.0 - lambda));
    b.exponent = rho / (1.0 - lambda);
    return b;
}

StampacchiaReport stampacchia_check(const StampacchiaInput& in) {
    StampacchiaReport rep;
    const size_t n = in.s.size();
    if (n < 2 || in.f.size() != n)
        throw std::invalid_argument("stampacchia_check: need a table of at least two points");
    for (size_t i = 0; i + 1 < n; ++i) {
        if (!(in.s[i + 1] > in.s[i]))
            throw std::invalid_argument("stampacchia_check: s must be strictly increasing");
        if (in.f[i + 1] > in.f[i] * (1.0 + 1e-12))
            throw std::invalid_argument("stampacchia_check: f must be nonincreasing");
    }
    const double decades = std::log10(in.s.back() / in.s.front());
    rep.table_dense_enough = decades <= 0.0 || (n - 1) / decades >= 32.0;

    rep.premise_holds = true;
    rep.worst_premise_ratio = 0.0;
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            const double delta = in.s[j] - in.s[i];
            const double cap = in.a * std::pow(delta, -in.rho) * std::pow(in.f[i], in.lambda);
            if (cap == 0.0) {
                if (in.f[j] > 0.0) {
                    rep.premise_holds = false;
                    rep.worst_premise_ratio = std::numeric_limits<double>::infinity();
                    rep.premise_violation_s = in.s[i];
                    rep.premise_violation_delta = delta;
                }
                continue;
            }
            const double ratio = in.f[j] / cap;
            if (ratio > rep.worst_premise_ratio) {
                rep.worst_premise_ratio = ratio;
                if (ratio > 1.0 + 1e-12) {
                    rep.premise_holds = false;
                    rep.premise_violation_s = in.s[i];
                    rep.premise_violation_delta = delta;
                }
            }
        }
    }

    const StampacchiaBound b = stampacchia_bound(in.a, in.rho, in.lambda);
    rep.bound_holds = true;
    for (size_t i = 0; i < n; ++i) {
        const double cap = b.coefficient * std::pow(in.s[i], -b.exponent);
        const double ratio = cap > 0.0 ? in.f[i] / cap : (in.f[i] > 0.0 ? 1e300 : 0.0);
        rep.worst_bound_ratio = std::max(rep.worst_bound_ratio, ratio);
        if (ratio > 1.0 + 1e-12)
            rep.bound_holds = false;
    }
    return rep;
}

namespace {

// Inverts (1-lambda) max{k1 D^{1+g1}, k2 D^{1+g2}} = r for D >= 0; the max
// equals r at the smaller of the two branch inverses.
double invert_max_branch(double r, double k1, double k2, double g1, double g2, double one_minus_lambda) {
    if (r <= 0.0)
        return 0.0;
    const double rr = r / one_minus_lambda;
    double d = std::numeric_limits<double>::infinity();
    if (k1 > 0.0)
        d = std::min(d, std::pow(rr / k1, 1.0 / (1.0 + g1)));
    if (k2 > 0.0)
        d = std::min(d, std::pow(rr / k2, 1.0 / (1.0 + g2)));
    if (!std::isfinite(d))
        throw StiffStep("lemma926: both branch coefficients vanished");
    return d;
}

double lerp_grid(const std::vector<double>& x, const std::vector<double>& y, double xx) {
    if (xx <= x.front())
        return y.front();
    if (xx >= x.back())
        return y.back();
    const size_t j = std::upper_bound(x.begin(), x.end(), xx) - x.begin() - 1;
    const double w = (xx - x[j]) / (x[j + 1] - x[j]);
    return y[j] * (1.0 - w) + y[j + 1] * w;
}

} // namespace

Lemma926Family lemma926_propagate(const Lemma926Input& in, const std::vector<double>& s_grid) {
    if (!(in.delta > 0.0) || !(in.delta < 1.0))
        throw std::invalid_argument("lemma926_propagate: delta must lie in (0, 1)");
    if (!(in.gamma2 > in.gamma1) || !(in.gamma1 > 0.0))
        throw std::invalid_argument("lemma926_propagate: need gamma2 > gamma1 > 0");
    if (!(in.lambda > 0.0) || !(in.lambda < 1.0))
        throw std::invalid_argument("lemma926_propagate: lambda must lie in (0, 1)");
    if (!(in.c1 >= 0.0) || !(in.c2 >= 0.0) || !(in.c3 >= 0.0))
        throw std::invalid_argument("lemma926_propagate: coefficients must be nonnegative");
    for (size_t j = 1; j < in.eps.size(); ++j)
        if (!(in.eps[j] < in.eps[j - 1]) || !(in.eps[j] > 0.0))
            throw std::invalid_argument("lemma926_propagate: eps must be strictly decreasing and positive");
    if (s_grid.size() < 2 || !(s_grid.front() >= 0.0))
        throw std::invalid_argument("lemma926_propagate: bad s grid");

    Lemma926Family fam;
    fam.s = s_grid;
    fam.j0 = static_cast<int>(in.eps.size());
    const size_t ns = fam.s.size();
    fam.M.assign(static_cast<size_t>(fam.j0) * ns, 0.0);

    std::vector<double> prev(ns, 0.0); // M_0 = 0
    std::vector<double> cur(ns, 0.0);
    for (int j = 1; j <= fam.j0; ++j) {
        const double e = in.eps[j - 1];
        const double k1 = in.c1 * std::pow(e, in.gamma1);
        const double k2 = in.c2 * std::pow(e, in.gamma2);
        const double K = in.c3 * std::pow(e, -(1.0 - in.delta));

        double m = K;
        cur[0] = m;
        for (size_t i = 1; i < ns; ++i) {
            double s = fam.s[i - 1];
            const double s_target = fam.s[i];
            int guard = 0;
            while (s < s_target) {
                const double mp_here = in.lambda * lerp_grid(fam.s, prev, s);
                const double r = m - mp_here;
                const double d = invert_max_branch(r, k1, k2, in.gamma1, in.gamma2, 1.0 - in.lambda);
                if (d == 0.0) {
                    // Riding the lambda * M_{j-1} floor: jump to the grid point.
                    m = std::max(in.lambda * lerp_grid(fam.s, prev, s_target), 0.0);
                    s = s_target;
                    break;
                }
                // Sub-step limited to a 10% relative change of both M and
                // the branch argument, so the power-law decay is resolved.
                double h = s_target - s;
                const double h_cap = 0.1 * std::max(m, 1e-300) / d;
                const double h_cap_r = 0.1 * std::max(r, 1e-300) / d;
                h = std::min(h, std::max(std::min(h_cap, h_cap_r), 1e-6 * (s_target - s)));
                // Midpoint evaluation.
                const double m_half = std::max(m - 0.5 * h * d, 0.0);
                const double mp_half = in.lambda * lerp_grid(fam.s, prev, s + 0.5 * h);
                const double d_half =
                    invert_max_branch(m_half - mp_half, k1, k2, in.gamma1, in.gamma2, 1.0 - in.lambda);
                double m_new = m - h * d_half;
                const double floor_new = in.lambda * lerp_grid(fam.s, prev, s + h);
                m_new = std::max(m_new, std::max(floor_new, 0.0));
                if (!std::isfinite(m_new) || m_new > m * (1.0 + 1e-12) + 1e-300) {
                    std::ostringstream os;
                    os << "lemma926_propagate: unstable sub-step at layer " << j << ", s=" << s
                       << "; use a finer s grid";
                    throw StiffStep(os.str());
                }
                m = m_new;
                s += h;
                if (++guard > 2000000)
                    throw StiffStep("lemma926_propagate: sub-step budget exhausted");
            }
            cur[i] = m;
        }
        for (size_t i = 0; i < ns; ++i)
            fam.M[(j - 1) * ns + i] = cur[i];
        prev = cur;
    }
    return fam;
}

EnvelopeReport lemma926_bound_check(const Lemma926Family& fam, const Lemma926Input& in) {
    EnvelopeReport rep;
    rep.sigma = (1.0 + in.gamma1) * (1.0 - in.delta) / (in.delta * in.gamma1);
    const size_t ns = fam.ns();
    if (fam.j0 == 0 || ns == 0)
        return rep;

    std::vector<double> env(ns, 0.0);
    for (int j = 0; j < fam.j0; ++j)
        for (size_t i = 0; i < ns; ++i)
            env[i] = std::max(env[i], fam.M[j * ns + i]);

    // Positive-envelope support, split geometrically: the head carries the
    // power decay, the tail the floor constant.
    size_t last_pos = 0;
    bool any = false;
    for (size_t i = 0; i < ns; ++i)
        if (env[i] > 0.0 && fam.s[i] > 0.0) {
            last_pos = i;
            any = true;
        }
    if (!any) {
        rep.slope_ok = true; // zero family satisfies the bound with B1 = B2 = 0
        return rep;
    }
    size_t first_pos = 0;
    while (first_pos < ns && !(fam.s[first_pos] > 0.0))
        ++first_pos;
    rep.split_s = std::sqrt(fam.s[first_pos] * fam.s[last_pos]);

    double slope_num = 0.0, slope_den = 0.0, mx = 0.0, my = 0.0;
    int npts = 0;
    for (size_t i = first_pos; i <= last_pos; ++i) {
        if (!(env[i] > 0.0))
            continue;
        if (fam.s[i] <= rep.split_s) {
            rep.B1 = std::max(rep.B1, env[i] * std::pow(fam.s[i], rep.sigma));
            ++npts;
        } else {
            rep.B2 = std::max(rep.B2, env[i]);
        }
    }
    // Log-log least squares over the power window.
    std::vector<double> lx, ly;
    for (size_t i = first_pos; i <= last_pos; ++i)
        if (env[i] > 0.0 && fam.s[i] <= rep.split_s) {
            lx.push_back(std::log(fam.s[i]));
            ly.push_back(std::log(env[i]));
        }
    rep.fit_points = static_cast<int>(lx.size());
    if (lx.size() >= 3) {
        for (size_t i = 0; i < lx.size(); ++i) {
            mx += lx[i];
            my += ly[i];
        }
        mx /= lx.size();
        my /= lx.size();
        for (size_t i = 0; i < lx.size(); ++i) {
            slope_num += (lx[i] - mx) * (ly[i] - my);
            slope_den += (lx[i] - mx) * (lx[i] - mx);
        }
        rep.fitted_slope = std::abs(slope_num / slope_den);
    }
    rep.slope_ok = rep.fitted_slope <= rep.sigma * 1.05;
    (void)npts;
    return rep;
}

std::vector<double> random_eps_sequence(double eps_start, double eps_end, int j0, std::uint64_t seed) {
    if (!(eps_end < eps_start) || !(eps_end > 0.0) || j0 < 1)
        throw std::invalid_argument("random_eps_sequence: need eps_start > eps_end > 0 and j0 >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> jitter(0.5, 1.5);
    std::vector<double> inc(j0);
    double total = 0.0;
    for (int j = 0; j < j0; ++j) {
        inc[j] = jitter(rng);
        total += inc[j];
    }
    const double span = std::log(eps_start / eps_end);
    std::vector<double> eps(j0);
    double acc = 0.0;
    for (int j = 0; j < j0; ++j) {
        acc += inc[j];
        eps[j] = eps_start * std::exp(-span * acc / total);
    }
    return eps;
}

Lemma926SweepResult lemma926_sweep(const Lemma926SweepConfig& cfg) {
    Lemma926SweepResult out;
    if (cfg.j0_list.empty() || cfg.num_sequences < 1) {
        out.pass = true; // empty sweep: nothing to falsify
        return out;
    }
    std::vector<double> s_grid;
    {
        const double decades = std::log10(cfg.s0 / cfg.s_min);
        const int count = static_cast<int>(std::ceil(decades * cfg.s_points_per_decade));
        s_grid.push_back(0.0);
        for (int i = 0; i <= count; ++i)
            s_grid.push_back(cfg.s_min * std::pow(10.0, decades * i / count));
        s_grid.back() = cfg.s0;
    }

    std::vector<double> b1s, b2s;
    out.sigma = (1.0 + cfg.base.gamma1) * (1.0 - cfg.base.delta) / (cfg.base.delta * cfg.base.gamma1);
    for (int sidx = 0; sidx < cfg.num_sequences; ++sidx) {
        for (int j0 : cfg.j0_list) {
            Lemma926Input in = cfg.base;
            in.eps = random_eps_sequence(cfg.eps_start, cfg.eps_end, j0,
                                         cfg.seed + 1000003ULL * sidx + static_cast<std::uint64_t>(j0));
            const Lemma926Family fam = lemma926_propagate(in, s_grid);
            EnvelopeReport rep = lemma926_bound_check(fam, in);
            out.worst_slope = std::max(out.worst_slope, rep.fitted_slope);
            b1s.push_back(rep.B1);
            b2s.push_back(rep.B2);
            out.runs.push_back(std::move(rep));
        }
    }
    auto drift = [](const std::vector<double>& v) {
        const double hi = *std::max_element(v.begin(), v.end());
        const double lo = *std::min_element(v.begin(), v.end());
        const double mid = 0.5 * (hi + lo);
        return mid > 0.0 ? (hi - lo) / mid : 0.0;
    };
    out.b1_drift = drift(b1s);
    out.b2_drift = drift(b2s);
    out.pass = out.worst_slope <= out.sigma * 1.05 && out.b1_drift < cfg.drift_tol &&
               out.b2_drift < cfg.drift_tol;
    return out;
}

} // namespace blowlab
