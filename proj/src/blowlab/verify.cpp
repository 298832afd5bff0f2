#include "blowlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace blowlab {

FitResult loglog_fit(std::span<const double> x, std::span<const double> y, double lo, double hi) {
    FitResult r;
    r.window_lo = lo;
    r.window_hi = hi;
    std::vector<double> lx, ly;
    for (size_t i = 0; i < x.size(); ++i) {
        if (x[i] < lo || x[i] > hi || !(y[i] > 0.0))
            continue;
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
        if (r.npoints == 0) {
            r.y_min = r.y_max = y[i];
        } else {
            r.y_min = std::min(r.y_min, y[i]);
            r.y_max = std::max(r.y_max, y[i]);
        }
        ++r.npoints;
    }
    if (r.npoints < 3)
        return r;
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < r.npoints; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= r.npoints;
    my /= r.npoints;
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < r.npoints; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    r.slope = sxy / sxx;
    r.intercept = my - r.slope * mx;
    if (r.npoints > 2) {
        double rss = 0.0;
        for (int i = 0; i < r.npoints; ++i) {
            const double e = ly[i] - (r.intercept + r.slope * lx[i]);
            rss += e * e;
        }
        r.stderr_slope = std::sqrt(rss / (r.npoints - 2) / sxx);
    }
    return r;
}

CheckResult theorem1_check(const EnergyProfile& prof, const ExponentSet& exps,
                           const VerifyOptions& opts) {
    CheckResult c;
    c.name = "theorem1_energy_slope";
    c.bound = exps.nu * (1.0 + opts.tol_slope);

    const double t_final = prof.t.back();
    std::vector<double> y(prof.ns());
    for (size_t i = 0; i < prof.ns(); ++i)
        y[i] = prof.energy_at(t_final, prof.s[i]) + prof.hsup_at(t_final, prof.s[i]);

    // Middle decade of the tabulated s range, clear of the discretization
    // floor and of the domain center.
    double s_lo = prof.s.front();
    if (opts.hx > 0.0)
        s_lo = std::max(s_lo, 4.0 * opts.hx);
    const double s_hi = std::min(prof.s.back(), opts.fit_s_max);
    const double mid = 0.5 * (std::log10(s_lo) + std::log10(s_hi));
    const double lo = std::pow(10.0, mid - 0.5);
    const double hi = std::pow(10.0, mid + 0.5);

    const FitResult fit = loglog_fit(prof.s, y, lo, hi);
    c.measured = std::abs(fit.slope);
    c.ci95 = 1.96 * fit.stderr_slope;
    std::ostringstream os;
    os << "fit window s in [" << lo << ", " << hi << "], " << fit.npoints << " points";
    if (fit.npoints < 6 || fit.y_max <= 0.0) {
        c.probative = false;
        c.detail = "InsufficientDecay: energy absent over the fit window; " + os.str();
        return c;
    }
    if (fit.y_max / std::max(fit.y_min, 1e-300) < opts.flat_span) {
        c.probative = false;
        c.detail = "InsufficientDecay: energy flat in s (regime too weak); " + os.str();
        return c;
    }
    c.pass = c.measured <= c.bound;
    c.detail = os.str();
    return c;
}

CheckResult corollary_profile_check(std::span<const double> x, std::span<const double> u_final,
                                    const ExponentSet& exps, const VerifyOptions& opts) {
    CheckResult c;
    c.name = "corollary_final_profile_slope";
    c.bound = exps.mu * (1.0 + opts.tol_slope);
    if (!exps.corollary_applicable) {
        c.applicable = false;
        c.detail = "skipped: requires 0 < p-1 < q < 1";
        return c;
    }

    std::vector<double> d(x.size()), au(x.size());
    double umax = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        d[i] = std::min(x[i], 1.0 - x[i]);
        au[i] = std::abs(u_final[i]);
        umax = std::max(umax, au[i]);
    }
    if (umax <= 0.0) {
        c.probative = false;
        c.pass = true;
        c.detail = "vacuous: final profile identically zero";
        return c;
    }
    const double lo = std::max(4.0 * opts.hx, 1e-12);
    const double hi = std::min(10.0 * lo, opts.fit_s_max);
    const FitResult fit = loglog_fit(d, au, lo, hi);
    c.measured = std::abs(fit.slope);
    c.ci95 = 1.96 * fit.stderr_slope;
    std::ostringstream os;
    os << "fit window d in [" << lo << ", " << hi << "], " << fit.npoints << " points";
    c.detail = os.str();
    if (fit.npoints < 6) {
        c.probative = false;
        c.detail = "near-boundary decade unresolved; " + os.str();
        return c;
    }
    c.pass = c.measured <= c.bound;
    return c;
}

CheckResult localization_check(std::span<const double> times, std::span<const double> interior_max,
                               std::span<const double> trace, double T, const VerifyOptions& opts) {
    CheckResult c;
    c.name = "localization_interior_bounded";
    c.bound = opts.growth_cap;
    if (times.size() < 3 || times.size() != interior_max.size() || times.size() != trace.size()) {
        c.probative = false;
        c.detail = "series too short";
        return c;
    }
    const double rem_end = T - times.back();
    const double rem_ref = opts.window_ratio * rem_end;
    size_t ref = 0;
    for (size_t k = 0; k < times.size(); ++k)
        if (T - times[k] >= rem_ref)
            ref = k;
    if (ref + 1 >= times.size()) {
        c.probative = false;
        c.detail = "final window not covered by the run";
        return c;
    }
    const double m_ref = interior_max[ref];
    const double m_end = interior_max.back();
    const double tiny = 1e-14 * std::max(1.0, *std::max_element(interior_max.begin(), interior_max.end()));
    const double trace_growth = trace[ref] > 0.0 ? trace.back() / trace[ref] : 0.0;

    std::ostringstream os;
    os << "window (T-t): " << rem_ref << " -> " << rem_end << ", interior " << m_ref << " -> "
       << m_end << ", trace growth " << trace_growth << "x";
    c.detail = os.str();
    if (m_ref <= tiny && m_end <= tiny) {
        c.probative = false;
        c.pass = true;
        c.detail = "vacuous: interior identically zero; " + os.str();
        return c;
    }
    if (m_ref <= tiny) {
        c.measured = std::numeric_limits<double>::infinity();
        c.pass = false;
        return c;
    }
    c.measured = m_end / m_ref;
    c.pass = c.measured <= opts.growth_cap;
    return c;
}

CheckResult omega_scaling_check(const EnergyProfile& low, const EnergyProfile& high,
                                double omega_low, double omega_high, const ExponentSet& exps,
                                const ProblemParams& params, const VerifyOptions& opts) {
    CheckResult c;
    c.name = "omega_scaling";
    const double power = (params.q + 1.0) / (params.beta * (params.p - params.q));
    c.bound = std::pow(omega_high / omega_low, power) * 1.25;

    // Median energy ratio at matching depths over the shared middle decade.
    const double t_lo = low.t.back();
    const double t_hi = high.t.back();
    std::vector<double> ratios;
    for (double s : low.s) {
        if (s < 4.0 * opts.hx || s > opts.fit_s_max)
            continue;
        const double a = low.energy_at(t_lo, s) + low.hsup_at(t_lo, s);
        const double b = high.energy_at(t_hi, s) + high.hsup_at(t_hi, s);
        if (a > 0.0 && b > 0.0)
            ratios.push_back(b / a);
    }
    if (ratios.size() < 4) {
        c.probative = false;
        c.detail = "not enough overlapping depths";
        return c;
    }
    std::sort(ratios.begin(), ratios.end());
    c.measured = ratios[ratios.size() / 2];
    c.pass = c.measured <= c.bound;
    std::ostringstream os;
    os << ratios.size() << " depths, amplitude ratio " << omega_high / omega_low << ", power " << power;
    c.detail = os.str();
    return c;
}

} // namespace blowlab
