#include "blowlab/energy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace blowlab {

std::vector<double> make_s_grid(double s_min, double s_max, int pts_per_decade,
                                std::span<const double> extra) {
    if (!(s_min > 0.0) || !(s_max < 0.5) || !(s_min < s_max))
        throw std::invalid_argument("make_s_grid: need 0 < s_min < s_max < 1/2");
    if (pts_per_decade < 2)
        throw std::invalid_argument("make_s_grid: pts_per_decade must be >= 2");

    std::vector<double> s;
    const double decades = std::log10(s_max / s_min);
    const int count = static_cast<int>(std::ceil(decades * pts_per_decade));
    for (int i = 0; i <= count; ++i)
        s.push_back(s_min * std::pow(10.0, decades * i / count));
    s.back() = s_max;
    for (double v : extra) {
        if (!(v > 0.0) || !(v < 0.5))
            throw std::invalid_argument("make_s_grid: extra points must lie in (0, 1/2)");
        s.push_back(v);
    }
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end(),
                        [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(a, b); }),
            s.end());
    return s;
}

namespace {

// Integral over [a, b] of the piecewise-linear interpolant of `vals` on
// `x`, using the prefix trapezoid table `prefix` (prefix[j] = int_0^{x_j}).
double clipped_integral(const std::vector<double>& x, const std::vector<double>& vals,
                        const std::vector<double>& prefix, double a, double b) {
    if (b <= a)
        return 0.0;
    const auto node_value = [&](double xx, size_t hint) {
        const double w = (xx - x[hint]) / (x[hint + 1] - x[hint]);
        return vals[hint] * (1.0 - w) + vals[hint + 1] * w;
    };
    const auto locate = [&](double xx) -> size_t {
        size_t j = std::upper_bound(x.begin(), x.end(), xx) - x.begin();
        if (j == 0)
            return 0;
        if (j >= x.size())
            return x.size() - 2;
        return j - 1;
    };
    const size_t ja = locate(a);
    const size_t jb = locate(b);
    if (ja == jb)
        return 0.5 * (node_value(a, ja) + node_value(b, ja)) * (b - a);
    double acc = 0.5 * (node_value(a, ja) + vals[ja + 1]) * (x[ja + 1] - a);
    acc += prefix[jb] - prefix[ja + 1];
    acc += 0.5 * (vals[jb] + node_value(b, jb)) * (b - x[jb]);
    return acc;
}

size_t bracket(const std::vector<double>& grid, double v) {
    if (grid.size() < 2)
        return 0;
    size_t j = std::upper_bound(grid.begin(), grid.end(), v) - grid.begin();
    if (j == 0)
        return 0;
    if (j >= grid.size())
        return grid.size() - 2;
    return j - 1;
}

double lerp_on(const std::vector<double>& grid, const std::vector<double>& vals, double v) {
    const size_t j = bracket(grid, v);
    const double w = std::clamp((v - grid[j]) / (grid[j + 1] - grid[j]), 0.0, 1.0);
    return vals[j] * (1.0 - w) + vals[j + 1] * w;
}

} // namespace

double EnergyProfile::energy_at(double tq, double sq) const {
    if (!(tq >= t.front() - 1e-12) || !(tq <= t.back() * (1.0 + 1e-12)))
        throw std::domain_error("EnergyProfile: t outside tabulated range");
    tq = std::clamp(tq, t.front(), t.back());
    const size_t k = bracket(t, tq);
    const double wt = (t[k + 1] > t[k]) ? std::clamp((tq - t[k]) / (t[k + 1] - t[k]), 0.0, 1.0) : 0.0;
    const size_t is = bracket(s, sq);
    const double ws = std::clamp((sq - s[is]) / (s[is + 1] - s[is]), 0.0, 1.0);
    auto at = [&](size_t kk, size_t ii) { return E[kk * ns() + ii]; };
    const double lo = at(k, is) * (1.0 - ws) + at(k, is + 1) * ws;
    const double hi = at(k + 1, is) * (1.0 - ws) + at(k + 1, is + 1) * ws;
    return lo * (1.0 - wt) + hi * wt;
}

double EnergyProfile::h_at(double tq, double sq) const {
    tq = std::clamp(tq, t.front(), t.back());
    const size_t k = bracket(t, tq);
    const double wt = (t[k + 1] > t[k]) ? std::clamp((tq - t[k]) / (t[k + 1] - t[k]), 0.0, 1.0) : 0.0;
    const size_t is = bracket(s, sq);
    const double ws = std::clamp((sq - s[is]) / (s[is + 1] - s[is]), 0.0, 1.0);
    auto at = [&](size_t kk, size_t ii) { return h_inst[kk * ns() + ii]; };
    const double lo = at(k, is) * (1.0 - ws) + at(k, is + 1) * ws;
    const double hi = at(k + 1, is) * (1.0 - ws) + at(k + 1, is + 1) * ws;
    return lo * (1.0 - wt) + hi * wt;
}

double EnergyProfile::hsup_at(double tq, double sq) const {
    tq = std::clamp(tq, t.front(), t.back());
    const size_t k = bracket(t, tq);
    const size_t is = bracket(s, sq);
    const double ws = std::clamp((sq - s[is]) / (s[is + 1] - s[is]), 0.0, 1.0);
    auto at = [&](size_t kk, size_t ii) { return h_sup[kk * ns() + ii]; };
    // Running sup of a piecewise-linear function: sup over [0, tq] is the
    // stored sup at level k joined with the interpolated segment piece.
    const double base = at(k, is) * (1.0 - ws) + at(k, is + 1) * ws;
    const double seg = h_at(tq, sq);
    return std::max(base, seg);
}

double EnergyProfile::h_window_sup(double t0, double t1, double sq) const {
    if (t1 < t0)
        std::swap(t0, t1);
    t0 = std::clamp(t0, t.front(), t.back());
    t1 = std::clamp(t1, t.front(), t.back());
    const size_t is = bracket(s, sq);
    const double ws = std::clamp((sq - s[is]) / (s[is + 1] - s[is]), 0.0, 1.0);
    auto at = [&](size_t kk) { return h_inst[kk * ns() + is] * (1.0 - ws) + h_inst[kk * ns() + is + 1] * ws; };
    double sup = std::max(h_at(t0, sq), h_at(t1, sq));
    const size_t k0 = bracket(t, t0);
    const size_t k1 = bracket(t, t1);
    for (size_t k = k0 + 1; k <= k1; ++k)
        if (t[k] > t0 && t[k] < t1)
            sup = std::max(sup, at(k));
    return sup;
}

double EnergyProfile::global_at(double tq) const {
    tq = std::clamp(tq, t.front(), t.back());
    const size_t k = bracket(t, tq);
    const double wt = (t[k + 1] > t[k]) ? std::clamp((tq - t[k]) / (t[k + 1] - t[k]), 0.0, 1.0) : 0.0;
    const double e = E0[k] * (1.0 - wt) + E0[k + 1] * wt;
    const double hs = std::max(h0_sup[k], h0_inst[k] * (1.0 - wt) + h0_inst[k + 1] * wt);
    return e + hs;
}

EnergyAccumulator::EnergyAccumulator(std::vector<double> s_grid, double p, double q)
    : p_(p), q_(q) {
    prof_.s = std::move(s_grid);
    if (prof_.s.empty())
        throw std::invalid_argument("EnergyAccumulator: empty s grid");
}

void EnergyAccumulator::add_level(double t, std::span<const double> u, double hx) {
    const size_t nn = u.size();
    const size_t ns = prof_.s.size();
    node_grad_.resize(nn);
    node_mass_.resize(nn);
    prefix_grad_.resize(nn);
    prefix_mass_.resize(nn);

    std::vector<double> x(nn);
    for (size_t i = 0; i < nn; ++i)
        x[i] = i * hx;
    x.back() = 1.0;

    for (size_t i = 0; i < nn; ++i) {
        double g;
        if (i == 0)
            g = (u[1] - u[0]) / hx;
        else if (i == nn - 1)
            g = (u[nn - 1] - u[nn - 2]) / hx;
        else
            g = (u[i + 1] - u[i - 1]) / (2.0 * hx);
        node_grad_[i] = std::pow(std::abs(g), p_ + 1.0);
        node_mass_[i] = std::pow(std::abs(u[i]), q_ + 1.0);
    }
    prefix_grad_[0] = prefix_mass_[0] = 0.0;
    for (size_t i = 1; i < nn; ++i) {
        const double dx = x[i] - x[i - 1];
        prefix_grad_[i] = prefix_grad_[i - 1] + 0.5 * dx * (node_grad_[i] + node_grad_[i - 1]);
        prefix_mass_[i] = prefix_mass_[i - 1] + 0.5 * dx * (node_mass_[i] + node_mass_[i - 1]);
    }

    std::vector<double> grad_row(ns), mass_row(ns);
    for (size_t j = 0; j < ns; ++j) {
        const double s = prof_.s[j];
        grad_row[j] = clipped_integral(x, node_grad_, prefix_grad_, s, 1.0 - s);
        mass_row[j] = clipped_integral(x, node_mass_, prefix_mass_, s, 1.0 - s);
    }
    const double grad0 = prefix_grad_.back();
    const double mass0 = prefix_mass_.back();

    const bool first = prof_.t.empty();
    const double t_prev = first ? 0.0 : prof_.t.back();
    prof_.t.push_back(t);
    if (first) {
        prof_.E.assign(ns, 0.0);
        prof_.h_inst = mass_row;
        prof_.h_sup = mass_row;
        prof_.E0.push_back(0.0);
        prof_.h0_inst.push_back(mass0);
        prof_.h0_sup.push_back(mass0);
    } else {
        const double half_dt = 0.5 * (t - t_prev);
        const size_t base = prof_.E.size() - ns;
        for (size_t j = 0; j < ns; ++j) {
            prof_.E.push_back(prof_.E[base + j] + half_dt * (prev_grad_row_[j] + grad_row[j]));
            prof_.h_inst.push_back(mass_row[j]);
            prof_.h_sup.push_back(std::max(prof_.h_sup[base + j], mass_row[j]));
        }
        prof_.E0.push_back(prof_.E0.back() + half_dt * (prev_grad0_[0] + grad0));
        prof_.h0_inst.push_back(mass0);
        prof_.h0_sup.push_back(std::max(prof_.h0_sup.back(), mass0));
    }
    prev_grad_row_ = std::move(grad_row);
    prev_grad0_ = {grad0};
}

EnergyProfile tabulate_energies(const SolutionTrajectory& traj, std::vector<double> s_grid,
                                const ProblemParams& params) {
    if (traj.stored_times.size() != traj.times.size())
        throw std::invalid_argument("tabulate_energies: trajectory must store every level");
    EnergyAccumulator acc(std::move(s_grid), params.p, params.q);
    for (size_t k = 0; k < traj.levels.size(); ++k)
        acc.add_level(traj.stored_times[k], traj.levels[k], traj.mesh.hx);
    return acc.take();
}

double energy_E(const SolutionTrajectory& traj, double t, double s, const ProblemParams& params) {
    if (!(s > 0.0) || !(s < 0.5))
        throw std::domain_error("energy_E: s must lie in (0, 1/2)");
    const EnergyProfile prof = tabulate_energies(traj, {s}, params);
    return prof.energy_at(t, s);
}

double energy_h_sup(const SolutionTrajectory& traj, double t, double s, const ProblemParams& params) {
    if (!(s > 0.0) || !(s < 0.5))
        throw std::domain_error("energy_h_sup: s must lie in (0, 1/2)");
    const EnergyProfile prof = tabulate_energies(traj, {s}, params);
    return prof.hsup_at(t, s);
}

LayerSequence gamma_sequence(const EnergyProfile& prof, double s_tilde,
                             const ProblemParams& pr, const GammaOptions& opts) {
    if (prof.nt() < 3)
        throw std::invalid_argument("gamma_sequence: profile too short");
    const ExponentSet exps = compute_exponents(pr);
    if (!(exps.alpha > 0.0))
        throw std::invalid_argument("gamma_sequence: alpha must be positive (beta out of range)");
    const double alpha = exps.alpha;
    if (!(pr.omega0 > 0.0))
        throw std::invalid_argument("gamma_sequence: omega0 must be positive");

    LayerSequence seq;
    seq.s_tilde = s_tilde;
    seq.omega0 = pr.omega0;
    seq.threshold = 2.0 * pr.omega0 * std::pow(pr.T, -pr.alpha1) * std::pow(pr.xi, -alpha);

    const double t_end = prof.t.back();
    const double c = std::pow(pr.xi, alpha) / (pr.omega0 * std::pow(pr.T, alpha - pr.alpha1));
    const double E_end = prof.energy_at(t_end, s_tilde);
    const double M_end = E_end + prof.hsup_at(t_end, s_tilde);
    if (M_end <= seq.threshold) {
        seq.alternative = true;
        return seq;
    }

    // Closing time: the last layer must step past the point where the
    // remaining energy window matches the remaining time to blow-up.
    {
        auto rho_close = [&](double tt) {
            return std::pow(pr.T - tt, -alpha) -
                   c * (E_end - prof.energy_at(tt, s_tilde) + prof.h_window_sup(tt, t_end, s_tilde));
        };
        double lo = 0.0, hi = t_end;
        if (!(rho_close(lo) < 0.0)) {
            seq.t_prime = 0.0;
        } else {
            while (hi - lo > opts.root_tol) {
                const double mid = 0.5 * (lo + hi);
                if (rho_close(mid) < 0.0)
                    lo = mid;
                else
                    hi = mid;
            }
            seq.t_prime = 0.5 * (lo + hi);
        }
    }

    seq.t.push_back(0.0);
    while (seq.j0() < opts.max_layers) {
        const double t_prev = seq.t.back();
        const double E_prev = prof.energy_at(t_prev, s_tilde);
        auto rho = [&](double g) {
            return std::pow(g - t_prev, -alpha) -
                   c * (prof.energy_at(g, s_tilde) - E_prev + prof.h_window_sup(t_prev, g, s_tilde));
        };
        double lo = t_prev + opts.root_tol;
        double hi = t_end;
        if (lo >= hi || rho(hi) > 0.0) {
            if (t_prev > seq.t_prime)
                break;
            std::ostringstream os;
            os << "gamma_sequence: cannot bracket layer " << seq.j0() + 1 << " after t=" << t_prev
               << "; tabulate the energies on a finer time grid";
            throw UnresolvedRoot(os.str());
        }
        // Leftmost crossing of the monotone residual.
        while (hi - lo > opts.root_tol) {
            const double mid = 0.5 * (lo + hi);
            if (rho(mid) > 0.0)
                lo = mid;
            else
                hi = mid;
        }
        const double t_next = 0.5 * (lo + hi);
        if (rho(std::min(t_end, t_next + 1e3 * opts.root_tol)) > -1e-12 * std::pow(t_next - t_prev, -alpha))
            seq.tie_broken = true;

        const double d = t_next - t_prev;
        seq.t.push_back(t_next);
        seq.delta.push_back(d);
        const double lhs = std::pow(d, -alpha);
        const double rhs = c * (prof.energy_at(t_next, s_tilde) - E_prev +
                                prof.h_window_sup(t_prev, t_next, s_tilde));
        seq.identity_residual.push_back(std::abs(lhs - rhs) / lhs);

        if (t_next > seq.t_prime)
            break;
    }
    return seq;
}

MonotonicityReport check_qualified_monotonicity(const LayerSequence& seq, double xi,
                                                const EnergyProfile& prof,
                                                const ProblemParams& pr, double tol_ratio) {
    MonotonicityReport rep;
    rep.xi = xi;
    const ExponentSet exps = compute_exponents(pr);

    rep.precondition_ok = true;
    for (size_t k = 0; k < prof.nt(); ++k) {
        const double rem = pr.T - prof.t[k];
        if (rem <= 0.0)
            continue;
        const double cap = seq.omega0 * std::pow(rem, -exps.alpha);
        const double val = prof.E0[k] + prof.h0_sup[k];
        if (val > cap * (1.0 + 1e-9)) {
            rep.precondition_ok = false;
            break;
        }
    }

    if (seq.alternative || seq.j0() == 0) {
        rep.vacuous = true;
        rep.pass = rep.precondition_ok;
        return rep;
    }
    for (int j = 1; j < seq.j0(); ++j)
        rep.ratios.push_back(seq.delta[j] / seq.delta[j - 1]);
    // Closing increment up to the true blow-up time.
    rep.ratios.push_back((pr.T - seq.t.back()) / seq.delta.back());
    if (rep.ratios.empty())
        rep.vacuous = true;
    rep.max_ratio = rep.ratios.empty() ? 0.0 : *std::max_element(rep.ratios.begin(), rep.ratios.end());
    rep.pass = rep.precondition_ok && rep.max_ratio <= xi * (1.0 + tol_ratio);
    return rep;
}

LayeredEnergies layered_energies(const EnergyProfile& prof, const LayerSequence& seq) {
    LayeredEnergies out;
    out.s = prof.s;
    out.j0 = seq.j0();
    if (seq.alternative || out.j0 == 0)
        return out;
    const size_t ns = prof.ns();
    out.E.resize(static_cast<size_t>(out.j0) * ns);
    out.h.resize(static_cast<size_t>(out.j0) * ns);
    for (int j = 1; j <= out.j0; ++j) {
        for (size_t i = 0; i < ns; ++i) {
            const double s = prof.s[i];
            const double ej = prof.energy_at(seq.t[j], s) - prof.energy_at(seq.t[j - 1], s);
            out.E[(j - 1) * ns + i] = std::max(ej, 0.0);
            out.h[(j - 1) * ns + i] = prof.h_window_sup(seq.t[j - 1], seq.t[j], s);
        }
    }
    double worst = 0.0;
    for (size_t i = 0; i < ns; ++i) {
        double total = 0.0;
        for (int j = 0; j < out.j0; ++j)
            total += out.E[j * ns + i];
        const double ref = prof.energy_at(seq.t.back(), prof.s[i]);
        const double scale = std::max(std::abs(ref), 1e-300);
        worst = std::max(worst, std::abs(total - ref) / scale);
    }
    out.telescoping_residual = worst;
    return out;
}

WeightedDiagnostic weighted_energy_diagnostic(const EnergyProfile& prof,
                                              const LayerSequence& seq,
                                              const ProblemParams& pr) {
    WeightedDiagnostic d;
    const ExponentSet exps = compute_exponents(pr);
    const ContractionFactors f = xi_contraction_factors(pr, exps);
    d.theta1 = f.theta1;
    d.theta2 = f.theta2;
    d.xi_choice_valid = f.theta1 < 1.0 && f.theta2 < 1.0;
    if (seq.alternative || seq.j0() == 0)
        return d;

    const int j0 = seq.j0();
    std::vector<double> AH(j0);
    d.A.resize(j0);
    d.H.resize(j0);
    for (int j = 1; j <= j0; ++j) {
        const double w = std::pow(seq.delta[j - 1], pr.alpha1);
        const double ej = std::max(
            prof.energy_at(seq.t[j], seq.s_tilde) - prof.energy_at(seq.t[j - 1], seq.s_tilde), 0.0);
        const double hj = prof.h_window_sup(seq.t[j - 1], seq.t[j], seq.s_tilde);
        d.A[j - 1] = w * ej;
        d.H[j - 1] = w * hj;
        AH[j - 1] = d.A[j - 1] + d.H[j - 1];
    }

    d.U1.assign(j0, 0.0);
    d.U2.assign(j0, 0.0);
    for (int j = 1; j <= j0; ++j) {
        double u1 = 0.0, u2 = 0.0;
        for (int i = 1; i <= j; ++i) {
            const double r = seq.delta[j - 1] / seq.delta[i - 1];
            u1 += std::pow(1.0 + pr.gamma, double(j - i) / (1.0 + exps.mu1)) *
                  std::pow(r, pr.alpha1 - exps.nu1 / (1.0 + exps.mu1)) * AH[i - 1];
            u2 += std::pow(1.0 + pr.gamma, double(j - i) / (1.0 + exps.mu2)) *
                  std::pow(r, pr.alpha1 - exps.nu2 / (1.0 + exps.mu2)) * AH[i - 1];
        }
        d.U1[j - 1] = u1;
        d.U2[j - 1] = u2;
    }

    d.stat.resize(j0);
    double running = 0.0, prev_running = 0.0;
    for (int j = 1; j <= j0; ++j) {
        d.stat[j - 1] = (d.U1[j - 1] + d.U2[j - 1]) *
                        std::pow(seq.delta[j - 1], exps.alpha - pr.alpha1) / seq.omega0;
        prev_running = running;
        running = std::max(running, d.stat[j - 1]);
    }
    d.sup_stat = running;
    d.last_sup_ratio = prev_running > 0.0 ? running / prev_running : (j0 > 1 ? 0.0 : 1.0);
    return d;
}

} // namespace blowlab
