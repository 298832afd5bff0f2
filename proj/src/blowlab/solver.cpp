#include "blowlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace blowlab {

namespace {

inline double sgn(double x) {
    return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
}

inline double u_from_v(double v, double q) {
    if (q == 1.0)
        return v;
    return sgn(v) * std::pow(std::abs(v), 1.0 / q);
}

inline double v_from_u(double u, double q) {
    if (q == 1.0)
        return u;
    return sgn(u) * std::pow(std::abs(u), q);
}

// du/dv = (1/q)|v|^{1/q-1}. Vanishes at v = 0 for q < 1; for q > 1 the
// slope is singular there and gets chord-capped, which only softens the
// Jacobian, never the residual.
inline double dudv(double v, double q) {
    if (q == 1.0)
        return 1.0;
    double av = std::abs(v);
    if (q > 1.0)
        av = std::max(av, 1e-12);
    if (av == 0.0)
        return 0.0;
    return (1.0 / q) * std::pow(av, 1.0 / q - 1.0);
}

void thomas_solve(std::vector<double>& lower, std::vector<double>& diag,
                  std::vector<double>& upper, std::vector<double>& rhs) {
    const size_t n = diag.size();
    for (size_t i = 1; i < n; ++i) {
        const double w = lower[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for (size_t i = n - 1; i-- > 0;)
        rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
}

} // namespace

double flux(double g, double p, double eps) {
    if (p == 1.0)
        return g;
    const double s2 = g * g + eps * eps;
    if (s2 == 0.0)
        return 0.0;
    return std::pow(s2, 0.5 * (p - 1.0)) * g;
}

double flux_slope(double g, double p, double eps) {
    if (p == 1.0)
        return 1.0;
    const double s2 = g * g + eps * eps;
    if (s2 == 0.0)
        return p > 1.0 ? 0.0 : std::numeric_limits<double>::max();
    return std::pow(s2, 0.5 * (p - 3.0)) * (p * g * g + eps * eps);
}

std::vector<double> step(const ProblemParams& pr, double hx, double eps,
                         const std::vector<double>& u_prev, double dt, double t_new,
                         double bc_left, double bc_right, const SourceFn* source,
                         const NewtonOptions& opts, NewtonStats* stats) {
    if (!(dt > 0.0))
        throw std::invalid_argument("step: dt must be > 0");
    const int nx = static_cast<int>(u_prev.size()) - 2;
    if (nx < 1)
        throw std::invalid_argument("step: need at least one interior node");
    const double p = pr.p, q = pr.q;

    std::vector<double> v_old(nx), v(nx), src(nx, 0.0);
    for (int i = 0; i < nx; ++i)
        v_old[i] = v_from_u(u_prev[i + 1], q);
    v = v_old;
    if (source)
        for (int i = 0; i < nx; ++i)
            src[i] = (*source)((i + 1) * hx, t_new);

    const double vl = v_from_u(bc_left, q);
    const double vr = v_from_u(bc_right, q);

    std::vector<double> u(nx + 2), edge_flux(nx + 1), R(nx);
    auto residual = [&](const std::vector<double>& vv, std::vector<double>& out) -> double {
        u[0] = bc_left;
        u[nx + 1] = bc_right;
        for (int i = 0; i < nx; ++i)
            u[i + 1] = u_from_v(vv[i], q);
        for (int e = 0; e <= nx; ++e)
            edge_flux[e] = flux((u[e + 1] - u[e]) / hx, p, eps);
        double norm = 0.0;
        for (int i = 0; i < nx; ++i) {
            out[i] = vv[i] - v_old[i] - dt * ((edge_flux[i + 1] - edge_flux[i]) / hx + src[i]);
            norm = std::max(norm, std::abs(out[i]));
        }
        return norm;
    };

    double scale = 1.0 + std::abs(vl) + std::abs(vr);
    for (int i = 0; i < nx; ++i)
        scale = std::max(scale, 1.0 + std::abs(v_old[i]) + dt * std::abs(src[i]));
    const double tol_abs = opts.tol * scale;

    std::vector<double> lower(nx), diag(nx), upper(nx), delta(nx), v_try(nx), R_try(nx);
    double norm = residual(v, R);
    bool used_fallback = false;
    int it = 0;
    for (; it < opts.max_iter; ++it) {
        if (norm <= tol_abs) {
            if (stats)
                *stats = {it, norm, used_fallback};
            std::vector<double> out(nx + 2);
            out[0] = bc_left;
            out[nx + 1] = bc_right;
            for (int i = 0; i < nx; ++i)
                out[i + 1] = u_from_v(v[i], q);
            return out;
        }

        // Tridiagonal Jacobian of the residual at the current iterate.
        const double c = dt / (hx * hx);
        for (int i = 0; i < nx; ++i) {
            const double g_left = (u[i + 1] - u[i]) / hx;
            const double g_right = (u[i + 2] - u[i + 1]) / hx;
            const double a_left = flux_slope(g_left, p, eps);
            const double a_right = flux_slope(g_right, p, eps);
            diag[i] = 1.0 + c * (a_left + a_right) * dudv(v[i], q);
            lower[i] = i > 0 ? -c * a_left * dudv(v[i - 1], q) : 0.0;
            upper[i] = i < nx - 1 ? -c * a_right * dudv(v[i + 1], q) : 0.0;
        }
        for (int i = 0; i < nx; ++i)
            delta[i] = -R[i];
        thomas_solve(lower, diag, upper, delta);

        bool accepted = false;
        double eta = 1.0;
        for (int h = 0; h < 22; ++h, eta *= 0.5) {
            for (int i = 0; i < nx; ++i)
                v_try[i] = v[i] + eta * delta[i];
            const double n_try = residual(v_try, R_try);
            if (n_try <= tol_abs || n_try < norm * (1.0 - 1e-4 * eta)) {
                v.swap(v_try);
                R.swap(R_try);
                norm = n_try;
                accepted = true;
                break;
            }
        }
        if (accepted)
            continue;

        // Relaxed fixed-point move: project toward the explicit update.
        residual(v, R); // refresh u and edge fluxes at the current iterate
        bool fp_accepted = false;
        for (double w = 0.5; w >= 1.0 / 64.0; w *= 0.5) {
            for (int i = 0; i < nx; ++i) {
                const double v_fp = v_old[i] + dt * ((edge_flux[i + 1] - edge_flux[i]) / hx + src[i]);
                v_try[i] = v[i] + w * (v_fp - v[i]);
            }
            const double n_try = residual(v_try, R_try);
            if (n_try < norm * (1.0 - 1e-6)) {
                v.swap(v_try);
                R.swap(R_try);
                norm = n_try;
                fp_accepted = true;
                used_fallback = true;
                break;
            }
        }
        if (!fp_accepted)
            break;
    }

    std::ostringstream os;
    os << "step: no convergence at t=" << t_new << " (dt=" << dt << ", residual=" << norm
       << ", tol=" << tol_abs << ", iterations=" << it << ")";
    throw NonConvergence(os.str());
}

SolutionTrajectory solve(const ProblemParams& pr, const Mesh& mesh, const SolveOptions& opts) {
    if (!opts.u0 || !opts.bc_left || !opts.bc_right)
        throw std::invalid_argument("solve: u0 and both boundary functions are required");

    const int nx = static_cast<int>(mesh.x.size()) - 2;
    SolutionTrajectory traj;
    traj.mesh = mesh;
    traj.eps_used = opts.eps < 0.0 ? mesh.hx : opts.eps;

    std::vector<double> u(nx + 2);
    for (int i = 0; i <= nx + 1; ++i)
        u[i] = opts.u0(mesh.x[i]);

    const double bl0 = opts.bc_left(0.0);
    const double br0 = opts.bc_right(0.0);
    const double comp_tol = 1e-9 * (1.0 + std::abs(bl0) + std::abs(br0));
    if (std::abs(u.front() - bl0) > comp_tol || std::abs(u.back() - br0) > comp_tol)
        throw std::invalid_argument("solve: initial data incompatible with boundary values at t=0");
    u.front() = bl0;
    u.back() = br0;

    auto accept = [&](double t, const std::vector<double>& lev, const NewtonStats& st) {
        traj.times.push_back(t);
        traj.stats.push_back(st);
        traj.total_newton_iterations += st.iterations;
        if (opts.observer)
            opts.observer(t, std::span<const double>(lev), st);
        const size_t idx = traj.times.size() - 1;
        if (opts.store_every > 0 && idx % static_cast<size_t>(opts.store_every) == 0) {
            traj.stored_times.push_back(t);
            traj.levels.push_back(lev);
        }
    };
    accept(0.0, u, NewtonStats{});

    const double dt_min = opts.newton.dt_min_rel * pr.T;
    const size_t K = mesh.t.size() - 1;
    std::vector<std::pair<double, std::vector<double>>> buffer;
    std::vector<NewtonStats> buffer_stats;

    for (size_t k = 1; k <= K; ++k) {
        const double t_a = mesh.t[k - 1];
        const double t_b = mesh.t[k];
        int m = 1;
        for (;;) {
            buffer.clear();
            buffer_stats.clear();
            bool ok = true;
            std::vector<double> u_cur = u;
            double t_cur = t_a;
            for (int r = 1; r <= m; ++r) {
                const double t_next = r == m ? t_b : t_a + (t_b - t_a) * r / m;
                NewtonStats st;
                try {
                    auto u_next = step(pr, mesh.hx, traj.eps_used, u_cur, t_next - t_cur, t_next,
                                       opts.bc_left(t_next), opts.bc_right(t_next), opts.source,
                                       opts.newton, &st);
                    u_cur = std::move(u_next);
                } catch (const NonConvergence&) {
                    ok = false;
                    break;
                }
                buffer.emplace_back(t_next, u_cur);
                buffer_stats.push_back(st);
                t_cur = t_next;
            }
            if (ok) {
                for (size_t r = 0; r < buffer.size(); ++r)
                    accept(buffer[r].first, buffer[r].second, buffer_stats[r]);
                u = std::move(buffer.back().second);
                break;
            }
            m *= 2;
            ++traj.total_halvings;
            if ((t_b - t_a) / m < dt_min) {
                std::ostringstream os;
                os << "solve: dt underflow below " << dt_min << " inside [" << t_a << ", " << t_b
                   << "]; last good level t=" << traj.times.back();
                throw AbortedRun(os.str(), std::move(traj));
            }
        }
    }

    // The final level is always retained.
    if (traj.stored_times.empty() || traj.stored_times.back() != traj.times.back()) {
        traj.stored_times.push_back(traj.times.back());
        traj.levels.push_back(u);
    }
    return traj;
}

} // namespace blowlab
