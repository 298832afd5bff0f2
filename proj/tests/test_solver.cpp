#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "blowlab/solver.hpp"

#include <cmath>
#include <random>

using namespace blowlab;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<double> nodes(int nx) {
    std::vector<double> x(nx + 2);
    for (int i = 0; i <= nx + 1; ++i)
        x[i] = static_cast<double>(i) / (nx + 1);
    return x;
}

double sup_err(const std::vector<double>& a, const std::vector<double>& b) {
    double e = 0.0;
    for (size_t i = 0; i < a.size(); ++i)
        e = std::max(e, std::abs(a[i] - b[i]));
    return e;
}

Mesh uniform_mesh(int nx, int steps, double t_final) {
    MeshSpec spec;
    spec.nx = nx;
    spec.num_steps = steps;
    spec.lambda_mesh = 1.0; // uniform levels
    spec.delta_stop_rel = 1e-12;
    return make_mesh(spec, t_final / (1.0 - 1e-12));
}

} // namespace

TEST_CASE("flux values and symmetry") {
    CHECK(flux(0.0, 2.0, 0.0) == 0.0);
    CHECK(flux(1.0, 2.0, 0.0) == doctest::Approx(1.0));
    CHECK(flux(-2.0, 2.0, 0.0) == doctest::Approx(-4.0));
    CHECK(flux(1.0, 3.0, 1.0) == doctest::Approx(2.0)); // (1+1)^1 * 1
    for (double g : {0.3, 1.7, 4.0})
        for (double p : {1.0, 1.5, 2.0, 3.0})
            CHECK(flux(-g, p, 0.1) == doctest::Approx(-flux(g, p, 0.1)).epsilon(1e-14));
    // monotone in g
    double prev = -1e300;
    for (double g = -3.0; g <= 3.0; g += 0.1) {
        const double v = flux(g, 2.5, 0.05);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("flux_slope is the derivative") {
    for (double p : {1.0, 1.3, 2.0, 3.0}) {
        for (double g : {-1.5, -0.2, 0.0, 0.4, 2.0}) {
            const double eps = 0.07;
            const double dh = 1e-6;
            const double fd = (flux(g + dh, p, eps) - flux(g - dh, p, eps)) / (2.0 * dh);
            CHECK(flux_slope(g, p, eps) == doctest::Approx(fd).epsilon(1e-5));
        }
    }
}

TEST_CASE("constant states are exact fixed points") {
    for (double p : {1.5, 2.0, 3.0}) {
        ProblemParams pr;
        pr.p = p;
        pr.q = 0.8;
        const int nx = 41;
        std::vector<double> u(nodes(nx).size(), 0.7);
        NewtonStats st;
        auto out = step(pr, 1.0 / (nx + 1), 1.0 / (nx + 1), u, 0.1, 0.1, 0.7, 0.7, nullptr,
                        NewtonOptions{}, &st);
        CHECK(sup_err(out, u) <= 1e-10);
        CHECK(st.iterations == 0);
    }
}

TEST_CASE("linear states are steady for every p") {
    for (double p : {1.5, 2.0, 3.0}) {
        ProblemParams pr;
        pr.p = p;
        pr.q = 1.0;
        const int nx = 63;
        const auto x = nodes(nx);
        std::vector<double> u(x.begin(), x.end());
        NewtonStats st;
        auto out = step(pr, 1.0 / (nx + 1), 1.0 / (nx + 1), u, 0.2, 0.2, 0.0, 1.0, nullptr,
                        NewtonOptions{}, &st);
        CHECK(sup_err(out, u) <= 1e-9);
    }
}

TEST_CASE("one heat step from exact data stays within the local error") {
    ProblemParams pr;
    pr.p = 1.0;
    pr.q = 1.0;
    const int nx = 127;
    const double hx = 1.0 / (nx + 1);
    const double dt = 1e-3;
    const auto x = nodes(nx);
    std::vector<double> u0(x.size()), exact(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        u0[i] = std::sin(kPi * x[i]);
        exact[i] = std::sin(kPi * x[i]) * std::exp(-kPi * kPi * dt);
    }
    auto out = step(pr, hx, 0.0, u0, dt, dt, 0.0, 0.0, nullptr, NewtonOptions{}, nullptr);
    // O(dt^2) + O(dt hx^2) local defect, generous constant
    CHECK(sup_err(out, exact) <= 5.0 * (dt * dt + dt * hx * hx) * kPi * kPi * kPi * kPi);
}

TEST_CASE("zero regime keeps the null solution") {
    ProblemParams pr;
    pr.p = 1.5;
    pr.q = 0.8;
    MeshSpec spec;
    spec.nx = 31;
    spec.num_steps = 20;
    const Mesh mesh = make_mesh(spec, 1.0);
    SolveOptions opt;
    opt.u0 = [](double) { return 0.0; };
    opt.bc_left = opt.bc_right = [](double) { return 0.0; };
    const SolutionTrajectory traj = solve(pr, mesh, opt);
    for (const auto& lev : traj.levels)
        for (double v : lev)
            CHECK(v == 0.0);
}

TEST_CASE("manufactured solution: spatial order >= 1.9, temporal order >= 0.9") {
    ProblemParams pr;
    pr.p = 1.0;
    pr.q = 1.0;
    // u = (1+t) sin(pi x), so u_t - u_xx = sin(pi x) (1 + pi^2 (1+t)).
    const SourceFn src = [](double x, double t) {
        return std::sin(kPi * x) * (1.0 + kPi * kPi * (1.0 + t));
    };
    auto run_case = [&](int nx, int steps, double t_final) {
        const Mesh mesh = uniform_mesh(nx, steps, t_final);
        SolveOptions opt;
        opt.u0 = [](double x) { return std::sin(kPi * x); };
        opt.bc_left = opt.bc_right = [](double) { return 0.0; };
        opt.source = &src;
        opt.store_every = 0;
        std::vector<double> last;
        opt.observer = [&last](double, std::span<const double> u, const NewtonStats&) {
            last.assign(u.begin(), u.end());
        };
        const SolutionTrajectory traj = solve(pr, mesh, opt);
        double err = 0.0;
        for (size_t i = 0; i < last.size(); ++i)
            err = std::max(err, std::abs(last[i] - (1.0 + mesh.t_stop) * std::sin(kPi * mesh.x[i])));
        return err;
    };

    SUBCASE("spatial refinement at dt ~ hx^2") {
        const double e1 = run_case(32, 40, 0.1);
        const double e2 = run_case(64, 160, 0.1);
        const double e3 = run_case(128, 640, 0.1);
        const double order12 = std::log2(e1 / e2);
        const double order23 = std::log2(e2 / e3);
        INFO("errors ", e1, " ", e2, " ", e3);
        CHECK(order12 >= 1.9);
        CHECK(order23 >= 1.9);
    }
    SUBCASE("temporal refinement at fixed fine grid") {
        // The linear-in-t solution has no temporal defect, so the decaying
        // source-free solution u = sin(pi x) e^{-pi^2 t} drives this study.
        auto run_decay = [&](int steps) {
            const Mesh mesh = uniform_mesh(512, steps, 0.1);
            SolveOptions opt;
            opt.u0 = [](double x) { return std::sin(kPi * x); };
            opt.bc_left = opt.bc_right = [](double) { return 0.0; };
            opt.store_every = 0;
            std::vector<double> last;
            opt.observer = [&last](double, std::span<const double> u, const NewtonStats&) {
                last.assign(u.begin(), u.end());
            };
            solve(pr, mesh, opt);
            const double amp = std::exp(-kPi * kPi * 0.1);
            double err = 0.0;
            for (size_t i = 0; i < last.size(); ++i)
                err = std::max(err, std::abs(last[i] - amp * std::sin(kPi * mesh.x[i])));
            return err;
        };
        const double e1 = run_decay(10);
        const double e2 = run_decay(20);
        const double e3 = run_decay(40);
        const double order12 = std::log2(e1 / e2);
        const double order23 = std::log2(e2 / e3);
        INFO("errors ", e1, " ", e2, " ", e3);
        CHECK(order12 >= 0.9);
        CHECK(order23 >= 0.9);
    }
}

TEST_CASE("nonnegative data stays nonnegative") {
    ProblemParams pr;
    pr.p = 1.5;
    pr.q = 0.8;
    const int nx = 63;
    MeshSpec spec;
    spec.nx = nx;
    spec.num_steps = 50;
    spec.lambda_mesh = 1.0;
    const Mesh mesh = make_mesh(spec, 0.5);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<double> data(nx + 2);
    for (auto& v : data)
        v = uni(rng);
    data.front() = 0.3;
    data.back() = 0.3;
    SolveOptions opt;
    const std::vector<double> data_copy = data;
    const double hx = mesh.hx;
    opt.u0 = [&data_copy, hx](double x) {
        const size_t i = static_cast<size_t>(std::llround(x / hx));
        return data_copy[std::min(i, data_copy.size() - 1)];
    };
    opt.bc_left = opt.bc_right = [](double) { return 0.3; };
    double min_seen = 1e300;
    opt.observer = [&](double, std::span<const double> u, const NewtonStats&) {
        for (double v : u)
            min_seen = std::min(min_seen, v);
    };
    opt.store_every = 0;
    solve(pr, mesh, opt);
    CHECK(min_seen >= -1e-9);
}

TEST_CASE("blow-up boundary data grows while the midpoint stays bounded") {
    ProblemParams pr;
    pr.p = 1.5;
    pr.q = 0.8;
    pr.beta = 1.0;
    MeshSpec spec;
    spec.nx = 200;
    spec.num_steps = 400;
    spec.delta_stop_rel = 1e-3;
    const Mesh mesh = make_mesh(spec, 1.0);
    const double kappa = 0.85;
    const double f0 = 0.05; // weak amplitude keeps the front near the walls
    SolveOptions opt;
    opt.bc_left = opt.bc_right = [kappa, f0](double t) { return f0 * std::pow(1.0 - t, -kappa); };
    opt.u0 = [f0](double) { return f0; };
    std::vector<double> mid_series, trace_series;
    opt.observer = [&](double, std::span<const double> u, const NewtonStats&) {
        mid_series.push_back(std::abs(u[u.size() / 2]));
        trace_series.push_back(u[0]);
    };
    opt.store_every = 0;
    solve(pr, mesh, opt);
    CHECK(trace_series.back() / trace_series.front() > 100.0);
    // Ratio test between the final levels: midpoint growth saturates.
    const size_t n = mid_series.size();
    const double late = mid_series[n - 1];
    const double mid = mid_series[(3 * n) / 4];
    CHECK(mid > 0.0);
    CHECK(late <= 1.5 * mid);
}

TEST_CASE("dt underflow raises AbortedRun with the partial trajectory") {
    ProblemParams pr;
    pr.p = 1.5;
    pr.q = 0.8;
    MeshSpec spec;
    spec.nx = 15;
    spec.num_steps = 4;
    spec.lambda_mesh = 1.0;
    const Mesh mesh = make_mesh(spec, 1.0);
    SolveOptions opt;
    // An unsatisfiable tolerance forces NonConvergence at every dt; the
    // moving boundary keeps the residual away from zero.
    opt.newton.tol = 1e-320;
    opt.newton.max_iter = 1;
    opt.newton.dt_min_rel = 1e-3;
    opt.bc_left = [](double t) { return 1.0 + t; };
    opt.bc_right = [](double) { return 1.0; };
    opt.u0 = [](double) { return 1.0; };
    bool aborted = false;
    try {
        solve(pr, mesh, opt);
    } catch (const AbortedRun& e) {
        aborted = true;
        CHECK(e.partial_trajectory.times.size() >= 1);
        CHECK(e.partial_trajectory.total_halvings > 0);
    }
    CHECK(aborted);
}
