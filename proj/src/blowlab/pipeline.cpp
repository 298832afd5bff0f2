#include "blowlab/pipeline.hpp"
#include "blowlab/io.hpp"
#include "blowlab/lemmas.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

namespace blowlab {

using nlohmann::json;

BoundaryRegime make_regime(const RunConfig& cfg) {
    BoundaryRegime r;
    r.f0 = cfg.regime.f0;
    r.T = cfg.problem.T;
    r.cutoff_width = cfg.regime.cutoff_width;
    r.symmetric = cfg.regime.symmetric;
    r.cutoff = cfg.regime.cutoff == "cubic" ? CutoffKind::Cubic : CutoffKind::Linear;
    r.kappa = cfg.regime.kappa_auto ? default_kappa(cfg.problem, cfg.regime.eps_cal)
                                    : cfg.regime.kappa;
    return r;
}

RunArtifacts run_scenario(const RunConfig& cfg) {
    const ValidationReport val = validate_params(cfg.problem);
    if (!val.ok) {
        std::string why = "invalid parameters:";
        for (const auto& c : val.checks)
            if (!c.pass)
                why += " [" + c.name + "]";
        throw ConfigError(why);
    }
    if (!cfg.regime.symmetric && cfg.regime.u0 == "uniform")
        throw ConfigError("uniform initial data requires the symmetric regime");

    RunArtifacts art;
    art.cfg = cfg;
    art.params = cfg.problem;
    art.exps = compute_exponents(cfg.problem);
    art.regime = make_regime(cfg);
    art.mesh = make_mesh(cfg.mesh, cfg.problem.T);
    art.beta_eff = effective_beta(cfg.problem, art.regime.kappa);
    art.in_theorem_window = art.beta_eff > 0.0 && art.beta_eff < art.exps.beta0;

    const double s_min = cfg.energy.s_min_factor * art.mesh.hx;
    std::vector<double> extra{cfg.energy.s_tilde};
    auto s_grid = make_s_grid(s_min, cfg.energy.s_max, cfg.energy.s_points_per_decade, extra);

    EnergyAccumulator acc(s_grid, art.params.p, art.params.q);
    const double s_probe = cfg.energy.s_probe;
    const BoundaryRegime regime = art.regime;

    SolveOptions sopt;
    sopt.newton.tol = cfg.solver.newton_tol;
    sopt.newton.max_iter = cfg.solver.newton_max_iter;
    sopt.newton.dt_min_rel = cfg.solver.dt_min_rel;
    sopt.eps = cfg.solver.eps_mode == "fixed" ? cfg.solver.eps_value : -1.0;
    sopt.store_every = 0;
    sopt.bc_left = [regime](double t) { return dirichlet_trace(regime, t); };
    sopt.bc_right = regime.symmetric
                        ? sopt.bc_left
                        : BoundaryFn([](double) { return 0.0; });
    const double f_init = dirichlet_trace(regime, 0.0);
    if (cfg.regime.u0 == "uniform")
        sopt.u0 = [f_init](double) { return f_init; };
    else
        sopt.u0 = [regime, f_init](double x) { return f_init * cutoff_value(regime, x); };

    const Mesh& mesh = art.mesh;
    sopt.observer = [&](double t, std::span<const double> u, const NewtonStats&) {
        acc.add_level(t, u, mesh.hx);
        double m = 0.0;
        for (size_t i = 0; i < u.size(); ++i) {
            const double x = mesh.x[i];
            if (x >= s_probe && x <= 1.0 - s_probe)
                m = std::max(m, std::abs(u[i]));
        }
        art.interior_max.push_back(m);
        art.trace_values.push_back(std::abs(u[0]));
        art.u_final.assign(u.begin(), u.end());
    };

    if (cfg.output.write_trajectory)
        sopt.store_every = std::max(1, cfg.mesh.num_steps / 256);

    try {
        SolutionTrajectory traj = solve(art.params, art.mesh, sopt);
        art.eps_used = traj.eps_used;
        art.total_newton_iterations = traj.total_newton_iterations;
        art.total_halvings = traj.total_halvings;
        art.stored_times = std::move(traj.stored_times);
        art.stored_levels = std::move(traj.levels);
    } catch (AbortedRun& e) {
        art.aborted = true;
        art.abort_reason = e.what();
        art.eps_used = e.partial_trajectory.eps_used;
        art.total_newton_iterations = e.partial_trajectory.total_newton_iterations;
        art.total_halvings = e.partial_trajectory.total_halvings;
        art.stored_times = std::move(e.partial_trajectory.stored_times);
        art.stored_levels = std::move(e.partial_trajectory.levels);
    }
    art.x_nodes = art.mesh.x;
    art.profile = acc.take();
    art.level_times = art.profile.t;

    art.omega0_eff = effective_amplitude(art.regime, art.params).omega0_eff;
    art.omega0_run = 0.0;
    for (size_t k = 0; k < art.profile.nt(); ++k) {
        const double rem = art.params.T - art.profile.t[k];
        if (rem <= 0.0)
            continue;
        art.omega0_run = std::max(art.omega0_run, (art.profile.E0[k] + art.profile.h0_sup[k]) *
                                                      std::pow(rem, art.exps.alpha));
    }
    // The layer machinery runs with the smallest amplitude the measured
    // global energies certify, so the calibration precondition holds by
    // construction; a hair of slack absorbs interpolation noise.
    art.omega0_gamma = art.omega0_run * (1.0 + 1e-9);

    if (art.omega0_gamma > 0.0 && art.profile.nt() >= 3) {
        ProblemParams pg = art.params;
        pg.omega0 = art.omega0_gamma;
        GammaOptions gopt;
        gopt.root_tol = cfg.tol.root_tol;
        art.seq = gamma_sequence(art.profile, cfg.energy.s_tilde, pg, gopt);
        art.mono = check_qualified_monotonicity(art.seq, art.params.xi, art.profile, pg,
                                                cfg.tol.tol_ratio);
        art.layers = layered_energies(art.profile, art.seq);
        art.weighted = weighted_energy_diagnostic(art.profile, art.seq, pg);
    } else {
        art.seq.alternative = true;
        art.seq.s_tilde = cfg.energy.s_tilde;
        art.mono.vacuous = true;
        art.mono.pass = true;
    }
    return art;
}

namespace {

std::string csv_budget(const RunArtifacts& art) {
    std::ostringstream os;
    os << "t,sup_mass,grad,mass_time,F,omega0_eff\n";
    for (size_t k = 0; k < art.level_times.size(); ++k) {
        const double t = art.level_times[k];
        if (!(t < art.regime.T))
            continue;
        const BudgetTerms b = energy_budget(art.regime, art.params, t);
        os << fmt_double(t) << ',' << fmt_double(b.sup_mass) << ',' << fmt_double(b.grad) << ','
           << fmt_double(b.mass_time) << ',' << fmt_double(b.total) << ','
           << fmt_double(art.omega0_eff) << "\n";
    }
    return os.str();
}

std::string csv_profile(const RunArtifacts& art, int stride) {
    std::ostringstream os;
    os << "s,t,E,hsup\n";
    const auto& p = art.profile;
    for (size_t k = 0; k < p.nt(); k += std::max(stride, 1)) {
        for (size_t i = 0; i < p.ns(); ++i)
            os << fmt_double(p.s[i]) << ',' << fmt_double(p.t[k]) << ','
               << fmt_double(p.E[k * p.ns() + i]) << ',' << fmt_double(p.h_sup[k * p.ns() + i])
               << "\n";
    }
    return os.str();
}

std::string csv_global(const RunArtifacts& art) {
    std::ostringstream os;
    os << "t,E0,h0,h0sup,interior_max,trace\n";
    const auto& p = art.profile;
    for (size_t k = 0; k < p.nt(); ++k)
        os << fmt_double(p.t[k]) << ',' << fmt_double(p.E0[k]) << ',' << fmt_double(p.h0_inst[k])
           << ',' << fmt_double(p.h0_sup[k]) << ',' << fmt_double(art.interior_max[k]) << ','
           << fmt_double(art.trace_values[k]) << "\n";
    return os.str();
}

std::string csv_final_profile(const RunArtifacts& art) {
    std::ostringstream os;
    os << "x,d,u\n";
    for (size_t i = 0; i < art.x_nodes.size(); ++i)
        os << fmt_double(art.x_nodes[i]) << ','
           << fmt_double(std::min(art.x_nodes[i], 1.0 - art.x_nodes[i])) << ','
           << fmt_double(art.u_final[i]) << "\n";
    return os.str();
}

std::string csv_sequence(const RunArtifacts& art) {
    std::ostringstream os;
    os << "j,t_j,delta_j,identity_residual\n";
    for (int j = 1; j <= art.seq.j0(); ++j)
        os << j << ',' << fmt_double(art.seq.t[j]) << ',' << fmt_double(art.seq.delta[j - 1])
           << ',' << fmt_double(art.seq.identity_residual[j - 1]) << "\n";
    return os.str();
}

std::string csv_layered(const RunArtifacts& art) {
    std::ostringstream os;
    os << "j,s,E_j,h_j\n";
    const auto& L = art.layers;
    for (int j = 1; j <= L.j0; ++j)
        for (size_t i = 0; i < L.s.size(); ++i)
            os << j << ',' << fmt_double(L.s[i]) << ',' << fmt_double(L.E[(j - 1) * L.s.size() + i])
               << ',' << fmt_double(L.h[(j - 1) * L.s.size() + i]) << "\n";
    return os.str();
}

std::string csv_trajectory(const RunArtifacts& art) {
    std::ostringstream os;
    os << "t";
    for (size_t i = 0; i < art.x_nodes.size(); ++i)
        os << ",u" << i;
    os << "\n";
    for (size_t k = 0; k < art.stored_times.size(); ++k) {
        os << fmt_double(art.stored_times[k]);
        for (double v : art.stored_levels[k])
            os << ',' << fmt_double(v);
        os << "\n";
    }
    return os.str();
}

void save_checkpoint(const RunArtifacts& art, const std::string& path) {
    FlatWriter w;
    w.scalar("p", art.params.p);
    w.scalar("q", art.params.q);
    w.scalar("n", art.params.n);
    w.scalar("T", art.params.T);
    w.scalar("omega0", art.params.omega0);
    w.scalar("beta", art.params.beta);
    w.scalar("xi", art.params.xi);
    w.scalar("gamma", art.params.gamma);
    w.scalar("alpha1", art.params.alpha1);
    w.scalar("f0", art.regime.f0);
    w.scalar("kappa", art.regime.kappa);
    w.scalar("cutoff_width", art.regime.cutoff_width);
    w.scalar("symmetric", art.regime.symmetric ? 1.0 : 0.0);
    w.scalar("cutoff_cubic", art.regime.cutoff == CutoffKind::Cubic ? 1.0 : 0.0);
    w.scalar("hx", art.mesh.hx);
    w.scalar("eps_used", art.eps_used);
    w.scalar("omega0_eff", art.omega0_eff);
    w.scalar("omega0_run", art.omega0_run);
    w.scalar("s_tilde", art.cfg.energy.s_tilde);
    w.scalar("s_probe", art.cfg.energy.s_probe);
    w.scalar("root_tol", art.cfg.tol.root_tol);
    w.scalar("aborted", art.aborted ? 1.0 : 0.0);
    w.array("s", art.profile.s);
    w.array("t", art.profile.t);
    w.array("E", art.profile.E);
    w.array("h_inst", art.profile.h_inst);
    w.array("h_sup", art.profile.h_sup);
    w.array("E0", art.profile.E0);
    w.array("h0_inst", art.profile.h0_inst);
    w.array("h0_sup", art.profile.h0_sup);
    w.array("x", art.x_nodes);
    w.array("u_final", art.u_final);
    w.array("interior_max", art.interior_max);
    w.array("trace", art.trace_values);
    w.save(path);
}

} // namespace

std::vector<std::string> write_artifacts(const RunArtifacts& art, const std::string& dir,
                                         std::uint64_t seed) {
    std::filesystem::create_directories(dir);
    std::vector<std::string> files;
    auto emit = [&](const std::string& name, const std::string& content) {
        write_text_file(dir + "/" + name, content);
        files.push_back(name);
    };
    emit("config.echo.cfg", serialize_config(art.cfg));
    emit("exponents.txt", exponent_table(art.params));
    emit("budget.csv", csv_budget(art));
    emit("profile.csv", csv_profile(art, art.cfg.output.csv_time_stride));
    emit("profile_global.csv", csv_global(art));
    emit("final_profile.csv", csv_final_profile(art));
    emit("sequence.csv", csv_sequence(art));
    emit("layered.csv", csv_layered(art));
    if (art.cfg.output.write_trajectory) {
        if (art.cfg.output.trajectory_format == "bin") {
            FlatWriter w;
            w.array("t", art.stored_times);
            w.array("x", art.x_nodes);
            for (size_t k = 0; k < art.stored_levels.size(); ++k)
                w.array("u" + std::to_string(k), art.stored_levels[k]);
            w.save(dir + "/trajectory.flat");
            files.push_back("trajectory.flat");
        } else {
            emit("trajectory.csv", csv_trajectory(art));
        }
    }

    save_checkpoint(art, dir + "/run_state.flat");
    files.push_back("run_state.flat");

    std::ostringstream note;
    note << "scenario=" << art.cfg.scenario_id << " seed=" << seed;
    write_manifest(dir, files, note.str());
    return files;
}

RunArtifacts load_artifacts(const std::string& dir) {
    const FlatReader r(dir + "/run_state.flat");
    RunArtifacts art;
    art.cfg = load_config(dir + "/config.echo.cfg");
    art.params = art.cfg.problem;
    art.exps = compute_exponents(art.params);
    art.regime = make_regime(art.cfg);
    art.eps_used = r.scalar("eps_used");
    art.omega0_eff = r.scalar("omega0_eff");
    art.omega0_run = r.scalar("omega0_run");
    art.aborted = r.scalar("aborted") != 0.0;
    art.beta_eff = effective_beta(art.params, art.regime.kappa);
    art.in_theorem_window = art.beta_eff > 0.0 && art.beta_eff < art.exps.beta0;

    art.profile.s = r.array("s");
    art.profile.t = r.array("t");
    art.profile.E = r.array("E");
    art.profile.h_inst = r.array("h_inst");
    art.profile.h_sup = r.array("h_sup");
    art.profile.E0 = r.array("E0");
    art.profile.h0_inst = r.array("h0_inst");
    art.profile.h0_sup = r.array("h0_sup");
    art.x_nodes = r.array("x");
    art.u_final = r.array("u_final");
    art.interior_max = r.array("interior_max");
    art.trace_values = r.array("trace");
    art.level_times = art.profile.t;
    art.mesh.hx = r.scalar("hx");
    art.mesh.x = art.x_nodes;
    art.mesh.t = art.profile.t;
    art.mesh.t_stop = art.profile.t.back();

    art.omega0_gamma = art.omega0_run * (1.0 + 1e-9);
    if (art.omega0_gamma > 0.0 && art.profile.nt() >= 3) {
        ProblemParams pg = art.params;
        pg.omega0 = art.omega0_gamma;
        GammaOptions gopt;
        gopt.root_tol = art.cfg.tol.root_tol;
        art.seq = gamma_sequence(art.profile, art.cfg.energy.s_tilde, pg, gopt);
        art.mono = check_qualified_monotonicity(art.seq, art.params.xi, art.profile, pg,
                                                art.cfg.tol.tol_ratio);
        art.layers = layered_energies(art.profile, art.seq);
        art.weighted = weighted_energy_diagnostic(art.profile, art.seq, pg);
    } else {
        art.seq.alternative = true;
        art.mono.vacuous = true;
        art.mono.pass = true;
    }
    return art;
}

namespace {

json check_to_json(const CheckResult& c) {
    json j;
    j["name"] = c.name;
    j["applicable"] = c.applicable;
    j["probative"] = c.probative;
    j["pass"] = c.pass;
    j["measured"] = c.measured;
    j["bound"] = c.bound;
    j["ci95"] = c.ci95;
    j["detail"] = c.detail;
    return j;
}

} // namespace

VerificationReport build_verification_report(const RunArtifacts& art) {
    VerificationReport rep;
    rep.scenario = art.cfg.scenario_id;

    VerifyOptions vo;
    vo.tol_slope = art.cfg.tol.tol_slope;
    vo.flat_span = art.cfg.tol.flat_span;
    vo.growth_cap = art.cfg.tol.growth_cap;
    vo.window_ratio = art.cfg.tol.window_ratio;
    vo.hx = art.mesh.hx;
    vo.fit_s_max = art.cfg.energy.s_max;

    rep.checks.push_back(theorem1_check(art.profile, art.exps, vo));
    rep.checks.push_back(corollary_profile_check(art.x_nodes, art.u_final, art.exps, vo));
    rep.checks.push_back(localization_check(art.level_times, art.interior_max, art.trace_values,
                                            art.params.T, vo));

    {
        CheckResult c;
        c.name = "qualified_monotonicity";
        c.measured = art.mono.max_ratio;
        c.bound = art.params.xi;
        if (art.seq.alternative) {
            c.applicable = false;
            c.detail = "below-threshold alternative: no layers generated";
            c.pass = true;
        } else if (art.mono.vacuous) {
            c.pass = art.mono.precondition_ok;
            c.detail = "single layer: vacuously monotone";
        } else {
            c.pass = art.mono.pass;
            std::ostringstream os;
            os << art.seq.j0() << " layers, max ratio " << fmt_double(art.mono.max_ratio)
               << (art.mono.precondition_ok ? "" : "; calibration precondition violated");
            c.detail = os.str();
            c.probative = art.mono.precondition_ok;
        }
        rep.checks.push_back(c);
    }
    {
        CheckResult c;
        c.name = "weighted_layer_bound";
        c.measured = art.weighted.sup_stat;
        c.bound = 0.0;
        if (art.seq.alternative) {
            c.applicable = false;
            c.detail = "below-threshold alternative";
            c.pass = true;
        } else {
            c.pass = art.weighted.xi_choice_valid && std::isfinite(art.weighted.sup_stat);
            std::ostringstream os;
            os << "sup_j U_j(s~) delta_j^(alpha-alpha1)/omega0 = " << fmt_double(art.weighted.sup_stat)
               << ", theta1 = " << fmt_double(art.weighted.theta1) << ", theta2 = "
               << fmt_double(art.weighted.theta2);
            c.detail = os.str();
            c.probative = art.weighted.xi_choice_valid;
        }
        rep.checks.push_back(c);
    }

    rep.overall_pass = true;
    for (const auto& c : rep.checks)
        if (c.applicable && c.probative && !c.pass)
            rep.overall_pass = false;

    json j;
    j["scenario"] = rep.scenario;
    j["overall_pass"] = rep.overall_pass;
    j["aborted"] = art.aborted;
    json prov;
    prov["nx"] = static_cast<int>(art.x_nodes.size()) - 2;
    prov["levels"] = art.profile.nt();
    prov["hx"] = art.mesh.hx;
    prov["eps"] = art.eps_used;
    prov["t_final"] = art.profile.t.empty() ? 0.0 : art.profile.t.back();
    json tols;
    tols["tol_slope"] = art.cfg.tol.tol_slope;
    tols["growth_cap"] = art.cfg.tol.growth_cap;
    tols["window_ratio"] = art.cfg.tol.window_ratio;
    tols["tol_ratio"] = art.cfg.tol.tol_ratio;
    tols["root_tol"] = art.cfg.tol.root_tol;
    tols["flat_span"] = art.cfg.tol.flat_span;
    prov["tolerances"] = tols;
    j["provenance"] = prov;
    json exps;
    exps["alpha"] = art.exps.alpha;
    exps["beta0"] = art.exps.beta0;
    exps["nu"] = art.exps.nu;
    exps["mu"] = art.exps.mu;
    exps["theta"] = art.exps.theta;
    exps["nu1"] = art.exps.nu1;
    exps["mu1"] = art.exps.mu1;
    exps["nu2"] = art.exps.nu2;
    exps["mu2"] = art.exps.mu2;
    exps["corollary_applicable"] = art.exps.corollary_applicable;
    j["exponents"] = exps;
    json amp;
    amp["omega0_eff"] = art.omega0_eff;
    amp["omega0_run"] = art.omega0_run;
    amp["omega0_gamma"] = art.omega0_gamma;
    j["amplitudes"] = amp;
    json reg;
    reg["kappa"] = art.regime.kappa;
    reg["f0"] = art.regime.f0;
    reg["beta_effective"] = art.beta_eff;
    reg["in_theorem_window"] = art.in_theorem_window;
    reg["note"] = "power trace is one admissible realization of the regime window";
    j["regime"] = reg;
    json seq;
    seq["alternative"] = art.seq.alternative;
    seq["j0"] = art.seq.j0();
    seq["t_prime"] = art.seq.t_prime;
    seq["omega0_used"] = art.seq.omega0;
    seq["threshold"] = art.seq.threshold;
    seq["tie_broken"] = art.seq.tie_broken;
    if (!art.seq.delta.empty()) {
        seq["delta"] = art.seq.delta;
        seq["identity_residual_max"] =
            *std::max_element(art.seq.identity_residual.begin(), art.seq.identity_residual.end());
    }
    j["layer_sequence"] = seq;
    json checks = json::array();
    for (const auto& c : rep.checks)
        checks.push_back(check_to_json(c));
    j["checks"] = checks;
    rep.json = j.dump(2) + "\n";
    return rep;
}

LemmaSuiteResult run_lemma_suite(const RunConfig::LemmasCfg& cfg, double drift_tol,
                                 std::uint64_t seed) {
    LemmaSuiteResult out;
    json j;

    // Explicit-constant fixture.
    const StampacchiaBound b = stampacchia_bound(1.0, 1.0, 0.5);
    const bool bound_exact = std::abs(b.coefficient - 256.0) < 1e-9 && std::abs(b.exponent - 2.0) < 1e-12;
    json stamp;
    stamp["bound_coefficient"] = b.coefficient;
    stamp["bound_exponent"] = b.exponent;

    auto make_table = [](double expo) {
        StampacchiaInput in;
        in.a = 1.0;
        in.rho = 1.0;
        in.lambda = 0.5;
        const int per_decade = 48;
        const double lo = 1e-4, hi = 0.9;
        const int count = static_cast<int>(std::ceil(std::log10(hi / lo) * per_decade));
        for (int i = 0; i <= count; ++i) {
            const double s = lo * std::pow(10.0, std::log10(hi / lo) * i / count);
            in.s.push_back(s);
            in.f.push_back(std::pow(s, expo));
        }
        return in;
    };
    const StampacchiaReport ok_rep = stampacchia_check(make_table(-2.0));
    const StampacchiaReport bad_rep = stampacchia_check(make_table(-3.0));
    stamp["s^-2"] = {{"premise_holds", ok_rep.premise_holds}, {"bound_holds", ok_rep.bound_holds}};
    stamp["s^-3"] = {{"premise_holds", bad_rep.premise_holds},
                     {"bound_holds", bad_rep.bound_holds},
                     {"violation_s", bad_rep.premise_violation_s},
                     {"expected_premise_failure", true}};
    out.fixtures_pass = bound_exact && ok_rep.premise_holds && ok_rep.bound_holds &&
                        !bad_rep.premise_holds;
    stamp["pass"] = out.fixtures_pass;
    j["stampacchia"] = stamp;

    Lemma926SweepConfig sc;
    sc.base.c1 = cfg.c1;
    sc.base.c2 = cfg.c2;
    sc.base.c3 = cfg.c3;
    sc.base.delta = cfg.delta;
    sc.base.gamma1 = cfg.gamma1;
    sc.base.gamma2 = cfg.gamma2;
    sc.base.lambda = cfg.lambda;
    sc.j0_list = cfg.j0_list;
    sc.num_sequences = cfg.num_sequences;
    sc.eps_start = cfg.eps_start;
    sc.eps_end = cfg.eps_end;
    sc.s0 = cfg.s0;
    sc.s_min = cfg.s_min;
    sc.s_points_per_decade = cfg.s_points_per_decade;
    sc.drift_tol = drift_tol;
    sc.seed = seed;
    const Lemma926SweepResult sweep = lemma926_sweep(sc);
    out.sweep_pass = sweep.pass;

    json sw;
    sw["sigma"] = sweep.sigma;
    sw["worst_slope"] = sweep.worst_slope;
    sw["b1_drift"] = sweep.b1_drift;
    sw["b2_drift"] = sweep.b2_drift;
    sw["drift_tol"] = drift_tol;
    sw["runs"] = json::array();
    for (const auto& r : sweep.runs) {
        json rr;
        rr["B1"] = r.B1;
        rr["B2"] = r.B2;
        rr["fitted_slope"] = r.fitted_slope;
        rr["fit_points"] = r.fit_points;
        sw["runs"].push_back(rr);
    }
    sw["pass"] = sweep.pass;
    sw["seed"] = seed;
    sw["empty"] = cfg.j0_list.empty();
    j["iteration_lemma"] = sw;
    j["overall_pass"] = out.fixtures_pass && out.sweep_pass;
    out.json = j.dump(2) + "\n";
    return out;
}

std::string exponent_table(const ProblemParams& pr) {
    const ExponentSet e = compute_exponents(pr);
    const ValidationReport v = validate_params(pr);
    std::ostringstream os;
    os << "p = " << fmt_double(pr.p) << "\n";
    os << "q = " << fmt_double(pr.q) << "\n";
    os << "n = " << pr.n << "\n";
    os << "T = " << fmt_double(pr.T) << "\n";
    os << "omega0 = " << fmt_double(pr.omega0) << "\n";
    os << "beta = " << fmt_double(pr.beta) << "\n";
    os << "xi = " << fmt_double(pr.xi) << "\n";
    os << "gamma = " << fmt_double(pr.gamma) << "\n";
    os << "alpha1 = " << fmt_double(pr.alpha1) << "\n";
    os << "alpha = " << fmt_double(e.alpha) << "\n";
    os << "beta0 = " << fmt_double(e.beta0) << "\n";
    os << "nu = " << fmt_double(e.nu) << "\n";
    os << "mu = " << fmt_double(e.mu) << "\n";
    os << "theta = " << fmt_double(e.theta) << "\n";
    os << "nu1 = " << fmt_double(e.nu1) << "\n";
    os << "mu1 = " << fmt_double(e.mu1) << "\n";
    os << "nu2 = " << fmt_double(e.nu2) << "\n";
    os << "mu2 = " << fmt_double(e.mu2) << "\n";
    os << "corollary_applicable = " << (e.corollary_applicable ? "true" : "false") << "\n";
    os << "beta_in_range = " << (e.beta_in_range ? "true" : "false") << "\n";
    if (!e.beta_in_range)
        os << "warning = beta outside (0, beta0); estimates do not apply\n";
    os << "params_valid = " << (v.ok ? "true" : "false") << "\n";
    os << "theta1 = " << fmt_double(v.theta1) << "\n";
    os << "theta2 = " << fmt_double(v.theta2) << "\n";
    os << "xi_max = " << fmt_double(v.xi_max) << "\n";
    os << "binding_xi_constraint = " << v.binding_xi_constraint << "\n";
    return os.str();
}

} // namespace blowlab
