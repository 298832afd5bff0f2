// Batch front end: binds scenario configs to the simulation and verification
// pipelines and emits every report to the scenario's output directory.
//
//   blowlab exponents --config scenario.cfg
//   blowlab run       --config scenario.cfg [--out DIR]
//   blowlab verify    --config scenario.cfg
//   blowlab lemmas    --config scenario.cfg [--seed N]
//   blowlab all       --config a.cfg --config b.cfg [--workers N]

#include "blowlab/config.hpp"
#include "blowlab/io.hpp"
#include "blowlab/pipeline.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <thread>

namespace {

using namespace blowlab;

constexpr int kExitOk = 0;
constexpr int kExitBadConfig = 1;
constexpr int kExitInvalidParams = 2;
constexpr int kExitCheckFailed = 3;
constexpr int kExitRunAborted = 4;

std::mutex g_print_mutex;

void say(const std::string& line) {
    std::lock_guard<std::mutex> lk(g_print_mutex);
    std::cout << line << "\n";
}

std::string out_dir(const RunConfig& cfg, const std::string& out_override) {
    if (out_override.empty())
        return cfg.output.dir;
    return out_override + "/" + cfg.scenario_id;
}

int cmd_exponents(const RunConfig& cfg, const std::string& out_override) {
    const std::string dir = out_dir(cfg, out_override);
    std::filesystem::create_directories(dir);
    // Hard rejections (p <= q etc.) exit 2; an out-of-window beta is only a
    // warning inside the table, so the exponent surface stays plottable.
    std::string table;
    try {
        table = exponent_table(cfg.problem);
    } catch (const std::invalid_argument& e) {
        say("[" + cfg.scenario_id + "] invalid parameters: " + e.what());
        return kExitInvalidParams;
    }
    write_text_file(dir + "/exponents.txt", table);
    say("[" + cfg.scenario_id + "] exponents -> " + dir + "/exponents.txt");
    const ValidationReport val = validate_params(cfg.problem);
    if (!val.ok)
        for (const auto& c : val.checks)
            if (!c.pass)
                say("[" + cfg.scenario_id + "] warning: " + c.name + " (" + c.condition + ")");
    return kExitOk;
}

int cmd_run(const RunConfig& cfg, const std::string& out_override, std::uint64_t seed) {
    const std::string dir = out_dir(cfg, out_override);
    RunArtifacts art = run_scenario(cfg);
    write_artifacts(art, dir, seed);
    say("[" + cfg.scenario_id + "] run -> " + dir + (art.aborted ? " (ABORTED: " + art.abort_reason + ")" : ""));
    return art.aborted ? kExitRunAborted : kExitOk;
}

int cmd_verify(const RunConfig& cfg, const std::string& out_override) {
    const std::string dir = out_dir(cfg, out_override);
    RunArtifacts art = load_artifacts(dir);
    const VerificationReport rep = build_verification_report(art);
    write_text_file(dir + "/verification_report.json", rep.json);

    // Fit inputs for external plotting.
    {
        std::string csv = "s,E_plus_hsup\n";
        const double tf = art.profile.t.back();
        for (double s : art.profile.s)
            csv += fmt_double(s) + "," +
                   fmt_double(art.profile.energy_at(tf, s) + art.profile.hsup_at(tf, s)) + "\n";
        write_text_file(dir + "/fit_energy_vs_s.csv", csv);
        std::string csv2 = "d,abs_u\n";
        for (size_t i = 0; i < art.x_nodes.size(); ++i)
            csv2 += fmt_double(std::min(art.x_nodes[i], 1.0 - art.x_nodes[i])) + "," +
                    fmt_double(std::abs(art.u_final[i])) + "\n";
        write_text_file(dir + "/fit_profile_vs_d.csv", csv2);
    }

    bool any_fail = false;
    for (const auto& c : rep.checks) {
        std::string status = c.pass ? "PASS" : "FAIL";
        if (!c.applicable)
            status = "SKIP";
        else if (!c.probative)
            status = "NONPROBATIVE";
        if (c.applicable && c.probative && !c.pass)
            any_fail = true;
        say("[" + cfg.scenario_id + "] " + status + " " + c.name +
            (c.detail.empty() ? "" : " (" + c.detail + ")"));
    }
    say("[" + cfg.scenario_id + "] verify -> " + dir + "/verification_report.json");
    return any_fail ? kExitCheckFailed : kExitOk;
}

int cmd_lemmas(const RunConfig& cfg, const std::string& out_override, std::uint64_t seed) {
    const std::string dir = out_dir(cfg, out_override);
    std::filesystem::create_directories(dir);
    const LemmaSuiteResult res = run_lemma_suite(cfg.lemmas, cfg.tol.drift_tol, seed);
    write_text_file(dir + "/lemma_report.json", res.json);
    say("[" + cfg.scenario_id + "] lemmas (fixtures " + (res.fixtures_pass ? "pass" : "FAIL") +
        ", sweep " + (res.sweep_pass ? "pass" : "FAIL") + ") -> " + dir + "/lemma_report.json");
    return kExitOk;
}

int run_one(const std::string& mode, const RunConfig& cfg, const std::string& out_override,
            std::uint64_t seed) {
    if (mode == "exponents")
        return cmd_exponents(cfg, out_override);
    if (mode == "run")
        return cmd_run(cfg, out_override, seed);
    if (mode == "verify")
        return cmd_verify(cfg, out_override);
    if (mode == "lemmas")
        return cmd_lemmas(cfg, out_override, seed);
    // all
    int rc = cmd_exponents(cfg, out_override);
    if (rc != kExitOk)
        return rc;
    rc = cmd_run(cfg, out_override, seed);
    if (rc != kExitOk)
        return rc;
    rc = cmd_verify(cfg, out_override);
    const int rl = cmd_lemmas(cfg, out_override, seed);
    return rc != kExitOk ? rc : rl;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for localized boundary blow-up in doubly degenerate diffusion"};
    app.require_subcommand(1);

    std::vector<std::string> config_paths;
    std::string out_override;
    int workers = 1;
    std::uint64_t seed = 1;

    const std::vector<std::string> modes = {"exponents", "run", "verify", "lemmas", "all"};
    std::vector<CLI::App*> subs;
    for (const auto& m : modes) {
        CLI::App* sub = app.add_subcommand(m);
        sub->add_option("--config", config_paths, "scenario config file(s)")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--out", out_override, "override output root (scenario id appended)");
        sub->add_option("--workers", workers, "bounded worker pool for multiple scenarios");
        sub->add_option("--seed", seed, "seed for the randomized lemma sweeps");
        subs.push_back(sub);
    }

    CLI11_PARSE(app, argc, argv);
    std::string mode;
    for (size_t i = 0; i < modes.size(); ++i)
        if (subs[i]->parsed())
            mode = modes[i];

    std::vector<RunConfig> cfgs;
    for (const auto& path : config_paths) {
        try {
            cfgs.push_back(load_config(path));
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitBadConfig;
        }
    }

    std::atomic<int> worst{kExitOk};
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= cfgs.size())
                return;
            int rc;
            try {
                rc = run_one(mode, cfgs[i], out_override, seed);
            } catch (const ConfigError& e) {
                say(std::string("error: ") + e.what());
                rc = kExitInvalidParams;
            } catch (const std::exception& e) {
                say(std::string("error: ") + e.what());
                rc = kExitBadConfig;
            }
            int cur = worst.load();
            while (rc > cur && !worst.compare_exchange_weak(cur, rc)) {
            }
        }
    };

    const int nthreads = std::max(1, std::min<int>(workers, static_cast<int>(cfgs.size())));
    std::vector<std::thread> pool;
    for (int i = 0; i < nthreads; ++i)
        pool.emplace_back(worker);
    for (auto& th : pool)
        th.join();
    return worst.load();
}
