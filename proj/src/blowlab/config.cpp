#include "blowlab/config.hpp"
#include "blowlab/io.hpp"

#include <fstream>
#include <sstream>

namespace blowlab {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos)
        return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument("");
        return d;
    } catch (...) {
        throw ConfigError("config: bad number for '" + key + "': " + v);
    }
}

int to_int(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const int d = std::stoi(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument("");
        return d;
    } catch (...) {
        throw ConfigError("config: bad integer for '" + key + "': " + v);
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true")
        return true;
    if (v == "false")
        return false;
    throw ConfigError("config: bad boolean for '" + key + "' (use true/false): " + v);
}

std::vector<int> to_int_list(const std::string& key, const std::string& v) {
    std::vector<int> out;
    std::string item;
    std::istringstream is(v);
    while (std::getline(is, item, ',')) {
        item = trim(item);
        if (!item.empty())
            out.push_back(to_int(key, item));
    }
    return out;
}

} // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::string section;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config: malformed section header at line " + std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: expected key = value at line " + std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        const std::string qual = section + "." + key;

        if (section == "scenario") {
            if (key == "id")
                cfg.scenario_id = val;
            else
                throw ConfigError("config: unknown key " + qual);
        } else if (section == "problem") {
            auto& p = cfg.problem;
            if (key == "p") p.p = to_double(qual, val);
            else if (key == "q") p.q = to_double(qual, val);
            else if (key == "n") p.n = to_int(qual, val);
            else if (key == "T") p.T = to_double(qual, val);
            else if (key == "omega0") p.omega0 = to_double(qual, val);
            else if (key == "beta") p.beta = to_double(qual, val);
            else if (key == "xi") p.xi = to_double(qual, val);
            else if (key == "gamma") p.gamma = to_double(qual, val);
            else if (key == "alpha1") p.alpha1 = to_double(qual, val);
            else throw ConfigError("config: unknown key " + qual);
        } else if (section == "regime") {
            auto& r = cfg.regime;
            if (key == "f0") r.f0 = to_double(qual, val);
            else if (key == "kappa") {
                if (val == "auto") {
                    r.kappa_auto = true;
                } else {
                    r.kappa_auto = false;
                    r.kappa = to_double(qual, val);
                }
            }
            else if (key == "eps_cal") r.eps_cal = to_double(qual, val);
            else if (key == "cutoff_width") r.cutoff_width = to_double(qual, val);
            else if (key == "symmetric") r.symmetric = to_bool(qual, val);
            else if (key == "cutoff") {
                if (val != "linear" && val != "cubic")
                    throw ConfigError("config: regime.cutoff must be linear or cubic");
                r.cutoff = val;
            }
            else if (key == "u0") {
                if (val != "cutoff" && val != "uniform")
                    throw ConfigError("config: regime.u0 must be cutoff or uniform");
                r.u0 = val;
            }
            else throw ConfigError("config: unknown key " + qual);
        } else if (section == "mesh") {
            auto& m = cfg.mesh;
            if (key == "nx") m.nx = to_int(qual, val);
            else if (key == "num_steps") m.num_steps = to_int(qual, val);
            else if (key == "lambda_mesh") m.lambda_mesh = to_double(qual, val);
            else if (key == "delta_stop_rel") m.delta_stop_rel = to_double(qual, val);
            else throw ConfigError("config: unknown key " + qual);
        } else if (section == "solver") {
            auto& s = cfg.solver;
            if (key == "eps_mode") {
                if (val != "hx" && val != "fixed")
                    throw ConfigError("config: solver.eps_mode must be hx or fixed");
                s.eps_mode = val;
            }
            else if (key == "eps_value") s.eps_value = to_double(qual, val);
            else if (key == "newton_tol") s.newton_tol = to_double(qual, val);
            else if (key == "newton_max_iter") s.newton_max_iter = to_int(qual, val);
            else if (key == "dt_min_rel") s.dt_min_rel = to_double(qual, val);
            else throw ConfigError("config: unknown key " + qual);
        } else if (section == "energy") {
            auto& e = cfg.energy;
            if (key == "s_tilde") e.s_tilde = to_double(qual, val);
            else if (key == "s_points_per_decade") e.s_points_per_decade = to_int(qual, val);
            else if (key == "s_min_factor") e.s_min_factor = to_double(qual, val);
            else if (key == "s_max") e.s_max = to_double(qual, val);
            else if (key == "s_probe") e.s_probe = to_double(qual, val);
            else throw ConfigError("config: unknown key " + qual);
        } else if (section == "tolerances") {
            auto& t = cfg.tol;
            if (key == "tol_slope") t.tol_slope = to_double(qual, val);
            else if (key == "growth_cap") t.growth_cap = to_double(qual, val);
            else if (key == "window_ratio") t.window_ratio = to_double(qual, val);
            else if (key == "tol_ratio") t.tol_ratio = to_double(qual, val);
            else if (key == "root_tol") t.root_tol = to_double(qual, val);
            else if (key == "drift_tol") t.drift_tol = to_double(qual, val);
            else if (key == "flat_span") t.flat_span = to_double(qual, val);
            else throw ConfigError("config: unknown key " + qual);
        } else if (section == "output") {
            auto& o = cfg.output;
            if (key == "dir") o.dir = val;
            else if (key == "write_trajectory") o.write_trajectory = to_bool(qual, val);
            else if (key == "trajectory_format") {
                if (val != "csv" && val != "bin")
                    throw ConfigError("config: output.trajectory_format must be csv or bin");
                o.trajectory_format = val;
            }
            else if (key == "csv_time_stride") o.csv_time_stride = to_int(qual, val);
            else throw ConfigError("config: unknown key " + qual);
        } else if (section == "lemmas") {
            auto& l = cfg.lemmas;
            if (key == "c1") l.c1 = to_double(qual, val);
            else if (key == "c2") l.c2 = to_double(qual, val);
            else if (key == "c3") l.c3 = to_double(qual, val);
            else if (key == "delta") l.delta = to_double(qual, val);
            else if (key == "gamma1") l.gamma1 = to_double(qual, val);
            else if (key == "gamma2") l.gamma2 = to_double(qual, val);
            else if (key == "lambda") l.lambda = to_double(qual, val);
            else if (key == "j0_list") l.j0_list = to_int_list(qual, val);
            else if (key == "num_sequences") l.num_sequences = to_int(qual, val);
            else if (key == "eps_start") l.eps_start = to_double(qual, val);
            else if (key == "eps_end") l.eps_end = to_double(qual, val);
            else if (key == "s0") l.s0 = to_double(qual, val);
            else if (key == "s_min") l.s_min = to_double(qual, val);
            else if (key == "s_points_per_decade") l.s_points_per_decade = to_int(qual, val);
            else throw ConfigError("config: unknown key " + qual);
        } else {
            throw ConfigError("config: unknown section [" + section + "] at line " + std::to_string(lineno));
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream os;
    auto d = [](double v) { return fmt_double(v); };
    os << "[scenario]\n";
    os << "id = " << cfg.scenario_id << "\n\n";

    const auto& p = cfg.problem;
    os << "[problem]\n";
    os << "p = " << d(p.p) << "\n";
    os << "q = " << d(p.q) << "\n";
    os << "n = " << p.n << "\n";
    os << "T = " << d(p.T) << "\n";
    os << "omega0 = " << d(p.omega0) << "\n";
    os << "beta = " << d(p.beta) << "\n";
    os << "xi = " << d(p.xi) << "\n";
    os << "gamma = " << d(p.gamma) << "\n";
    os << "alpha1 = " << d(p.alpha1) << "\n\n";

    const auto& r = cfg.regime;
    os << "[regime]\n";
    os << "f0 = " << d(r.f0) << "\n";
    if (r.kappa_auto)
        os << "kappa = auto\n";
    else
        os << "kappa = " << d(r.kappa) << "\n";
    os << "eps_cal = " << d(r.eps_cal) << "\n";
    os << "cutoff_width = " << d(r.cutoff_width) << "\n";
    os << "symmetric = " << (r.symmetric ? "true" : "false") << "\n";
    os << "cutoff = " << r.cutoff << "\n";
    os << "u0 = " << r.u0 << "\n\n";

    const auto& m = cfg.mesh;
    os << "[mesh]\n";
    os << "nx = " << m.nx << "\n";
    os << "num_steps = " << m.num_steps << "\n";
    os << "lambda_mesh = " << d(m.lambda_mesh) << "\n";
    os << "delta_stop_rel = " << d(m.delta_stop_rel) << "\n\n";

    const auto& s = cfg.solver;
    os << "[solver]\n";
    os << "eps_mode = " << s.eps_mode << "\n";
    os << "eps_value = " << d(s.eps_value) << "\n";
    os << "newton_tol = " << d(s.newton_tol) << "\n";
    os << "newton_max_iter = " << s.newton_max_iter << "\n";
    os << "dt_min_rel = " << d(s.dt_min_rel) << "\n\n";

    const auto& e = cfg.energy;
    os << "[energy]\n";
    os << "s_tilde = " << d(e.s_tilde) << "\n";
    os << "s_points_per_decade = " << e.s_points_per_decade << "\n";
    os << "s_min_factor = " << d(e.s_min_factor) << "\n";
    os << "s_max = " << d(e.s_max) << "\n";
    os << "s_probe = " << d(e.s_probe) << "\n\n";

    const auto& t = cfg.tol;
    os << "[tolerances]\n";
    os << "tol_slope = " << d(t.tol_slope) << "\n";
    os << "growth_cap = " << d(t.growth_cap) << "\n";
    os << "window_ratio = " << d(t.window_ratio) << "\n";
    os << "tol_ratio = " << d(t.tol_ratio) << "\n";
    os << "root_tol = " << d(t.root_tol) << "\n";
    os << "drift_tol = " << d(t.drift_tol) << "\n";
    os << "flat_span = " << d(t.flat_span) << "\n\n";

    const auto& o = cfg.output;
    os << "[output]\n";
    os << "dir = " << o.dir << "\n";
    os << "write_trajectory = " << (o.write_trajectory ? "true" : "false") << "\n";
    os << "trajectory_format = " << o.trajectory_format << "\n";
    os << "csv_time_stride = " << o.csv_time_stride << "\n\n";

    const auto& l = cfg.lemmas;
    os << "[lemmas]\n";
    os << "c1 = " << d(l.c1) << "\n";
    os << "c2 = " << d(l.c2) << "\n";
    os << "c3 = " << d(l.c3) << "\n";
    os << "delta = " << d(l.delta) << "\n";
    os << "gamma1 = " << d(l.gamma1) << "\n";
    os << "gamma2 = " << d(l.gamma2) << "\n";
    os << "lambda = " << d(l.lambda) << "\n";
    os << "j0_list = ";
    for (size_t i = 0; i < l.j0_list.size(); ++i)
        os << (i ? "," : "") << l.j0_list[i];
    os << "\n";
    os << "num_sequences = " << l.num_sequences << "\n";
    os << "eps_start = " << d(l.eps_start) << "\n";
    os << "eps_end = " << d(l.eps_end) << "\n";
    os << "s0 = " << d(l.s0) << "\n";
    os << "s_min = " << d(l.s_min) << "\n";
    os << "s_points_per_decade = " << l.s_points_per_decade << "\n";
    return os.str();
}

} // namespace blowlab
