#include "app.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <map>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "consensus/circulant.hpp"
#include "consensus/graph.hpp"
#include "consensus/io.hpp"
#include "consensus/netgen.hpp"
#include "consensus/parallel.hpp"
#include "consensus/spectral.hpp"
#include "consensus/structopt.hpp"
#include "consensus/system.hpp"
#include "consensus/timesim.hpp"
#include "consensus/weightopt.hpp"

namespace consensus::cli {

namespace {

using nlohmann::json;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string command;
    std::map<std::string, std::string> values;   // resolved key -> value
    std::set<std::string> explicit_keys;         // set via file or flag

    bool has(const std::string& key) const { return explicit_keys.count(key) > 0; }

    const std::string& str(const std::string& key) const {
        const auto it = values.find(key);
        if (it == values.end() || it->second.empty())
            throw ConfigError("missing required option '" + key + "' for command '" + command + "'");
        return it->second;
    }

    double number(const std::string& key) const {
        const std::string& v = str(key);
        std::size_t used = 0;
        double out = 0.0;
        try {
            out = std::stod(v, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != v.size()) throw ConfigError("option '" + key + "': '" + v + "' is not a number");
        return out;
    }

    int integer(const std::string& key) const {
        const double v = number(key);
        if (v != std::floor(v) || std::abs(v) > 1e9)
            throw ConfigError("option '" + key + "': expected an integer");
        return static_cast<int>(v);
    }

    std::uint64_t seed(const std::string& key) const {
        const std::string& v = str(key);
        try {
            std::size_t used = 0;
            const std::uint64_t out = std::stoull(v, &used);
            if (used == v.size()) return out;
        } catch (const std::exception&) {
        }
        throw ConfigError("option '" + key + "': '" + v + "' is not a valid seed");
    }

    bool flag(const std::string& key) const {
        const std::string& v = str(key);
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        throw ConfigError("option '" + key + "': expected true/false");
    }
};

struct KeySpec {
    const char* key;
    const char* fallback;  // nullptr marks required-if-used keys with no default
};

const std::map<std::string, std::vector<KeySpec>>& command_keys() {
    static const std::map<std::string, std::vector<KeySpec>> keys = {
        {"generate",
         {{"model", "ring"}, {"n", nullptr}, {"k", nullptr}, {"leader", "0"}, {"seed", "0"},
          {"output", nullptr}, {"threads", nullptr}}},
        {"spectrum",
         {{"input", nullptr}, {"model", "ring"}, {"n", nullptr}, {"k", nullptr}, {"leader", "0"},
          {"seed", "0"}, {"omega", nullptr}, {"omega-lo", "1e-4"}, {"omega-hi", "1"},
          {"ppd", "96"}, {"gains", "false"}, {"method", "eigen"}, {"omega0", "1"},
          {"output", nullptr}, {"threads", nullptr}}},
        {"kstar",
         {{"model", "ring"}, {"n", nullptr}, {"leader", "0"}, {"seed", "0"},
          {"omega-lo", "1e-4"}, {"omega-hi", "1"}, {"ppd", "24"}, {"samples", "1"},
          {"omega0", "1"}, {"output", nullptr}, {"threads", nullptr}}},
        {"fit",
         {{"input", nullptr}, {"window-lo", nullptr}, {"window-hi", nullptr},
          {"output", nullptr}}},
        {"optimize-weights",
         {{"n", "512"}, {"omega", nullptr}, {"omega0", "1"}, {"seed", "0"}, {"step", "1e-2"},
          {"max-iters", "4000"}, {"tol", "1e-8"}, {"output", nullptr},
          {"trace-output", nullptr}, {"summary-output", nullptr}, {"threads", nullptr}}},
        {"anneal",
         {{"n", "11"}, {"omega", nullptr}, {"omega0", "1"}, {"t0", "1"}, {"cooling", "0.995"},
          {"steps", "20000"}, {"restarts", "8"}, {"seed", "0"}, {"output", nullptr},
          {"trace-output", nullptr}, {"threads", nullptr}}},
        {"simulate",
         {{"input", nullptr}, {"model", "ring"}, {"n", nullptr}, {"k", nullptr}, {"leader", "0"},
          {"graph-seed", "0"}, {"motion", "rotate"}, {"leader-freq", nullptr},
          {"amplitude", "0.1"}, {"omega0", "0"}, {"target-hz", "0.05"}, {"dt", "0.1"},
          {"jitter", "0.1"}, {"sample-dt", "0"}, {"duration", nullptr}, {"seed", "0"},
          {"output", nullptr}, {"metrics-output", nullptr}, {"threads", nullptr}}},
        {"calibrate",
         {{"n", "11"}, {"target-hz", "0.05"}, {"motion", "oscillate"}, {"seeds", "10"},
          {"cal-seed", "1000"}, {"output", nullptr}, {"threads", nullptr}}},
    };
    return keys;
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file " + path);
    std::map<std::string, std::string> out;
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key=value");
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t");
            const auto b = s.find_last_not_of(" \t");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(path + ":" + std::to_string(line_no) + ": empty key");
        out[key] = value;
    }
    return out;
}

Options resolve_options(const std::vector<std::string>& args) {
    std::string command;
    std::map<std::string, std::string> flag_values;
    std::vector<std::string> flag_order;

    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& tok = args[i];
        if (tok.rfind("--", 0) == 0) {
            std::string key = tok.substr(2);
            std::string value;
            const auto eq = key.find('=');
            if (eq != std::string::npos) {
                value = key.substr(eq + 1);
                key = key.substr(0, eq);
            } else if (i + 1 < args.size() && args[i + 1].rfind("--", 0) != 0) {
                value = args[++i];
            } else {
                value = "true";  // bare boolean flag
            }
            if (key.empty()) throw ConfigError("malformed flag '" + tok + "'");
            flag_values[key] = value;
            flag_order.push_back(key);
        } else if (command.empty()) {
            command = tok;
        } else {
            throw ConfigError("unexpected positional argument '" + tok + "'");
        }
    }

    std::map<std::string, std::string> file_values;
    if (const auto it = flag_values.find("config"); it != flag_values.end()) {
        file_values = parse_config_file(it->second);
        flag_values.erase("config");
        if (const auto cmd = file_values.find("command"); cmd != file_values.end()) {
            if (command.empty()) command = cmd->second;
            file_values.erase("command");
        }
    }
    if (command.empty()) throw ConfigError("no command given (expected one of generate, spectrum, "
                                           "kstar, fit, optimize-weights, anneal, simulate, calibrate)");

    const auto spec_it = command_keys().find(command);
    if (spec_it == command_keys().end()) throw ConfigError("unknown command '" + command + "'");
    const auto& spec = spec_it->second;
    auto known = [&spec](const std::string& key) {
        return std::any_of(spec.begin(), spec.end(),
                           [&key](const KeySpec& k) { return key == k.key; });
    };

    Options opts;
    opts.command = command;
    for (const auto& k : spec)
        if (k.fallback) opts.values[k.key] = k.fallback;
    for (const auto& [key, value] : file_values) {
        if (!known(key)) throw ConfigError("unknown key '" + key + "' for command '" + command + "'");
        opts.values[key] = value;
        opts.explicit_keys.insert(key);
    }
    for (const auto& [key, value] : flag_values) {
        if (!known(key)) throw ConfigError("unknown option '--" + key + "' for command '" + command + "'");
        opts.values[key] = value;  // flags override the file
        opts.explicit_keys.insert(key);
    }
    return opts;
}

// Reproducibility contract: every artifact carries the resolved run config.
std::string config_comment(const Options& opts) {
    std::string out = "# command=" + opts.command + "\n";
    for (const auto& [key, value] : opts.values)
        if (!value.empty()) out += "# " + key + "=" + value + "\n";
    return out;
}

json config_json(const Options& opts) {
    json c;
    c["command"] = opts.command;
    for (const auto& [key, value] : opts.values)
        if (!value.empty()) c[key] = value;
    return c;
}

void apply_thread_cap(const Options& opts) {
    if (opts.has("threads")) {
        const int cap = opts.integer("threads");
        if (cap < 1) throw ConfigError("option 'threads': must be >= 1");
        set_thread_cap(cap);
    }
}

ModelSpec model_spec(const Options& opts) {
    ModelSpec spec;
    spec.kind = model_from_name(opts.str("model"));
    spec.n_total = opts.integer("n");
    spec.leader = opts.integer("leader");
    spec.omega0 = opts.values.count("omega0") && !opts.values.at("omega0").empty()
                      ? opts.number("omega0")
                      : 1.0;
    spec.seed = opts.seed("seed");
    return spec;
}

InteractionGraph input_or_model_graph(const Options& opts, const char* seed_key = "seed") {
    if (opts.has("input")) {
        if (opts.has("model") || opts.has("n") || opts.has("k"))
            throw ConfigError("give either 'input' or a model spec, not both");
        return load_edge_list(opts.str("input"));
    }
    ModelSpec spec;
    spec.kind = model_from_name(opts.str("model"));
    spec.n_total = opts.integer("n");
    spec.leader = opts.integer("leader");
    spec.seed = opts.seed(seed_key);
    return make_model_graph(spec, opts.integer("k"));
}

std::string csv_bool(bool b) { return b ? "1" : "0"; }

int run_generate(const Options& opts) {
    const auto g = input_or_model_graph(opts);
    std::ostringstream body;
    write_edge_list(body, g);
    atomic_write(opts.str("output"), config_comment(opts) + body.str());
    return 0;
}

int run_spectrum(const Options& opts) {
    const auto g = input_or_model_graph(opts);
    const double omega0 = opts.number("omega0");
    const auto sys = build_consensus_system(g, omega0);

    std::vector<double> grid;
    if (opts.has("omega"))
        grid.push_back(opts.number("omega"));
    else
        grid = log_grid(opts.number("omega-lo"), opts.number("omega-hi"), opts.integer("ppd"));

    SpectrumOptions sopts;
    sopts.with_gains = opts.flag("gains");
    const std::string method = opts.str("method");
    if (method == "lu")
        sopts.method = SolveMethod::Lu;
    else if (method == "eigen")
        sopts.method = SolveMethod::Eigendecomposition;
    else
        throw ConfigError("option 'method': expected lu or eigen");

    const auto spectrum = response_spectrum(sys, grid, sopts);

    std::string csv = config_comment(opts) + "omega,h_squared";
    if (sopts.with_gains)
        for (int i = 0; i < sys.n_followers(); ++i)
            csv += ",h_i_re_" + std::to_string(i) + ",h_i_im_" + std::to_string(i);
    csv += "\n";
    for (const auto& pt : spectrum.points) {
        csv += format_double(pt.omega) + "," + format_double(pt.h_squared);
        if (pt.gains)
            for (int i = 0; i < pt.gains->size(); ++i)
                csv += "," + format_double(std::real((*pt.gains)(i))) + "," +
                       format_double(std::imag((*pt.gains)(i)));
        csv += "\n";
    }
    atomic_write(opts.str("output"), csv);
    return 0;
}

int run_kstar(const Options& opts) {
    const auto grid = log_grid(opts.number("omega-lo"), opts.number("omega-hi"), opts.integer("ppd"));
    const auto curve = kstar_curve(model_spec(opts), grid, opts.integer("samples"));

    std::string csv = config_comment(opts) + "omega,k_star,h_squared\n";
    for (const auto& e : curve.entries)
        csv += format_double(e.omega) + "," + std::to_string(e.k_star) + "," +
               format_double(e.h_squared) + "\n";
    atomic_write(opts.str("output"), csv);
    return 0;
}

int run_fit(const Options& opts) {
    std::ifstream is(opts.str("input"));
    if (!is) throw ConfigError("cannot open " + opts.str("input"));
    KStarCurve curve;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("omega", 0) == 0) continue;
        std::istringstream fields(line);
        KStarEntry e;
        char c1 = 0, c2 = 0;
        if (!(fields >> e.omega >> c1 >> e.k_star >> c2 >> e.h_squared) || c1 != ',' || c2 != ',')
            throw std::runtime_error("bad k* curve line '" + line + "'");
        curve.entries.push_back(e);
    }
    const auto fit = fit_power_law(curve, opts.number("window-lo"), opts.number("window-hi"));

    json out;
    out["K0"] = fit.k0;
    out["gamma"] = fit.gamma;
    out["window"] = {fit.window_lo, fit.window_hi};
    out["n_points"] = fit.n_points;
    out["config"] = config_json(opts);
    atomic_write(opts.str("output"), out.dump(2) + "\n");
    return 0;
}

int run_optimize_weights(const Options& opts) {
    OptimizeSchedule schedule;
    schedule.initial_step = opts.number("step");
    schedule.max_iterations = opts.integer("max-iters");
    schedule.grad_tolerance = opts.number("tol");
    const auto [profile, trace] = optimize_weight_profile(
        opts.integer("n"), opts.number("omega"), schedule, opts.seed("seed"), opts.number("omega0"));

    std::string csv = config_comment(opts) + "distance,weight\n";
    for (int d = 0; d < profile.max_distance(); ++d)
        csv += std::to_string(d + 1) + "," + format_double(profile.coeffs[d]) + "\n";
    atomic_write(opts.str("output"), csv);

    if (opts.has("trace-output")) {
        std::string tcsv = config_comment(opts) + "iter,cost,h_squared,constraint_norm\n";
        for (const auto& it : trace.iterations)
            tcsv += std::to_string(it.iteration) + "," + format_double(it.cost) + "," +
                    format_double(it.h_squared) + "," + format_double(it.constraint_norm) + "\n";
        atomic_write(opts.str("trace-output"), tcsv);
    }
    if (opts.has("summary-output")) {
        json out;
        out["k_star"] = effective_degree(profile);
        out["h_squared"] = profile_response(profile);
        out["converged"] = trace.converged;
        out["iterations"] = trace.iterations.empty() ? 0 : trace.iterations.back().iteration;
        out["config"] = config_json(opts);
        atomic_write(opts.str("summary-output"), out.dump(2) + "\n");
    }
    return 0;
}

int run_anneal(const Options& opts) {
    AnnealSchedule schedule;
    schedule.t0 = opts.number("t0");
    schedule.cooling = opts.number("cooling");
    schedule.steps = opts.integer("steps");
    const auto res = anneal_topology(opts.integer("n"), opts.number("omega"), schedule,
                                     opts.seed("seed"), opts.integer("restarts"),
                                     opts.number("omega0"));

    json out;
    out["omega"] = opts.number("omega");
    out["mean_degree"] = res.mean_degree;
    out["objective"] = res.best_objective;
    out["edges"] = json::array();
    for (const auto& [i, j] : res.best_graph.edges()) out["edges"].push_back({i, j});
    out["seed"] = res.seed;
    out["config"] = config_json(opts);
    atomic_write(opts.str("output"), out.dump(2) + "\n");

    if (opts.has("trace-output")) {
        std::string csv = config_comment(opts) + "step,temperature,objective,accepted\n";
        for (const auto& pt : res.trace)
            csv += std::to_string(pt.step) + "," + format_double(pt.temperature) + "," +
                   format_double(pt.objective) + "," + csv_bool(pt.accepted) + "\n";
        atomic_write(opts.str("trace-output"), csv);
    }
    return 0;
}

int run_simulate(const Options& opts) {
    const auto g = input_or_model_graph(opts, "graph-seed");

    LeaderMotion motion;
    const std::string kind = opts.str("motion");
    if (kind == "rotate")
        motion.kind = LeaderMotion::Kind::Rotate;
    else if (kind == "oscillate")
        motion.kind = LeaderMotion::Kind::Oscillate;
    else
        throw ConfigError("option 'motion': expected rotate or oscillate");
    motion.freq_hz = opts.number("leader-freq");
    motion.amplitude = opts.number("amplitude");

    // omega0 = 0 requests calibration matched to the leader motion: the LTI
    // crossing for small-signal oscillation, the simulated ramp-tracking
    // crossing for full rotation.
    double omega0 = opts.number("omega0");
    if (omega0 <= 0.0) {
        if (motion.kind == LeaderMotion::Kind::Rotate)
            omega0 = calibrate_rotation_rate(g.n_nodes(), opts.number("target-hz")).omega0;
        else
            omega0 = calibrate_heading_rate(g.n_nodes(), opts.number("target-hz")).omega0;
    }

    HeadingOptions hopts;
    hopts.update_period = opts.number("dt");
    hopts.jitter = opts.number("jitter");
    hopts.sample_dt = opts.number("sample-dt");
    hopts.seed = opts.seed("seed");
    const auto traj = simulate_heading(g, motion, omega0, opts.number("duration"), hopts);

    // leader column first, then the remaining nodes in ascending order
    std::vector<int> columns{g.leader()};
    for (int v = 0; v < g.n_nodes(); ++v)
        if (v != g.leader()) columns.push_back(v);

    std::string csv = config_comment(opts) + "t";
    for (std::size_t c = 0; c < columns.size(); ++c) csv += ",theta_" + std::to_string(c);
    csv += "\n";
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        csv += format_double(traj.times[s]);
        for (int v : columns) csv += "," + format_double(traj.headings(s, v));
        csv += "\n";
    }
    atomic_write(opts.str("output"), csv);

    if (opts.has("metrics-output")) {
        const auto m = follow_metric(traj);
        json out;
        out["H_i"] = std::vector<double>(m.per_agent.data(), m.per_agent.data() + m.per_agent.size());
        out["H2"] = m.collective;
        out["polarization"] = m.polarization;
        out["leader_freq_hz"] = motion.freq_hz;
        out["k"] = mean_degree(g);
        out["omega0"] = omega0;
        out["config"] = config_json(opts);
        atomic_write(opts.str("metrics-output"), out.dump(2) + "\n");
    }
    return 0;
}

int run_calibrate(const Options& opts) {
    json out;
    const std::string motion = opts.str("motion");
    if (motion == "oscillate") {
        const auto cal = calibrate_heading_rate(opts.integer("n"), opts.number("target-hz"));
        out["omega0"] = cal.omega0;
        out["crossing_omega"] = cal.crossing_omega;
        out["target_hz"] = cal.target_hz;
    } else if (motion == "rotate") {
        const auto cal = calibrate_rotation_rate(opts.integer("n"), opts.number("target-hz"),
                                                 opts.integer("seeds"), opts.seed("cal-seed"));
        out["omega0"] = cal.omega0;
        out["target_hz"] = cal.target_hz;
        out["seeds"] = cal.seeds;
    } else {
        throw ConfigError("option 'motion': expected rotate or oscillate");
    }
    out["config"] = config_json(opts);
    atomic_write(opts.str("output"), out.dump(2) + "\n");
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options opts;
    try {
        opts = resolve_options(args);
        apply_thread_cap(opts);
    } catch (const std::exception& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (opts.command == "generate") return run_generate(opts);
        if (opts.command == "spectrum") return run_spectrum(opts);
        if (opts.command == "kstar") return run_kstar(opts);
        if (opts.command == "fit") return run_fit(opts);
        if (opts.command == "optimize-weights") return run_optimize_weights(opts);
        if (opts.command == "anneal") return run_anneal(opts);
        if (opts.command == "simulate") return run_simulate(opts);
        if (opts.command == "calibrate") return run_calibrate(opts);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        // domain violations (odd ring degree, bad model parameters) are
        // configuration problems, reported before any heavy computation
        err << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    err << "config error: unknown command '" << opts.command << "'\n";
    (void)out;
    return 2;
}

}  // namespace consensus::cli
