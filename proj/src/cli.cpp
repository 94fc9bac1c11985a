#include "entprod/cli.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "entprod/dilation.hpp"

namespace entprod::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt9(double v) {
    if (v == 0.0) v = 0.0;  // drop the sign of negative zero
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidConfig("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// write-temp-then-rename so readers never observe a partial file
void write_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        f << content;
        if (!f.flush()) throw std::runtime_error("write to '" + tmp.string() + "' failed");
    }
    fs::rename(tmp, target);
}

void emit(const RunConfig& cfg, const std::string& content, std::ostream& out) {
    if (cfg.out.empty()) {
        out << content;
    } else {
        write_atomic(cfg.out, content);
    }
}

std::vector<std::string> model_params(const std::string& model) {
    if (model == "dephasing") return {"s", "omega_c"};
    if (model == "ad") return {"lambda", "gamma0"};
    if (model == "gad") return {"omega"};
    return {};
}

double& param_ref(RunConfig& cfg, const std::string& name) {
    if (name == "s") return cfg.s;
    if (name == "omega_c") return cfg.omega_c;
    if (name == "lambda") return cfg.lambda;
    if (name == "gamma0") return cfg.gamma0;
    if (name == "omega") return cfg.omega;
    if (name == "alpha") return cfg.alpha;
    throw InvalidConfig("unknown parameter '" + name + "'");
}

double param_value(const RunConfig& cfg, const std::string& name) {
    return param_ref(const_cast<RunConfig&>(cfg), name);
}

template <class T>
T get_as(const nlohmann::json& v, const std::string& key) {
    try {
        return v.get<T>();
    } catch (const nlohmann::json::exception&) {
        throw InvalidConfig("config key '" + key + "' has the wrong type");
    }
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw InvalidConfig("cannot parse " + what + " entry '" + item + "'");
        }
    }
    return out;
}

ordered_json intervals_json(const std::vector<std::pair<double, double>>& intervals) {
    ordered_json arr = ordered_json::array();
    for (const auto& [a, b] : intervals) arr.push_back({a, b});
    return arr;
}

OptimizerConfig optimizer_for(const RunConfig& cfg, int jobs) {
    OptimizerConfig opt;
    opt.starts = cfg.starts;
    opt.evaluations_per_start = cfg.evaluations;
    opt.seed = cfg.seed;
    opt.jobs = jobs;
    if (cfg.initial != "optimize") opt.fixed_initial = cfg.initial_param();
    return opt;
}

std::string witness_output(const RunConfig& cfg, const WitnessResult& res) {
    const auto grid = cfg.grid();
    if (cfg.format == "json") {
        ordered_json j;
        j["measure"] = res.measure;
        j["signed_integral"] = res.signed_integral;
        j["intervals"] = intervals_json(res.intervals);
        j["best_initial"] = {{"alpha", res.best_initial.alpha},
                             {"basis", {res.best_initial.basis[0], res.best_initial.basis[1],
                                        res.best_initial.basis[2]}}};
        j["seed"] = cfg.seed;
        j["grid"] = {{"t_max", grid.t_max()}, {"steps", grid.steps()}};
        j["budget_exhausted"] = res.budget_exhausted;
        j["config"] = ordered_json::parse(config_json(cfg, "witness"));
        return j.dump(2) + "\n";
    }
    std::string s = "# " + config_json(cfg, "witness") + "\n";
    s += "measure,signed_integral,alpha,basis0,basis1,basis2,intervals\n";
    std::string iv;
    for (const auto& [a, b] : res.intervals) iv += (iv.empty() ? "" : ";") + fmt9(a) + ":" + fmt9(b);
    s += fmt9(res.measure) + "," + fmt9(res.signed_integral) + "," + fmt9(res.best_initial.alpha) + "," +
         fmt9(res.best_initial.basis[0]) + "," + fmt9(res.best_initial.basis[1]) + "," +
         fmt9(res.best_initial.basis[2]) + "," + iv + "\n";
    return s;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
    const auto grid = cfg.grid();
    const auto records = trajectory(cfg.channel_model(), generate_initial(cfg.initial_param()), grid);
    if (cfg.format == "json") {
        ordered_json j;
        j["config"] = ordered_json::parse(config_json(cfg, "simulate"));
        ordered_json rows = ordered_json::array();
        for (const auto& r : records)
            rows.push_back({{"t", r.t},
                            {"tep", r.tep},
                            {"tepr", r.tepr},
                            {"mutual", r.mutual},
                            {"classical", r.classical},
                            {"discord", r.discord},
                            {"entropy_exchange", r.entropy_exchange},
                            {"channel_scalar", r.channel_scalar}});
        j["records"] = std::move(rows);
        emit(cfg, j.dump(2) + "\n", out);
    } else {
        emit(cfg, simulate_csv(cfg, records), out);
    }
    return kExitOk;
}

int cmd_witness(const RunConfig& cfg, std::ostream& out) {
    const auto res = nonmarkovianity_measure(cfg.channel_model(), cfg.grid(), optimizer_for(cfg, cfg.jobs));
    emit(cfg, witness_output(cfg, res), out);
    return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
    const auto& sw = *cfg.sweep;
    std::vector<double> values(static_cast<std::size_t>(sw.count));
    for (int i = 0; i < sw.count; ++i) {
        const double f = static_cast<double>(i) / (sw.count - 1);
        values[static_cast<std::size_t>(i)] =
            sw.spacing == "log" ? std::exp(std::log(sw.start) + f * (std::log(sw.stop) - std::log(sw.start)))
                                : sw.start + f * (sw.stop - sw.start);
    }

    std::vector<WitnessResult> results(values.size());
    std::vector<std::exception_ptr> errors(values.size());
    auto run_point = [&](std::size_t i) {
        try {
            RunConfig point = cfg;
            param_ref(point, sw.param) = values[i];
            point.sweep.reset();
            validate(point, "witness");
            results[i] = nonmarkovianity_measure(point.channel_model(), point.grid(), optimizer_for(point, 1));
        } catch (...) {
            errors[i] = std::current_exception();
        }
    };
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(cfg.jobs), values.size());
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < values.size(); i = next++) run_point(i);
        });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    if (cfg.format == "json") {
        ordered_json j;
        j["config"] = ordered_json::parse(config_json(cfg, "sweep"));
        ordered_json pts = ordered_json::array();
        for (std::size_t i = 0; i < values.size(); ++i)
            pts.push_back({{sw.param, values[i]},
                           {"measure", results[i].measure},
                           {"signed_integral", results[i].signed_integral},
                           {"intervals", intervals_json(results[i].intervals)}});
        j["points"] = std::move(pts);
        emit(cfg, j.dump(2) + "\n", out);
        return kExitOk;
    }
    std::string s = "# " + config_json(cfg, "sweep") + "\n";
    s += sw.param + ",measure,signed_integral,n_intervals,first_negative_t\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto& r = results[i];
        s += fmt9(values[i]) + "," + fmt9(r.measure) + "," + fmt9(r.signed_integral) + "," +
             std::to_string(r.intervals.size()) + "," + (r.intervals.empty() ? "" : fmt9(r.intervals.front().first)) +
             "\n";
    }
    emit(cfg, s, out);
    return kExitOk;
}

KrausFamily corrupted(const KrausFamily& k) {
    // {sqrt(0.8) K_i, sqrt(0.2) K_i sigma_x}: still complete, but a different channel
    std::vector<ComplexMatrix> ops;
    for (const auto& op : k.ops()) ops.push_back(std::sqrt(0.8) * op);
    for (const auto& op : k.ops()) ops.push_back(std::sqrt(0.2) * op * sigma_x());
    return KrausFamily(std::move(ops));
}

int cmd_oracle(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto grid = cfg.grid();
    std::vector<double> times = cfg.times;
    if (cfg.full_grid) {
        times = grid.samples();
    } else if (times.empty()) {
        for (int k = 1; k <= 10; ++k) times.push_back(grid.t_max() * k / 10.0);
    }
    const auto model = cfg.channel_model();
    const auto initial = generate_initial(cfg.initial_param());

    std::vector<OracleReport> reports;
    for (double t : times) {
        const KrausFamily k = kraus_at(model, t);
        reports.push_back(evaluate_oracle(initial, k, cfg.corrupt_kraus ? corrupted(k) : k, t));
    }

    std::string s;
    if (cfg.format == "json") {
        ordered_json j;
        j["config"] = ordered_json::parse(config_json(cfg, "oracle"));
        ordered_json rows = ordered_json::array();
        for (const auto& r : reports) {
            ordered_json row{{"t", r.t}, {"env_dim", r.env_dim}};
            for (std::size_t i = 0; i < r.residuals.size(); ++i) row[OracleReport::names[i]] = r.residuals[i];
            row["mutual_ae"] = r.mutual_ae;
            row["passed"] = r.passed();
            rows.push_back(std::move(row));
        }
        j["checks"] = std::move(rows);
        s = j.dump(2) + "\n";
    } else {
        s = "# " + config_json(cfg, "oracle") + "\n";
        s += "t,env_dim,env_vs_sa,env_vs_exchange,ae_vs_s,mutual_balance,mutual_ae\n";
        for (const auto& r : reports) {
            s += fmt9(r.t) + "," + std::to_string(r.env_dim);
            for (double v : r.residuals) s += "," + fmt9(v);
            s += "," + fmt9(r.mutual_ae) + "\n";
        }
    }
    emit(cfg, s, out);

    for (const auto& r : reports) {
        for (std::size_t i = 0; i < r.residuals.size(); ++i)
            if (!(r.residuals[i] <= kOracleTol)) {
                err << "oracle check failed: " << CheckFailure(OracleReport::names[i], r.t, r.residuals[i]).what()
                    << "\n";
                return kExitCheckFailure;
            }
        if (r.mutual_ae < -kOracleTol) {
            err << "oracle check failed: " << CheckFailure("mutual_ae_nonnegative", r.t, -r.mutual_ae).what() << "\n";
            return kExitCheckFailure;
        }
    }
    return kExitOk;
}

// Flag values land in these temporaries; only flags actually given override the config.
struct FlagBindings {
    std::string model, initial, out, format, config, times, basis, param, spacing;
    double s = 0, omega_c = 0, lambda = 0, gamma0 = 0, omega = 0, t_max = 0, alpha = 0, start = 0, stop = 0;
    int steps = 0, jobs = 0, starts = 0, evaluations = 0, count = 0;
    std::uint64_t seed = 0;
    bool full_grid = false, corrupt_kraus = false;

    std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> appliers;
    CLI::Option* config_opt = nullptr;

    template <class T>
    void add(CLI::App* app, const std::string& flag, T& slot, const std::string& help,
             std::function<void(RunConfig&)> apply) {
        appliers.emplace_back(app->add_option(flag, slot, help), std::move(apply));
    }

    void register_run_options(CLI::App* app) {
        add(app, "--model", model, "dephasing | ad | gad", [this](RunConfig& c) { c.model = model; });
        add(app, "--s", s, "Ohmicity parameter", [this](RunConfig& c) { c.s = s; });
        add(app, "--omega-c", omega_c, "cut-off frequency", [this](RunConfig& c) { c.omega_c = omega_c; });
        add(app, "--lambda", lambda, "Lorentzian spectral width", [this](RunConfig& c) { c.lambda = lambda; });
        add(app, "--gamma0", gamma0, "coupling strength", [this](RunConfig& c) { c.gamma0 = gamma0; });
        add(app, "--omega", omega, "GAD frequency", [this](RunConfig& c) { c.omega = omega; });
        add(app, "--t-max", t_max, "end of the time grid", [this](RunConfig& c) { c.t_max = t_max; });
        add(app, "--steps", steps, "grid intervals", [this](RunConfig& c) { c.steps = steps; });
        add(app, "--initial", initial, "bell | schmidt | optimize", [this](RunConfig& c) { c.initial = initial; });
        add(app, "--alpha", alpha, "Schmidt angle in [0, pi/4]", [this](RunConfig& c) { c.alpha = alpha; });
        add(app, "--basis", basis, "apparatus ZYZ angles a,b,c",
            [this](RunConfig& c) {
                const auto v = parse_list(basis, "basis");
                if (v.size() != 3) throw InvalidConfig("--basis expects three comma-separated angles");
                c.basis = {v[0], v[1], v[2]};
            });
        add(app, "--seed", seed, "optimizer seed", [this](RunConfig& c) { c.seed = seed; });
        add(app, "--out", out, "output path (default stdout)", [this](RunConfig& c) { c.out = out; });
        add(app, "--format", format, "csv | json", [this](RunConfig& c) { c.format = format; });
        add(app, "--jobs", jobs, "worker threads", [this](RunConfig& c) { c.jobs = jobs; });
        add(app, "--starts", starts, "optimizer starts", [this](RunConfig& c) { c.starts = starts; });
        add(app, "--evaluations", evaluations, "evaluations per start",
            [this](RunConfig& c) { c.evaluations = evaluations; });
        config_opt = app->add_option("--config", config, "JSON config file");
    }
};

struct Parsed {
    std::string command;
    RunConfig cfg;
};

Parsed parse_args(const std::vector<std::string>& args, std::ostream& out, bool& help_shown) {
    CLI::App app{"Total entropy production and non-Markovianity witness for qubit channels", "entprod"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "entprod 1.0");

    auto* simulate = app.add_subcommand("simulate", "trajectory of TEP, TEPR and correlations");
    auto* witness = app.add_subcommand("witness", "non-Markovianity measure");
    auto* sweep = app.add_subcommand("sweep", "witness over a range of one parameter");
    auto* oracle = app.add_subcommand("oracle", "dilation identity checks");

    std::vector<FlagBindings> bindings(4);
    std::array<CLI::App*, 4> apps{simulate, witness, sweep, oracle};
    for (std::size_t i = 0; i < apps.size(); ++i) bindings[i].register_run_options(apps[i]);

    auto& sw = bindings[2];
    sw.add(sweep, "--param", sw.param, "swept parameter", [&sw](RunConfig& c) {
        if (!c.sweep) c.sweep.emplace();
        c.sweep->param = sw.param;
    });
    sw.add(sweep, "--start", sw.start, "first value", [&sw](RunConfig& c) {
        if (!c.sweep) c.sweep.emplace();
        c.sweep->start = sw.start;
    });
    sw.add(sweep, "--stop", sw.stop, "last value", [&sw](RunConfig& c) {
        if (!c.sweep) c.sweep.emplace();
        c.sweep->stop = sw.stop;
    });
    sw.add(sweep, "--count", sw.count, "number of points", [&sw](RunConfig& c) {
        if (!c.sweep) c.sweep.emplace();
        c.sweep->count = sw.count;
    });
    sw.add(sweep, "--spacing", sw.spacing, "linear | log", [&sw](RunConfig& c) {
        if (!c.sweep) c.sweep.emplace();
        c.sweep->spacing = sw.spacing;
    });

    auto& orc = bindings[3];
    orc.add(oracle, "--times", orc.times, "comma-separated spot-check times",
            [&orc](RunConfig& c) { c.times = parse_list(orc.times, "times"); });
    oracle->add_flag("--full-grid", orc.full_grid, "check every grid sample");
    oracle->add_flag("--corrupt-kraus", orc.corrupt_kraus, "test hook: perturb the Kraus route")
        ->group("");  // hidden

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, out);
        help_shown = true;
        return {};
    } catch (const CLI::CallForVersion& e) {
        app.exit(e, out, out);
        help_shown = true;
        return {};
    } catch (const CLI::ParseError& e) {
        throw InvalidConfig(e.what());
    }

    Parsed p;
    std::size_t which = 0;
    for (std::size_t i = 0; i < apps.size(); ++i)
        if (apps[i]->parsed()) which = i;
    p.command = apps[which]->get_name();
    auto& b = bindings[which];

    std::string config_path;
    if (b.config_opt->count() > 0) {
        config_path = b.config;
    } else if (const char* env = std::getenv(kConfigEnv); env != nullptr && *env != '\0') {
        config_path = env;
    }
    if (!config_path.empty()) apply_json_config(p.cfg, read_file(config_path));
    for (auto& [opt, apply] : b.appliers)
        if (opt->count() > 0) apply(p.cfg);
    if (which == 3) {
        if (orc.full_grid) p.cfg.full_grid = true;
        p.cfg.corrupt_kraus = orc.corrupt_kraus;
    }
    return p;
}

}  // namespace

ChannelModel RunConfig::channel_model() const {
    if (model == "dephasing") return Dephasing{s, omega_c};
    if (model == "ad") return AmplitudeDamping{lambda, gamma0};
    if (model == "gad") return GeneralizedAmplitudeDamping{omega};
    throw InvalidConfig("unknown model '" + model + "' (expected dephasing, ad or gad)");
}

TimeGrid RunConfig::grid() const {
    if (t_max) return TimeGrid(*t_max, steps);
    return default_grid(channel_model(), steps);
}

InitialStateParam RunConfig::initial_param() const {
    if (initial == "schmidt") return {alpha, basis};
    return InitialStateParam::bell();
}

void validate(const RunConfig& cfg, const std::string& command) {
    if (cfg.model.empty()) throw InvalidConfig("--model is required");
    try {
        entprod::validate(cfg.channel_model());
    } catch (const InvalidConfig&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw InvalidConfig(e.what());
    }
    if (cfg.t_max && !(*cfg.t_max > 0.0 && std::isfinite(*cfg.t_max)))
        throw InvalidConfig("t_max must be finite and positive");
    if (cfg.steps < 16) throw InvalidConfig("steps must be at least 16");
    if (cfg.initial != "bell" && cfg.initial != "schmidt" && cfg.initial != "optimize")
        throw InvalidConfig("initial must be bell, schmidt or optimize");
    if ((command == "simulate" || command == "oracle") && cfg.initial == "optimize")
        throw InvalidConfig(command + " needs a fixed initial state (bell or schmidt)");
    if (!(cfg.alpha >= 0.0 && cfg.alpha <= std::numbers::pi / 4.0))
        throw InvalidConfig("alpha must lie in [0, pi/4]");
    for (double b : cfg.basis)
        if (!std::isfinite(b)) throw InvalidConfig("basis angles must be finite");
    if (cfg.format != "csv" && cfg.format != "json") throw InvalidConfig("format must be csv or json");
    if (cfg.jobs < 1) throw InvalidConfig("jobs must be at least 1");
    if (cfg.starts < 0) throw InvalidConfig("starts must be non-negative");
    if (cfg.evaluations < 1) throw InvalidConfig("evaluations must be at least 1");
    for (double t : cfg.times)
        if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidConfig("oracle times must be finite and non-negative");

    if (command == "sweep") {
        if (!cfg.sweep) throw InvalidConfig("sweep needs --param, --start, --stop and --count");
        const auto& sw = *cfg.sweep;
        const auto allowed = model_params(cfg.model);
        const bool on_model = std::find(allowed.begin(), allowed.end(), sw.param) != allowed.end();
        if (!on_model && sw.param != "alpha")
            throw InvalidConfig("swept parameter '" + sw.param + "' does not exist on model " + cfg.model);
        if (sw.count < 2) throw InvalidConfig("sweep count must be at least 2");
        if (sw.spacing != "linear" && sw.spacing != "log") throw InvalidConfig("spacing must be linear or log");
        if (!std::isfinite(sw.start) || !std::isfinite(sw.stop)) throw InvalidConfig("sweep bounds must be finite");
        if (sw.spacing == "log" && !(sw.start > 0.0 && sw.stop > 0.0))
            throw InvalidConfig("log spacing needs positive bounds");
        if (sw.param == "alpha" && cfg.initial != "schmidt")
            throw InvalidConfig("sweeping alpha requires initial = schmidt");
    }
}

void apply_json_config(RunConfig& cfg, const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidConfig(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw InvalidConfig("config must be a JSON object");
    for (const auto& [key, v] : doc.items()) {
        if (key == "model") cfg.model = get_as<std::string>(v, key);
        else if (key == "s" || key == "omega_c" || key == "lambda" || key == "gamma0" || key == "omega" ||
                 key == "alpha")
            param_ref(cfg, key) = get_as<double>(v, key);
        else if (key == "t_max") cfg.t_max = get_as<double>(v, key);
        else if (key == "steps") cfg.steps = get_as<int>(v, key);
        else if (key == "initial") cfg.initial = get_as<std::string>(v, key);
        else if (key == "basis") {
            const auto b = get_as<std::vector<double>>(v, key);
            if (b.size() != 3) throw InvalidConfig("config key 'basis' needs three angles");
            cfg.basis = {b[0], b[1], b[2]};
        } else if (key == "seed") cfg.seed = get_as<std::uint64_t>(v, key);
        else if (key == "out") cfg.out = get_as<std::string>(v, key);
        else if (key == "format") cfg.format = get_as<std::string>(v, key);
        else if (key == "jobs") cfg.jobs = get_as<int>(v, key);
        else if (key == "starts") cfg.starts = get_as<int>(v, key);
        else if (key == "evaluations") cfg.evaluations = get_as<int>(v, key);
        else if (key == "times") cfg.times = get_as<std::vector<double>>(v, key);
        else if (key == "full_grid") cfg.full_grid = get_as<bool>(v, key);
        else if (key == "sweep") {
            if (!v.is_object()) throw InvalidConfig("config key 'sweep' must be an object");
            SweepSpec sw;
            for (const auto& [sk, sv] : v.items()) {
                if (sk == "param") sw.param = get_as<std::string>(sv, "sweep.param");
                else if (sk == "start") sw.start = get_as<double>(sv, "sweep.start");
                else if (sk == "stop") sw.stop = get_as<double>(sv, "sweep.stop");
                else if (sk == "count") sw.count = get_as<int>(sv, "sweep.count");
                else if (sk == "spacing") sw.spacing = get_as<std::string>(sv, "sweep.spacing");
                else throw InvalidConfig("unknown config key 'sweep." + sk + "'");
            }
            cfg.sweep = sw;
        } else {
            throw InvalidConfig("unknown config key '" + key + "'");
        }
    }
}

std::string config_json(const RunConfig& cfg, const std::string& command) {
    ordered_json j;
    j["command"] = command;
    j["model"] = cfg.model;
    for (const auto& p : model_params(cfg.model)) j[p] = param_value(cfg, p);
    const auto grid = cfg.grid();
    j["t_max"] = grid.t_max();
    j["steps"] = grid.steps();
    j["initial"] = cfg.initial;
    if (cfg.initial == "schmidt") {
        j["alpha"] = cfg.alpha;
        j["basis"] = {cfg.basis[0], cfg.basis[1], cfg.basis[2]};
    }
    if (cfg.initial == "optimize") {
        j["starts"] = cfg.starts;
        j["evaluations"] = cfg.evaluations;
    }
    j["seed"] = cfg.seed;
    j["format"] = cfg.format;
    if (command == "oracle") {
        j["full_grid"] = cfg.full_grid;
        if (!cfg.times.empty()) j["times"] = cfg.times;
    }
    if (cfg.sweep) {
        j["sweep"] = {{"param", cfg.sweep->param},
                      {"start", cfg.sweep->start},
                      {"stop", cfg.sweep->stop},
                      {"count", cfg.sweep->count},
                      {"spacing", cfg.sweep->spacing}};
    }
    return j.dump();
}

std::string simulate_csv(const RunConfig& cfg, const std::vector<TrajectoryRecord>& records) {
    std::string s = "# " + config_json(cfg, "simulate") + "\n";
    s += "t,tep,tepr,mutual,classical,discord,entropy_exchange,channel_scalar\n";
    for (const auto& r : records) {
        s += fmt9(r.t) + "," + fmt9(r.tep) + "," + fmt9(r.tepr) + "," + fmt9(r.mutual) + "," + fmt9(r.classical) +
             "," + fmt9(r.discord) + "," + fmt9(r.entropy_exchange) + "," + fmt9(r.channel_scalar) + "\n";
    }
    return s;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        bool help_shown = false;
        Parsed p = parse_args(args, out, help_shown);
        if (help_shown) return kExitOk;
        validate(p.cfg, p.command);
        if (p.command == "simulate") return cmd_simulate(p.cfg, out);
        if (p.command == "witness") return cmd_witness(p.cfg, out);
        if (p.command == "sweep") return cmd_sweep(p.cfg, out);
        return cmd_oracle(p.cfg, out, err);
    } catch (const InvalidConfig& e) {
        err << "invalid configuration: " << e.what() << "\n";
        return kExitInvalidConfig;
    } catch (const NumericalFailure& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const CheckFailure& e) {
        err << "oracle check failed: " << e.what() << "\n";
        return kExitCheckFailure;
    } catch (const std::invalid_argument& e) {
        err << "invalid configuration: " << e.what() << "\n";
        return kExitInvalidConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace entprod::cli
