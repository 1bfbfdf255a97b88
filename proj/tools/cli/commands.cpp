#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "regretfolio/benchmark.hpp"
#include "regretfolio/data_io.hpp"
#include "regretfolio/error.hpp"
#include "regretfolio/evaluation.hpp"
#include "regretfolio/pareto.hpp"
#include "regretfolio/robust.hpp"

namespace regretfolio::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr const char* kDefaultsVersion = "1";

enum class Kind { String, UInt, Int, Double, List };

struct FlagSpec {
    const char* flag;
    const char* key;
    Kind kind;
    const char* help;
};

// Shared by every subcommand; irrelevant flags are accepted and ignored.
const FlagSpec kFlags[] = {
    {"--dataset", "dataset", Kind::String, "dataset JSON file"},
    {"--out", "out", Kind::String, "output directory (generate: output file)"},
    {"--seed", "seed", Kind::UInt, "random seed (fallback: $REGRETFOLIO_SEED, then 42)"},
    {"--n-assets", "n_assets", Kind::UInt, "generate: number of assets"},
    {"--n-points", "n_points", Kind::UInt, "points per front"},
    {"--technique", "technique", Kind::String, "bounded-risk|weighted-sum|sharpe|percentile|ideal|all"},
    {"--cap", "cap", Kind::Double, "bounded-risk variance cap"},
    {"--lambda", "lambda", Kind::Double, "weighted-sum risk aversion"},
    {"--fraction", "fraction", Kind::Double, "percentile fraction of the variance range"},
    {"--sign-mode", "sign_mode", Kind::String, "weighted-sum sign convention: standard|paper-literal"},
    {"--mode", "mode", Kind::String, "regret mode: absolute|signed"},
    {"--multistart", "multistart", Kind::UInt, "random starts per robust point"},
    {"--iterations", "iterations", Kind::Int, "subgradient iterations per start"},
    {"--max-iters", "max_iters", Kind::Int, "QP iteration limit"},
    {"--tol", "tol", Kind::Double, "QP stationarity tolerance"},
    {"--ref-return", "ref_return", Kind::Double, "hypervolume reference return"},
    {"--ref-variance", "ref_variance", Kind::Double, "hypervolume reference variance"},
    {"--scenario", "scenario", Kind::List, "scenario label (repeatable; default all)"},
    {"--robust", "robust", Kind::List, "robust front CSV (repeatable)"},
};

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::IoError: return kIo;
        case ErrorCode::InfeasibleCap:
        case ErrorCode::InfeasibleReturn:
        case ErrorCode::NotConverged:
        case ErrorCode::DegenerateRisk: return kSolver;
        default: return kUsage;
    }
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const json::exception& e) {
        err << "error: ValidationError: " << e.what() << '\n';
        return kUsage;
    } catch (const fs::filesystem_error& e) {
        err << "error: IoError: " << e.what() << '\n';
        return kIo;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kSolver;
    }
}

json parse_flag_value(const FlagSpec& spec, const std::string& text) {
    auto bad = [&] { return Error(ErrorCode::ValidationError, std::string(spec.flag) + ": invalid value '" + text + "'"); };
    std::size_t used = 0;
    try {
        switch (spec.kind) {
            case Kind::String: return text;
            case Kind::UInt: {
                if (!text.empty() && text[0] == '-') throw bad();
                auto v = std::stoull(text, &used);
                if (used != text.size()) throw bad();
                return v;
            }
            case Kind::Int: {
                auto v = std::stoll(text, &used);
                if (used != text.size()) throw bad();
                return v;
            }
            case Kind::Double: {
                auto v = std::stod(text, &used);
                if (used != text.size()) throw bad();
                return v;
            }
            case Kind::List: return json::array({text});
        }
    } catch (const std::logic_error&) {
        throw bad();
    }
    return text;
}

template <typename T>
T get_as(const json& j, const std::string& key) {
    try {
        return j.get<T>();
    } catch (const json::exception&) {
        throw Error(ErrorCode::ValidationError, "config key '" + key + "' has the wrong type");
    }
}

std::vector<TechniqueKind> selected_techniques(const RunConfig& cfg) {
    if (cfg.technique == "all")
        return {std::begin(kPracticeTechniques), std::end(kPracticeTechniques)};
    auto kind = parse_technique(cfg.technique);
    if (!kind) throw Error(ErrorCode::ValidationError, "unknown technique '" + cfg.technique + "'");
    return {*kind};
}

BenchmarkTechnique technique_for(const RunConfig& cfg, TechniqueKind kind) {
    BenchmarkTechnique t = BenchmarkTechnique::of(kind);
    t.cap = cfg.cap;
    t.lambda = cfg.lambda;
    t.fraction = cfg.fraction;
    if (cfg.sign_mode == "standard") t.sign_mode = SignMode::Standard;
    else if (cfg.sign_mode == "paper-literal") t.sign_mode = SignMode::PaperLiteral;
    else throw Error(ErrorCode::ValidationError, "unknown sign mode '" + cfg.sign_mode + "'");
    t.validate();
    return t;
}

RegretMode regret_mode_for(const RunConfig& cfg) {
    if (cfg.mode == "absolute") return RegretMode::Absolute;
    if (cfg.mode == "signed") return RegretMode::Signed;
    throw Error(ErrorCode::ValidationError, "unknown regret mode '" + cfg.mode + "'");
}

SolverConfig solver_for(const RunConfig& cfg) {
    SolverConfig s;
    s.max_iters = cfg.max_iters;
    s.tol = cfg.tol;
    s.seed = cfg.seed;
    s.validate();
    return s;
}

RobustConfig robust_for(const RunConfig& cfg) {
    RobustConfig r;
    r.solver = solver_for(cfg);
    r.multistart = cfg.multistart;
    r.iterations = cfg.iterations;
    r.validate();
    return r;
}

const std::string& require_dataset(const RunConfig& cfg) {
    if (cfg.dataset.empty()) throw Error(ErrorCode::ValidationError, "--dataset is required");
    return cfg.dataset;
}

fs::path out_dir(const RunConfig& cfg) {
    fs::path dir = cfg.out.empty() ? fs::path("out") : fs::path(cfg.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (!fs::is_directory(dir)) throw Error(ErrorCode::IoError, "cannot create output directory '" + dir.string() + "'");
    return dir;
}

std::vector<const RegimeScenario*> selected_scenarios(const RunConfig& cfg, const UncertaintySet& uset) {
    std::vector<const RegimeScenario*> out;
    if (cfg.scenario.empty()) {
        for (const auto& s : uset.scenarios()) out.push_back(&s);
        return out;
    }
    for (const auto& label : cfg.scenario) {
        const RegimeScenario* s = uset.find(label);
        if (!s) {
            std::string valid;
            for (const auto& l : uset.labels()) valid += (valid.empty() ? "" : ", ") + l;
            throw Error(ErrorCode::ValidationError, "unknown scenario '" + label + "' (valid: " + valid + ")");
        }
        out.push_back(s);
    }
    return out;
}

std::vector<ObjectivePoint> objectives(const ParetoFront& front) {
    std::vector<ObjectivePoint> pts;
    for (const auto& p : front.points) pts.push_back(p.objective());
    return pts;
}

std::vector<ParetoFront> trace_fronts(const RunConfig& cfg, const Dataset& data) {
    std::vector<ParetoFront> fronts;
    for (const auto& s : data.scenarios.scenarios())
        fronts.push_back(trace_scenario_front(data.universe.mu, s, cfg.n_points, solver_for(cfg)));
    return fronts;
}

class Manifest {
public:
    Manifest(const RunConfig& cfg, fs::path dir) : cfg_(cfg), dir_(std::move(dir)) {}

    fs::path file(const std::string& name) {
        outputs_.insert(name);
        return dir_ / name;
    }

    void write() const {
        json doc;
        doc["command"] = cfg_.command;
        doc["config"] = cfg_.to_json();
        doc["version"] = kVersion;
        doc["defaults_version"] = kDefaultsVersion;
        doc["outputs"] = std::vector<std::string>(outputs_.begin(), outputs_.end());
        std::ofstream out(dir_ / "manifest.json", std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::IoError, "cannot write manifest in '" + dir_.string() + "'");
        out << doc.dump(2) << '\n';
    }

private:
    const RunConfig& cfg_;
    fs::path dir_;
    std::set<std::string> outputs_;
};

std::string fmt(double v, const char* spec = "%.6g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

}  // namespace

json RunConfig::to_json() const {
    json j;
    j["dataset"] = dataset;
    j["out"] = out;
    j["seed"] = seed;
    j["n_assets"] = n_assets;
    j["n_points"] = n_points;
    j["technique"] = technique;
    j["cap"] = cap;
    j["lambda"] = lambda;
    j["fraction"] = fraction;
    j["sign_mode"] = sign_mode;
    j["mode"] = mode;
    j["multistart"] = multistart;
    j["iterations"] = iterations;
    j["max_iters"] = max_iters;
    j["tol"] = tol;
    j["ref_return"] = ref_return ? json(*ref_return) : json(nullptr);
    j["ref_variance"] = ref_variance ? json(*ref_variance) : json(nullptr);
    j["scenario"] = scenario;
    j["robust"] = robust;
    return j;
}

RunConfig resolve_config(const std::string& command, const json& config, const json& flags) {
    if (!config.is_null() && !config.is_object())
        throw Error(ErrorCode::ValidationError, "config file must hold a JSON object");
    std::set<std::string> known;
    for (const auto& f : kFlags) known.insert(f.key);
    for (auto it = config.begin(); config.is_object() && it != config.end(); ++it)
        if (!known.count(it.key())) throw Error(ErrorCode::ValidationError, "unknown config key '" + it.key() + "'");

    json merged = config.is_object() ? config : json::object();
    if (!merged.contains("seed")) {
        if (const char* env = std::getenv("REGRETFOLIO_SEED"); env && *env)
            merged["seed"] = parse_flag_value(kFlags[2], env);
    }
    for (auto it = flags.begin(); it != flags.end(); ++it) merged[it.key()] = it.value();

    RunConfig cfg;
    cfg.command = command;
    auto take = [&](const char* key, auto& field) {
        if (merged.contains(key) && !merged[key].is_null())
            field = get_as<std::decay_t<decltype(field)>>(merged[key], key);
    };
    take("dataset", cfg.dataset);
    take("out", cfg.out);
    take("seed", cfg.seed);
    take("n_assets", cfg.n_assets);
    take("n_points", cfg.n_points);
    take("technique", cfg.technique);
    take("cap", cfg.cap);
    take("lambda", cfg.lambda);
    take("fraction", cfg.fraction);
    take("sign_mode", cfg.sign_mode);
    take("mode", cfg.mode);
    take("multistart", cfg.multistart);
    take("iterations", cfg.iterations);
    take("max_iters", cfg.max_iters);
    take("tol", cfg.tol);
    take("scenario", cfg.scenario);
    take("robust", cfg.robust);
    if (merged.contains("ref_return") && !merged["ref_return"].is_null())
        cfg.ref_return = get_as<double>(merged["ref_return"], "ref_return");
    if (merged.contains("ref_variance") && !merged["ref_variance"].is_null())
        cfg.ref_variance = get_as<double>(merged["ref_variance"], "ref_variance");
    if (cfg.n_points < 2) throw Error(ErrorCode::ValidationError, "--n-points must be >= 2");
    return cfg;
}

int cmd_generate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        GeneratorSpec spec;
        spec.seed = cfg.seed;
        spec.n_assets = cfg.n_assets;
        const DatasetFile file = generate_synthetic(spec);
        const fs::path path = cfg.out.empty() ? fs::path("dataset.json") : fs::path(cfg.out);
        write_dataset(file, path);

        const auto [mu_lo, mu_hi] = std::minmax_element(file.mu.begin(), file.mu.end());
        const auto& stds = file.regimes.front().stds;
        const auto [sd_lo, sd_hi] = std::minmax_element(stds.begin(), stds.end());
        out << "wrote " << path.string() << ": " << file.assets.size() << " assets, " << file.regimes.size()
            << " regimes\n"
            << "  mu in [" << fmt(*mu_lo) << ", " << fmt(*mu_hi) << "], stds in [" << fmt(*sd_lo) << ", "
            << fmt(*sd_hi) << "]\n";
        for (const auto& r : file.regimes)
            out << "  regime " << r.label << ": mean off-diagonal correlation " << fmt(mean_off_diagonal(r.corr))
                << '\n';
        return int(kOk);
    });
}

int cmd_benchmarks(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Dataset data = load_dataset(require_dataset(cfg));
        const auto kinds = selected_techniques(cfg);
        std::vector<BenchmarkSet> sets;
        for (auto kind : kinds)
            sets.push_back(compute_benchmark_set(technique_for(cfg, kind), data.universe, data.scenarios,
                                                 solver_for(cfg)));
        const auto fronts = trace_fronts(cfg, data);

        Manifest manifest(cfg, out_dir(cfg));
        const std::size_t n = data.universe.size();
        std::string csv = "scenario,technique,return,variance";
        for (std::size_t i = 0; i < n; ++i) csv += ",weight_" + std::to_string(i + 1);
        csv += '\n';
        for (const auto& s : data.scenarios.scenarios())
            for (const auto& set : sets) {
                const BenchmarkEntry* e = set.find(s.label);
                csv += s.label + ',' + set.technique.name() + ',' + format_number(e->ret) + ',' +
                       format_number(e->variance);
                for (double w : e->portfolio.weights()) csv += ',' + format_number(w);
                csv += '\n';
                out << s.label << "  " << set.technique.name() << ": return " << fmt(e->ret) << ", variance "
                    << fmt(e->variance) << '\n';
            }
        {
            std::ofstream f(manifest.file("benchmarks.csv"), std::ios::binary | std::ios::trunc);
            if (!(f << csv)) throw Error(ErrorCode::IoError, "cannot write benchmarks.csv");
        }

        for (std::size_t k = 0; k < fronts.size(); ++k) {
            const std::string& label = fronts[k].label;
            std::vector<SvgSeries> series;
            series.push_back({"Pareto front (" + label + ")", objectives(fronts[k]), std::string(kPalette[0]), 2.5});
            for (const auto& set : sets) {
                const BenchmarkEntry* e = set.find(label);
                series.push_back({set.technique.name(), {{e->ret, e->variance}},
                                  std::string(technique_color(set.technique.kind)), 5.0});
            }
            write_svg_scatter(series, "variance", "return", manifest.file("fig1_" + label + ".svg"),
                              "Pareto front and benchmarks, scenario " + label);
        }
        manifest.write();
        return int(kOk);
    });
}

int cmd_front(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Dataset data = load_dataset(require_dataset(cfg));
        const auto scenarios = selected_scenarios(cfg, data.scenarios);
        Manifest manifest(cfg, out_dir(cfg));
        for (const RegimeScenario* s : scenarios) {
            const ParetoFront front = trace_scenario_front(data.universe.mu, *s, cfg.n_points, solver_for(cfg));
            write_front_csv(front, data.universe.size(), manifest.file("front_" + s->label + ".csv"));
            std::vector<SvgSeries> series{{"Pareto front (" + s->label + ")", objectives(front), std::nullopt, 3.0}};
            write_svg_scatter(series, "variance", "return", manifest.file("front_" + s->label + ".svg"),
                              "Pareto front, scenario " + s->label);
            out << "scenario " << s->label << ": " << front.points.size() << " points";
            if (front.skipped) out << " (" << front.skipped << " grid targets skipped)";
            out << '\n';
        }
        manifest.write();
        return int(kOk);
    });
}

int cmd_robust(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Dataset data = load_dataset(require_dataset(cfg));
        const auto kinds = selected_techniques(cfg);
        const RegretMode mode = regret_mode_for(cfg);
        const RobustConfig rcfg = robust_for(cfg);
        const auto fronts = trace_fronts(cfg, data);
        const std::size_t n = data.universe.size();

        Manifest manifest(cfg, out_dir(cfg));
        for (auto kind : kinds) {
            const BenchmarkTechnique technique = technique_for(cfg, kind);
            const BenchmarkSet set =
                compute_benchmark_set(technique, data.universe, data.scenarios, solver_for(cfg));
            const RegretSpec spec = RegretSpec::from_benchmarks(data.scenarios, set, mode);
            const auto robust = trace_robust_front(data.universe.mu, spec, cfg.n_points, rcfg);
            const std::string name = technique.name();

            write_front_csv(robust, n, manifest.file("robust_" + name + ".csv"));
            std::vector<Portfolio> portfolios;
            for (const auto& p : robust) portfolios.push_back(p.x);
            const RegretReport report = regret_report(portfolios, data.universe.mu, spec);
            write_regret_report_csv(report, manifest.file("regret_report_" + name + ".csv"));
            manifest.file("regret_report_" + name + "_summary.csv");

            out << name << ": " << robust.size() << " robust points (" << to_string(mode) << " regret)\n";
            for (std::size_t s = 0; s < report.labels.size(); ++s) {
                out << "  " << report.labels[s] << ": benchmark variance " << fmt(spec.reference[s]) << ", "
                    << report.below[s] << " below / " << report.above[s] << " at or above\n";
            }

            for (std::size_t k = 0; k < fronts.size(); ++k) {
                const RegimeScenario& s = data.scenarios[k];
                const BenchmarkEntry* e = set.find(s.label);
                std::vector<SvgSeries> series;
                series.push_back({"Pareto front (" + s.label + ")", objectives(fronts[k]), std::string(kPalette[0]), 2.5});
                series.push_back({"robust (" + name + ")", evaluate_under_scenario(portfolios, data.universe.mu, s),
                                  std::string(technique_color(kind)), 3.0});
                series.push_back({"benchmark", {{e->ret, e->variance}}, std::string("#000000"), 5.0});
                write_svg_scatter(series, "variance", "return",
                                  manifest.file("fig2_" + name + "_" + s.label + ".svg"),
                                  "Robust solutions under scenario " + s.label + " (" + name + ")");
            }
        }
        manifest.write();
        return int(kOk);
    });
}

int cmd_evaluate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Dataset data = load_dataset(require_dataset(cfg));
        if (cfg.robust.empty()) throw Error(ErrorCode::ValidationError, "--robust is required");
        const std::size_t n = data.universe.size();
        const auto fronts = trace_fronts(cfg, data);
        HypervolumeRef ref = default_reference(data.scenarios);
        if (cfg.ref_return) ref.ret_ref = *cfg.ref_return;
        if (cfg.ref_variance) ref.var_ref = *cfg.ref_variance;

        Manifest manifest(cfg, out_dir(cfg));
        std::string csv = "robust_csv,scenario,robust_hv,front_hv,ratio\n";
        std::string summary = "robust_csv,worst_ratio,worst_scenario\n";
        std::vector<std::pair<double, std::string>> ranking;

        for (const auto& path_text : cfg.robust) {
            const fs::path path(path_text);
            const auto rows = read_front_csv(path);
            std::vector<Portfolio> portfolios;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                Vector w = rows[i].weights;
                if (w.size() != n)
                    throw Error(ErrorCode::ValidationError, path_text + ": row " + std::to_string(i + 1) + " has " +
                                                                std::to_string(w.size()) + " weights, expected " +
                                                                std::to_string(n));
                double sum = 0.0;
                for (double v : w) sum += v;
                if (std::abs(sum - 1.0) > 1e-6)
                    throw Error(ErrorCode::ValidationError, path_text + ": row " + std::to_string(i + 1) +
                                                                " weights do not sum to 1");
                for (double& v : w) v /= sum;
                portfolios.emplace_back(std::move(w));
            }

            const HvRatioReport hv = worst_case_hv_ratio(portfolios, data.universe.mu, data.scenarios, fronts, ref);
            const std::string name = path.filename().string();
            out << name << ":\n";
            for (const auto& r : hv.per_scenario) {
                out << "  " << r.label << ": HV ratio " << fmt(r.ratio) << " (" << fmt(r.robust_hv) << " / "
                    << fmt(r.front_hv) << ")\n";
                csv += name + ',' + r.label + ',' + format_number(r.robust_hv) + ',' + format_number(r.front_hv) +
                       ',' + format_number(r.ratio) + '\n';
            }
            out << "  worst-case HV ratio " << fmt(hv.worst) << " (scenario " << hv.worst_label << ")\n";
            summary += name + ',' + format_number(hv.worst) + ',' + hv.worst_label + '\n';
            ranking.emplace_back(hv.worst, name);

            // The benchmark technique comes from --technique or the robust_<technique>.csv name.
            std::optional<TechniqueKind> kind;
            if (cfg.technique != "all") kind = parse_technique(cfg.technique);
            const std::string stem = path.stem().string();
            if (!kind && stem.rfind("robust_", 0) == 0) kind = parse_technique(stem.substr(7));
            if (kind) {
                const BenchmarkSet set = compute_benchmark_set(technique_for(cfg, *kind), data.universe,
                                                               data.scenarios, solver_for(cfg));
                const RegretSpec spec = RegretSpec::from_benchmarks(data.scenarios, set, regret_mode_for(cfg));
                write_regret_report_csv(regret_report(portfolios, data.universe.mu, spec),
                                        manifest.file("regret_report_" + stem + ".csv"));
                manifest.file("regret_report_" + stem + "_summary.csv");
            } else {
                out << "  (no benchmark technique known for " << name << "; regret report skipped)\n";
            }
        }

        std::stable_sort(ranking.begin(), ranking.end(),
                         [](const auto& a, const auto& b) { return a.first > b.first; });
        out << "ordering by worst-case HV ratio:";
        for (std::size_t i = 0; i < ranking.size(); ++i)
            out << (i ? " > " : " ") << ranking[i].second << " (" << fmt(ranking[i].first) << ")";
        out << '\n';

        for (const auto& [name, text] : {std::pair{"evaluation.csv", &csv}, std::pair{"evaluation_summary.csv", &summary}}) {
            std::ofstream f(manifest.file(name), std::ios::binary | std::ios::trunc);
            if (!(f << *text)) throw Error(ErrorCode::IoError, std::string("cannot write ") + name);
        }
        manifest.write();
        return int(kOk);
    });
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Benchmark-regret robust mean-variance portfolio fronts", "regretfolio"};
    app.require_subcommand(1);

    struct Sub {
        CLI::App* app;
        std::map<std::string, std::string> values;
        std::map<std::string, std::vector<std::string>> lists;
        std::map<std::string, CLI::Option*> options;
        std::string config_path;
    };
    const std::pair<const char*, const char*> commands[] = {
        {"generate", "write a synthetic regime dataset"},
        {"benchmarks", "compute benchmark portfolios per scenario"},
        {"front", "trace scenario Pareto fronts"},
        {"robust", "trace benchmark-regret robust fronts"},
        {"evaluate", "hypervolume ratios of robust fronts"},
    };
    std::map<std::string, Sub> subs;
    for (const auto& [name, help] : commands) {
        Sub& sub = subs[name];
        sub.app = app.add_subcommand(name, help);
        sub.app->add_option("--config", sub.config_path, "JSON config file (flags override it)");
        for (const auto& f : kFlags) {
            if (f.kind == Kind::List) sub.options[f.key] = sub.app->add_option(f.flag, sub.lists[f.key], f.help);
            else sub.options[f.key] = sub.app->add_option(f.flag, sub.values[f.key], f.help);
        }
    }

    std::vector<std::string> reversed(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
    std::reverse(reversed.begin(), reversed.end());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? int(kOk) : int(kUsage);
    }

    for (auto& [name, sub] : subs) {
        if (!sub.app->parsed()) continue;
        RunConfig cfg;
        const int status = guarded(err, [&] {
            json flags = json::object();
            for (const auto& f : kFlags) {
                if (sub.options[f.key]->count() == 0) continue;
                if (f.kind == Kind::List) flags[f.key] = sub.lists[f.key];
                else flags[f.key] = parse_flag_value(f, sub.values[f.key]);
            }
            json config;
            if (!sub.config_path.empty()) {
                std::ifstream in(sub.config_path);
                if (!in) throw Error(ErrorCode::IoError, "cannot open config '" + sub.config_path + "'");
                try {
                    config = json::parse(in);
                } catch (const json::parse_error& e) {
                    throw Error(ErrorCode::ParseError, sub.config_path + ": " + e.what());
                }
            }
            cfg = resolve_config(name, config, flags);
            return int(kOk);
        });
        if (status != kOk) return status;
        if (name == "generate") return cmd_generate(cfg, out, err);
        if (name == "benchmarks") return cmd_benchmarks(cfg, out, err);
        if (name == "front") return cmd_front(cfg, out, err);
        if (name == "robust") return cmd_robust(cfg, out, err);
        return cmd_evaluate(cfg, out, err);
    }
    return kUsage;
}

}  // namespace regretfolio::cli
