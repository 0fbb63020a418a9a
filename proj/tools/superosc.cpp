// superosc: synthesize band-limited waves under linear constraints and
// reproduce the slit self-acceleration experiments.

#include "superosc/experiments.hpp"
#include "superosc/kernels.hpp"
#include "superosc/quadrature.hpp"
#include "superosc/report_io.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace superosc;

namespace {

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config", "cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("config", std::string("invalid JSON: ") + e.what());
    }
}

double num_field(const json& j, const std::string& path, const std::string& key, double fallback,
                 bool required = false) {
    if (!j.contains(key)) {
        if (required) throw ValidationError(path + "." + key, "missing required field");
        return fallback;
    }
    if (!j[key].is_number())
        throw ValidationError(path + "." + key, "expected a number");
    return j[key].get<double>();
}

PhysicalConfig parse_physical(const json& root) {
    if (!root.contains("physical")) throw ValidationError("physical", "missing section");
    const json& p = root["physical"];
    PhysicalConfig cfg;
    cfg.hbar = num_field(p, "physical", "hbar", 1.0);
    cfg.p_max = num_field(p, "physical", "p_max", 1.0);
    cfg.slit_half_width = num_field(p, "physical", "slit_half_width", 0.0, true);
    cfg.slit_center = num_field(p, "physical", "slit_center", 0.0);
    cfg.validate();
    return cfg;
}

SolveOptions parse_solver(const json& root) {
    SolveOptions opts;
    if (root.contains("solver")) {
        const json& s = root["solver"];
        opts.tol = num_field(s, "solver", "tol", opts.tol);
        opts.start_digits = static_cast<unsigned>(
            num_field(s, "solver", "start_digits", opts.start_digits));
        opts.max_digits = static_cast<unsigned>(
            num_field(s, "solver", "max_digits", opts.max_digits));
    }
    if (const char* cap = std::getenv("SUPEROSC_MAX_DIGITS")) {
        unsigned env_cap = static_cast<unsigned>(std::strtoul(cap, nullptr, 10));
        if (env_cap > 0) opts.max_digits = std::min(opts.max_digits, env_cap);
    }
    if (opts.start_digits == 0) throw ValidationError("solver.start_digits", "must be positive");
    if (opts.max_digits < opts.start_digits)
        throw ValidationError("solver.max_digits", "must be >= start_digits");
    if (!(opts.tol > 0)) throw ValidationError("solver.tol", "must be > 0");
    return opts;
}

std::vector<std::complex<double>> parse_target_list(const json& targets) {
    std::vector<std::complex<double>> out;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const json& t = targets[i];
        if (t.is_number()) {
            out.emplace_back(t.get<double>(), 0.0);
        } else if (t.is_array() && t.size() == 2 && t[0].is_number() && t[1].is_number()) {
            out.emplace_back(t[0].get<double>(), t[1].get<double>());
        } else {
            throw ValidationError("problem.targets[" + std::to_string(i) + "]",
                                  "expected a number or an [re, im] pair");
        }
    }
    return out;
}

struct Problem {
    ConstraintSet cs;
    double pbar = 0.0;
};

Problem parse_problem(const json& root, const PhysicalConfig& cfg) {
    if (!root.contains("problem")) throw ValidationError("problem", "missing section");
    const json& p = root["problem"];
    if (!p.contains("family")) throw ValidationError("problem.family", "missing required field");
    Family family = family_from_name(p["family"].get<std::string>());

    std::vector<double> nodes;
    if (p.contains("nodes")) {
        if (!p["nodes"].is_array()) throw ValidationError("problem.nodes", "expected an array");
        nodes = p["nodes"].get<std::vector<double>>();
    } else if (p.contains("node_rule")) {
        const json& rule = p["node_rule"];
        int count = static_cast<int>(num_field(rule, "problem.node_rule", "count", 0.0, true));
        std::string placement = rule.value("placement", "equidistant");
        if (placement != "equidistant")
            throw ValidationError("problem.node_rule.placement",
                                  "only 'equidistant' is supported");
        if (count < 1) throw ValidationError("problem.node_rule.count", "must be >= 1");
        if (count == 1) {
            nodes = {cfg.slit_center};
        } else {
            for (int k = 0; k < count; ++k)
                nodes.push_back(cfg.slit_lo() + cfg.slit_width() * k / (count - 1));
        }
    } else {
        throw ValidationError("problem.nodes", "need nodes or node_rule");
    }

    double pbar = num_field(p, "problem", "pbar", 0.0);
    int n = family == Family::IntervalArea ? static_cast<int>(nodes.size()) - 1
                                           : static_cast<int>(nodes.size());
    if (family == Family::DerivativeAtPoint) {
        n = static_cast<int>(num_field(p, "problem", "n", static_cast<double>(nodes.size())));
        if (nodes.size() != 1)
            throw ValidationError("problem.nodes", "derivative family takes a single anchor node");
    }
    if (n < 1) throw ValidationError("problem.nodes", "empty constraint set");

    std::vector<std::complex<double>> targets;
    if (!p.contains("targets")) throw ValidationError("problem.targets", "missing required field");
    if (p["targets"].is_string()) {
        std::string mode = p["targets"].get<std::string>();
        IdealTemplate tmpl = ideal_template(cfg, pbar);
        if (mode == "template") {
            if (family == Family::PointAmplitude) {
                for (double x : nodes) targets.push_back(tmpl.value(x));
            } else if (family == Family::DerivativeAtPoint) {
                for (int k = 0; k < n; ++k) targets.push_back(tmpl.derivative(nodes[0], k));
            } else {
                for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
                    // area of the template over each partition cell
                    PrecisionScope scope(kBaseDigits);
                    quad::Options opt;
                    opt.rel_tol = Real(1e-12);
                    opt.abs_tol = Real(1e-16);
                    Complex area = quad::integrate(
                        [&](const Real& x) { return tmpl.value_hp(x); }, Real(nodes[k]),
                        Real(nodes[k + 1]), opt);
                    targets.push_back(area.to_std());
                }
            }
        } else if (mode == "alternating") {
            for (int k = 1; k <= n; ++k)
                targets.emplace_back(k % 2 == 0 ? 1.0 : -1.0, 0.0);
        } else {
            throw ValidationError("problem.targets",
                                  "expected a list, 'template' or 'alternating'");
        }
    } else if (p["targets"].is_array()) {
        targets = parse_target_list(p["targets"]);
    } else {
        throw ValidationError("problem.targets", "expected a list, 'template' or 'alternating'");
    }

    switch (family) {
        case Family::PointAmplitude:
            return {ConstraintSet::point_amplitudes(cfg, nodes, targets), pbar};
        case Family::DerivativeAtPoint:
            return {ConstraintSet::derivatives_at(cfg, nodes[0], targets), pbar};
        case Family::IntervalArea:
            return {ConstraintSet::interval_areas(cfg, nodes, targets), pbar};
    }
    throw std::logic_error("unreachable");
}

struct OutputSpec {
    fs::path report = "report.json";
    fs::path position_grid = "position.csv";
    fs::path momentum_grid = "momentum.csv";
    int grid_points = 2001;
};

OutputSpec parse_outputs(const json& root, const fs::path& out_dir) {
    OutputSpec spec;
    if (root.contains("outputs")) {
        const json& o = root["outputs"];
        if (o.contains("report")) spec.report = o["report"].get<std::string>();
        if (o.contains("position_grid")) spec.position_grid = o["position_grid"].get<std::string>();
        if (o.contains("momentum_grid")) spec.momentum_grid = o["momentum_grid"].get<std::string>();
        spec.grid_points = static_cast<int>(num_field(o, "outputs", "grid_points", 2001.0));
        if (spec.grid_points < 2) throw ValidationError("outputs.grid_points", "must be >= 2");
    }
    auto anchor = [&](fs::path p) { return p.is_absolute() ? p : out_dir / p; };
    spec.report = anchor(spec.report);
    spec.position_grid = anchor(spec.position_grid);
    spec.momentum_grid = anchor(spec.momentum_grid);
    return spec;
}

void write_report(const std::string& text, const fs::path& path) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << text << '\n';
    std::cout << "wrote " << path.string() << '\n';
}

const SampleTable* find_table(const ExperimentReport& rep, const std::string& name) {
    for (const auto& t : rep.tables)
        if (t.name == name) return &t;
    return nullptr;
}

int cmd_construct(const std::string& config_path, const fs::path& out_dir,
                  std::optional<unsigned> digits, std::optional<double> tol) {
    json root = load_config(config_path);
    PhysicalConfig cfg = parse_physical(root);
    SolveOptions opts = parse_solver(root);
    if (digits) opts.start_digits = *digits;
    if (tol) opts.tol = *tol;
    Problem problem = parse_problem(root, cfg);
    OutputSpec outputs = parse_outputs(root, out_dir);

    ExperimentReport rep;
    rep.experiment = "construct";
    rep.cfg = cfg;
    rep.constraints = problem.cs;
    rep.solver = opts;
    rep.params = {{"pbar", problem.pbar}, {"n", static_cast<double>(problem.cs.size())}};

    GramMatrix gram = assemble_gram(cfg, problem.cs, opts.start_digits);
    Solution sol = solve(gram, problem.cs.values, opts);
    WaveField w = make_wavefield(cfg, problem.cs, sol);
    rep.outputs = {{"norm_sq", sol.norm_sq},
                   {"residual", sol.residual},
                   {"condition_estimate", sol.condition_estimate},
                   {"precision_digits_used", static_cast<double>(sol.precision_digits_used)}};
    try {
        EmergingWave e = project_slit(w);
        MomentumStats stats = momentum_stats(as_slit_function(e));
        rep.outputs["p_mean"] = stats.p_mean;
        rep.outputs["p_std"] = stats.p_std;
        rep.outputs["stats_spectral"] =
            stats.method == StatsMethod::SpectralQuadrature ? 1.0 : 0.0;
        if (stats.truncation != 0.0) rep.outputs["stats_truncation"] = stats.truncation;
        rep.outputs["renorm_factor"] = e.renorm_factor;
    } catch (const SolveError& e) {
        rep.notes.push_back(std::string("slit statistics unavailable: ") + e.what());
    }

    double L = cfg.slit_width();
    rep.tables.push_back(SampleTable{"position", {"x", "re", "im", "abs2"}, {}});
    for (int i = 0; i < outputs.grid_points; ++i) {
        double x = cfg.slit_center - 4 * L +
                   8 * L * i / (outputs.grid_points - 1);
        auto v = w.position(x);
        rep.tables.back().rows.push_back({x, v.real(), v.imag(), std::norm(v)});
    }
    rep.tables.push_back(SampleTable{"momentum", {"p", "re", "im", "abs2"}, {}});
    for (int i = 0; i < outputs.grid_points; ++i) {
        double p = -1.25 * cfg.p_max + 2.5 * cfg.p_max * i / (outputs.grid_points - 1);
        auto v = w.momentum(p);
        rep.tables.back().rows.push_back({p, v.real(), v.imag(), std::norm(v)});
    }

    write_report(to_json(rep), outputs.report);
    write_csv(*find_table(rep, "position"), outputs.position_grid.string());
    std::cout << "wrote " << outputs.position_grid.string() << '\n';
    write_csv(*find_table(rep, "momentum"), outputs.momentum_grid.string());
    std::cout << "wrote " << outputs.momentum_grid.string() << '\n';
    return 0;
}

int cmd_experiment(const std::string& name, const std::string& config_path,
                   const fs::path& out_dir, std::optional<unsigned> digits,
                   std::optional<double> tol) {
    json root = load_config(config_path);
    PhysicalConfig cfg = parse_physical(root);
    SolveOptions opts = parse_solver(root);
    if (digits) opts.start_digits = *digits;
    if (tol) opts.tol = *tol;
    OutputSpec outputs = parse_outputs(root, out_dir);
    const json& ex = root.contains("experiment") ? root["experiment"] : json::object();
    GridOptions grids{outputs.grid_points};

    auto write_tables = [&](const ExperimentReport& rep) {
        for (const auto& t : rep.tables) {
            fs::path p = out_dir / (rep.experiment + "_" + t.name + ".csv");
            write_csv(t, p.string());
            std::cout << "wrote " << p.string() << '\n';
        }
    };

    if (name == "amp-match") {
        double pbar = num_field(ex, "experiment", "pbar", 2.0 * cfg.p_max);
        int n = static_cast<int>(num_field(ex, "experiment", "n", 9.0));
        ExperimentReport rep = run_amplitude_matching(cfg, pbar, n, opts, grids);
        write_report(to_json(rep), outputs.report);
        write_tables(rep);
        return 0;
    }
    if (name == "deriv-match") {
        double pbar = num_field(ex, "experiment", "pbar", 2.0 * cfg.p_max);
        int n = static_cast<int>(num_field(ex, "experiment", "n", 23.0));
        ExperimentReport rep = run_derivative_matching(cfg, pbar, n, opts, grids);
        write_report(to_json(rep), outputs.report);
        write_tables(rep);
        return 0;
    }
    if (name == "cost-sweep") {
        double lambda_min = cfg.lambda_min();
        double spacing = num_field(ex, "experiment", "spacing", lambda_min / 4.0);
        int n_lo = static_cast<int>(num_field(ex, "experiment", "n_lo", 3.0));
        int n_hi = static_cast<int>(num_field(ex, "experiment", "n_hi", 12.0));
        double pbar = num_field(ex, "experiment", "pbar", 0.0);
        std::string mode = ex.value("targets", "alternating");
        SweepValues values = SweepValues::Alternating;
        if (mode == "template")
            values = SweepValues::Template;
        else if (mode != "alternating")
            throw ValidationError("experiment.targets", "expected 'alternating' or 'template'");
        SweepResult sweep = run_cost_sweep(cfg, spacing, n_lo, n_hi, values, pbar, opts);
        write_report(to_json(sweep), outputs.report);
        return 0;
    }
    if (name == "extreme") {
        if (!ex.contains("nodes") || !ex["nodes"].is_array())
            throw ValidationError("experiment.nodes", "missing node list");
        ExperimentReport rep =
            run_extreme(cfg, ex["nodes"].get<std::vector<double>>(), opts, grids);
        write_report(to_json(rep), outputs.report);
        write_tables(rep);
        return 0;
    }
    if (name == "convergence") {
        double pbar = num_field(ex, "experiment", "pbar", 2.0 * cfg.p_max);
        std::vector<int> n_list{5, 9, 15};
        if (ex.contains("n_list")) n_list = ex["n_list"].get<std::vector<int>>();
        SweepResult sweep = run_convergence(cfg, pbar, n_list, opts);
        write_report(to_json(sweep), outputs.report);
        return 0;
    }
    throw ValidationError("experiment",
                          "unknown experiment '" + name +
                              "' (amp-match, deriv-match, cost-sweep, extreme, convergence)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"superoscillatory wave synthesis and slit self-acceleration analysis"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::optional<unsigned> digits;
    std::optional<double> tol;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON run configuration")->required();
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--digits", digits, "override solver start digits");
        cmd->add_option("--tol", tol, "override solver residual tolerance");
    };

    CLI::App* construct = app.add_subcommand("construct", "solve one constraint problem");
    add_common(construct);

    std::string experiment_name;
    CLI::App* experiment = app.add_subcommand("experiment", "run a scripted experiment");
    experiment->add_option("name", experiment_name,
                           "amp-match | deriv-match | cost-sweep | extreme | convergence")
        ->required();
    add_common(experiment);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        fs::create_directories(out_dir);
        if (construct->parsed()) return cmd_construct(config_path, out_dir, digits, tol);
        return cmd_experiment(experiment_name, config_path, out_dir, digits, tol);
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return 2;
    } catch (const SolveError& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
