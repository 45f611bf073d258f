#include "cli/commands.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "cli/figures.hpp"
#include "cli/svg.hpp"
#include "qtdlab/config.hpp"
#include "qtdlab/csv.hpp"
#include "qtdlab/parallel.hpp"
#include "qtdlab/quantile_dp.hpp"

namespace qtdlab {

namespace {

// Thrown after results were written when they contain divergence or
// non-convergence; mapped to exit code 2.
class NumericalFailure : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

int resolve_jobs(int cli_jobs) {
    if (cli_jobs > 0) return cli_jobs;
    if (const char* env = std::getenv("QTDLAB_JOBS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return hardware_jobs();
}

std::optional<std::uint64_t> env_base_seed() {
    if (const char* env = std::getenv("QTDLAB_BASE_SEED")) {
        return static_cast<std::uint64_t>(std::strtoull(env, nullptr, 10));
    }
    return std::nullopt;
}

struct GenEnvArgs {
    std::string kind;
    std::string rewards = "gaussian";
    int n_states = 0;  // 0 = per-kind default
    int branching = 6;
    double gamma = 0.9;
    double reward_scale = 1.0;
    std::uint64_t seed = 0;
    double skew = 1.0;
    double tail_prob = 0.1;
    std::string out;
};

Mrp realize_env(const GenEnvArgs& args) {
    if (args.kind == "skewed") {
        return make_skewed_pair(args.skew, args.gamma, args.tail_prob);
    }
    EnvSpec spec;
    spec.transition_kind = transition_kind_from_name(args.kind);
    spec.reward_kind = kind_from_name(args.rewards);
    spec.n_states = args.n_states > 0
                        ? args.n_states
                        : (spec.transition_kind == TransitionKind::Cycle ? 10 : 20);
    spec.branching = args.branching;
    spec.gamma = args.gamma;
    spec.reward_scale = args.reward_scale;
    spec.seed = args.seed;
    return make_env(spec);
}

void cmd_gen_env(const GenEnvArgs& args) {
    const Mrp mrp = realize_env(args);
    write_text_file(args.out, mrp_to_config(mrp));
    std::cout << "wrote " << args.out << " (" << mrp.id() << ", " << mrp.n_states()
              << " states)\n";
}

struct SweepArgs {
    std::string config_path;
    std::string env_path;  // optional realized-MRP override
    std::string out;
    bool paper_scale = false;
    int jobs = 0;
};

SweepSummary run_one_sweep(const std::string& config_path, const std::string& env_path,
                           bool paper_scale, int jobs) {
    const ConfigDoc doc = ConfigDoc::parse_file(config_path);
    ExperimentConfig cfg;
    std::optional<Mrp> mrp;
    if (!env_path.empty()) {
        mrp = mrp_from_config(ConfigDoc::parse_file(env_path));
        apply_experiment_section(doc, cfg);
    } else {
        cfg = experiment_from_config(doc);
    }
    if (paper_scale) cfg.n_runs = 1000;
    if (const auto seed = env_base_seed()) cfg.base_seed = *seed;
    return mrp ? sweep(*mrp, cfg, jobs) : sweep(cfg, jobs);
}

int count_diverged(const SweepSummary& s) {
    int total = 0;
    for (const SweepCell& cell : s.cells) total += cell.n_diverged;
    return total;
}

void print_sweep_summary(const SweepSummary& s) {
    const int last = *std::max_element(s.checkpoints.begin(), s.checkpoints.end());
    try {
        const Optimum best = optimal_mse(s, last);
        std::cout << s.env_id << " " << agent_name(s.agent)
                  << (s.agent == AgentKind::Td ? "" : "(" + std::to_string(s.m) + ")")
                  << ": optimal lr " << csv_number(best.lr) << ", mse " << csv_number(best.mse_mean)
                  << " (stderr " << csv_number(best.mse_stderr) << ") after " << last
                  << " updates\n";
    } catch (const std::runtime_error&) {
        std::cout << s.env_id << " " << agent_name(s.agent) << ": every learning rate diverged\n";
    }
}

void cmd_run_sweep(const SweepArgs& args) {
    const SweepSummary summary =
        run_one_sweep(args.config_path, args.env_path, args.paper_scale, resolve_jobs(args.jobs));
    write_text_file(args.out, csv_emit(sweep_to_csv(summary)));
    print_sweep_summary(summary);
    const int diverged = count_diverged(summary);
    if (diverged > 0) {
        throw NumericalFailure(std::to_string(diverged) +
                               " diverged runs present (results written to " + args.out + ")");
    }
}

struct FixedPointArgs {
    std::string env_path;
    std::vector<int> m_list = {1, 2, 4, 8, 16, 32, 64, 128};
    std::string op = "qtd";
    double tol = 1e-9;
    std::string out;
    std::string dump_theta;  // optional (state, i, theta) CSV of the largest-m table
    int jobs = 0;
};

void cmd_fixed_point(const FixedPointArgs& args) {
    const Mrp mrp = mrp_from_config(ConfigDoc::parse_file(args.env_path));
    const bool pqtd = args.op == "pqtd";
    if (!pqtd && args.op != "qtd") {
        throw ConfigError("fixed-point: --operator must be qtd or pqtd");
    }
    std::vector<FixedPointRow> rows(args.m_list.size());
    std::vector<QuantileTable> tables(args.m_list.size());
    parallel_for(resolve_jobs(args.jobs), args.m_list.size(), [&](std::size_t k) {
        const int m = args.m_list[k];
        DpResult r = pqtd ? pqtd_fixed_point(mrp, m, args.tol) : qdp_fixed_point(mrp, m, args.tol);
        const BoundReport b = bound_report(mrp, m, r);
        rows[k] = {mrp.id(),   m,          r.value_error_sup, b.bound_41,
                   b.bound_42, r.iterations, r.residual,      r.converged};
        tables[k] = std::move(r.theta_fixed);
    });
    write_text_file(args.out, csv_emit(fixed_point_to_csv(rows)));
    if (!args.dump_theta.empty()) {
        std::size_t largest = 0;
        for (std::size_t k = 1; k < args.m_list.size(); ++k) {
            if (args.m_list[k] > args.m_list[largest]) largest = k;
        }
        CsvTable dump;
        dump.header = {"state", "i", "theta"};
        const QuantileTable& table = tables[largest];
        for (int x = 0; x < table.n_states; ++x) {
            for (int i = 0; i < table.m; ++i) {
                dump.rows.push_back({std::to_string(x), std::to_string(i),
                                     csv_number(table.at(x, i))});
            }
        }
        write_text_file(args.dump_theta, csv_emit(dump));
    }
    int failures = 0;
    for (const FixedPointRow& r : rows) {
        std::cout << r.env_id << " m=" << r.m << " error=" << csv_number(r.value_error_sup)
                  << " bound41=" << csv_number(r.bound_41) << " bound42=" << csv_number(r.bound_42)
                  << (r.converged ? "" : "  [NOT CONVERGED]") << "\n";
        if (!r.converged) ++failures;
    }
    if (failures > 0) {
        throw NumericalFailure(std::to_string(failures) +
                               " m values did not converge (results written to " + args.out + ")");
    }
}

struct ImprovementArgs {
    std::string config_a;
    std::string config_b;
    std::string env_path;
    std::string out;
    bool paper_scale = false;
    int jobs = 0;
};

void cmd_improvement(const ImprovementArgs& args) {
    const int jobs = resolve_jobs(args.jobs);
    const SweepSummary a = run_one_sweep(args.config_a, args.env_path, args.paper_scale, jobs);
    const SweepSummary b = run_one_sweep(args.config_b, args.env_path, args.paper_scale, jobs);
    const ImprovementCurve curve = improvement_curve(a, b);
    write_text_file(args.out, csv_emit(improvement_to_csv(curve)));
    for (const ImprovementPoint& p : curve.points) {
        std::cout << curve.env_id << " @" << p.checkpoint << ": ratio " << csv_number(p.ratio)
                  << " (lr_a " << csv_number(p.optimal_lr_a) << ", lr_b "
                  << csv_number(p.optimal_lr_b) << ")\n";
    }
    if (count_diverged(a) + count_diverged(b) > 0) {
        throw NumericalFailure("diverged runs present in the underlying sweeps");
    }
}

struct PlotArgs {
    std::string kind;
    std::vector<std::string> inputs;
    std::vector<std::string> labels;
    std::string out;
    int checkpoint = -1;
    std::string title;
};

void cmd_plot(const PlotArgs& args) {
    FigureSpec fig;
    if (args.kind == "mse_vs_lr") {
        std::vector<SweepSummary> sweeps;
        for (const std::string& path : args.inputs) {
            sweeps.push_back(sweep_from_csv(csv_parse(read_text_file(path))));
        }
        fig = figure_mse_vs_lr(sweeps, args.checkpoint);
    } else if (args.kind == "improvement_vs_updates" || args.kind == "optimal_lr_vs_updates") {
        std::vector<ImprovementCurve> curves;
        for (const std::string& path : args.inputs) {
            curves.push_back(improvement_from_csv(csv_parse(read_text_file(path))));
        }
        fig = args.kind == "improvement_vs_updates" ? figure_improvement(curves, args.labels)
                                                    : figure_optimal_lr(curves, args.labels);
    } else if (args.kind == "error_vs_m") {
        std::vector<FixedPointRow> rows;
        for (const std::string& path : args.inputs) {
            const auto part = fixed_point_from_csv(csv_parse(read_text_file(path)));
            rows.insert(rows.end(), part.begin(), part.end());
        }
        fig = figure_error_vs_m(rows);
    } else {
        throw ConfigError("plot: unknown --kind '" + args.kind + "'");
    }
    if (!args.title.empty()) fig.title = args.title;
    write_text_file(args.out, render_svg(fig));
    std::cout << "wrote " << args.out << "\n";
}

struct ReproArgs {
    std::string outdir = "repro";
    bool paper_scale = false;
    int jobs = 0;
    std::uint64_t seed = 1;
    int n_updates = 1000;
    int n_runs = 200;
};

ExperimentConfig repro_config(const EnvSpec& env, AgentKind agent, const ReproArgs& args) {
    ExperimentConfig cfg;
    cfg.env = env;
    cfg.agent = agent;
    cfg.m = 128;
    cfg.n_updates = args.n_updates;
    cfg.checkpoints.clear();
    for (int c : {10, 30, 100, 300, 1000, 3000, 10000}) {
        if (c < args.n_updates) cfg.checkpoints.push_back(c);
    }
    cfg.checkpoints.push_back(args.n_updates);
    cfg.n_runs = args.paper_scale ? 1000 : args.n_runs;
    cfg.base_seed = mix_seed({args.seed, static_cast<std::uint64_t>(agent)});
    return cfg;
}

void cmd_repro(const ReproArgs& args) {
    namespace fs = std::filesystem;
    const auto t_start = std::chrono::steady_clock::now();
    auto elapsed = [&t_start] {
        return std::chrono::duration_cast<std::chrono::seconds>(std::chrono::steady_clock::now() -
                                                                t_start)
            .count();
    };
    const int jobs = resolve_jobs(args.jobs);
    fs::create_directories(args.outdir);
    auto path = [&](const std::string& name) { return (fs::path(args.outdir) / name).string(); };

    std::cout << "repro: " << (args.paper_scale ? 1000 : args.n_runs) << " runs per cell, "
              << args.n_updates << " updates, " << jobs << " jobs\n";

    // Phase 1: fixed-point certification over the full suite.
    {
        std::vector<FixedPointRow> rows;
        const std::vector<int> m_grid = {1, 2, 4, 8, 16, 32, 64, 128};
        const auto specs = suite_environments(args.seed);
        std::vector<std::pair<std::size_t, int>> tasks;
        for (std::size_t e = 0; e < specs.size(); ++e) {
            for (int m : m_grid) tasks.emplace_back(e, m);
        }
        rows.resize(tasks.size());
        parallel_for(jobs, tasks.size(), [&](std::size_t k) {
            const Mrp mrp = make_env(specs[tasks[k].first]);
            const int m = tasks[k].second;
            const DpResult r = qdp_fixed_point(mrp, m);
            const BoundReport b = bound_report(mrp, m, r);
            rows[k] = {mrp.id(),   m,          r.value_error_sup, b.bound_41,
                       b.bound_42, r.iterations, r.residual,      r.converged};
        });
        write_text_file(path("fixed_point.csv"), csv_emit(fixed_point_to_csv(rows)));
        write_text_file(path("fixed_point.svg"), render_svg(figure_error_vs_m(rows)));
        std::cout << "[" << elapsed() << "s] fixed-point certification done ("
                  << rows.size() << " rows)\n";
    }

    // Phase 2: learning-rate sweeps and improvement curves for the
    // 3x3 grid plus the heavy-tailed extension.
    std::vector<ImprovementCurve> grid_curves;
    std::vector<std::string> grid_labels;
    std::vector<ImprovementCurve> heavy_curves;
    std::vector<std::string> heavy_labels;
    for (TransitionKind t :
         {TransitionKind::Dirichlet, TransitionKind::Garnet, TransitionKind::Cycle}) {
        for (RewardKind r : {RewardKind::PointMass, RewardKind::Gaussian, RewardKind::Exponential,
                             RewardKind::StudentT2}) {
            const EnvSpec env = suite_spec(t, r, args.seed);
            const SweepSummary qtd = sweep(repro_config(env, AgentKind::Qtd, args), jobs);
            const SweepSummary td = sweep(repro_config(env, AgentKind::Td, args), jobs);
            const std::string id = env_id(env);
            write_text_file(path("sweep_" + id + "_qtd128.csv"), csv_emit(sweep_to_csv(qtd)));
            write_text_file(path("sweep_" + id + "_td.csv"), csv_emit(sweep_to_csv(td)));
            const int fig_checkpoint = std::min(1000, qtd.checkpoints.back());
            write_text_file(path("mse_vs_lr_" + id + ".svg"),
                            render_svg(figure_mse_vs_lr({td, qtd}, fig_checkpoint)));
            const ImprovementCurve curve = improvement_curve(qtd, td);
            write_text_file(path("improvement_" + id + ".csv"),
                            csv_emit(improvement_to_csv(curve)));
            if (r == RewardKind::StudentT2) {
                heavy_curves.push_back(curve);
                heavy_labels.push_back(id);
            } else {
                grid_curves.push_back(curve);
                grid_labels.push_back(id);
            }
            std::cout << "[" << elapsed() << "s] sweeps done: " << id << "\n";
        }
    }
    write_text_file(path("improvement_grid.svg"),
                    render_svg(figure_improvement(grid_curves, grid_labels)));
    write_text_file(path("improvement_t2.svg"),
                    render_svg(figure_improvement(heavy_curves, heavy_labels)));

    // Phase 3: reward-scale study on the cycle structure.
    {
        ExperimentConfig proto =
            repro_config(suite_spec(TransitionKind::Cycle, RewardKind::Gaussian, args.seed),
                         AgentKind::Qtd, args);
        const std::vector<double> sigmas = {0.01, 0.1, 0.3, 1.0, 3.0};
        const auto curves = reward_scale_sweep(proto, sigmas, jobs);
        std::vector<ImprovementCurve> figs;
        std::vector<std::string> labels;
        for (const auto& [sigma, curve] : curves) {
            char label[32];
            std::snprintf(label, sizeof(label), "sigma=%g", sigma);
            write_text_file(path(std::string("reward_scale_") + label + ".csv"),
                            csv_emit(improvement_to_csv(curve)));
            figs.push_back(curve);
            labels.emplace_back(label);
        }
        write_text_file(path("reward_scale.svg"), render_svg(figure_improvement(figs, labels)));
        std::cout << "[" << elapsed() << "s] reward-scale study done\n";
    }

    std::cout << "repro complete in " << elapsed() << "s; outputs under " << args.outdir << "/\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"qtdlab: tabular policy evaluation with TD, QTD and PQTD"};
    app.require_subcommand(1);

    GenEnvArgs gen;
    CLI::App* gen_cmd = app.add_subcommand("gen-env", "Realize an environment and write it to a file");
    gen_cmd->add_option("--kind", gen.kind, "dirichlet|garnet|cycle|skewed")->required();
    gen_cmd->add_option("--rewards", gen.rewards, "pointmass|gaussian|exponential|studentt2");
    gen_cmd->add_option("--n", gen.n_states, "number of states (default 20, cycle 10)");
    gen_cmd->add_option("--branching", gen.branching, "Garnet branching factor");
    gen_cmd->add_option("--gamma", gen.gamma, "discount factor");
    gen_cmd->add_option("--reward-scale", gen.reward_scale, "Gaussian reward std deviation");
    gen_cmd->add_option("--seed", gen.seed, "generator seed");
    gen_cmd->add_option("--skew", gen.skew, "skewed env: mean contribution of the rare branch");
    gen_cmd->add_option("--tail-prob", gen.tail_prob, "skewed env: rare-branch probability");
    gen_cmd->add_option("-o,--out", gen.out, "output file")->required();

    SweepArgs sw;
    CLI::App* sweep_cmd = app.add_subcommand("run-sweep", "Run a learning-rate sweep from a config file");
    sweep_cmd->add_option("--config", sw.config_path, "experiment config file")->required();
    sweep_cmd->add_option("--env", sw.env_path, "realized MRP file overriding [env]");
    sweep_cmd->add_option("-o,--out", sw.out, "output CSV")->required();
    sweep_cmd->add_flag("--paper-scale", sw.paper_scale, "use 1000 runs per cell");
    sweep_cmd->add_option("--jobs", sw.jobs, "worker threads (default: hardware)");

    FixedPointArgs fp;
    CLI::App* fp_cmd = app.add_subcommand("fixed-point", "Distributional DP certification table");
    fp_cmd->add_option("--env", fp.env_path, "realized MRP file")->required();
    fp_cmd->add_option("--m", fp.m_list, "quantile counts")->delimiter(',');
    fp_cmd->add_option("--operator", fp.op, "qtd|pqtd");
    fp_cmd->add_option("--tol", fp.tol, "iteration tolerance");
    fp_cmd->add_option("-o,--out", fp.out, "output CSV")->required();
    fp_cmd->add_option("--dump-theta", fp.dump_theta,
                       "also write the largest-m fixed table as (state,i,theta) CSV");
    fp_cmd->add_option("--jobs", fp.jobs, "worker threads");

    ImprovementArgs imp;
    CLI::App* imp_cmd = app.add_subcommand("improvement", "Optimal-MSE ratio of two swept configs");
    imp_cmd->add_option("--config-a", imp.config_a, "numerator config")->required();
    imp_cmd->add_option("--config-b", imp.config_b, "denominator config")->required();
    imp_cmd->add_option("--env", imp.env_path, "realized MRP file overriding both [env] sections");
    imp_cmd->add_option("-o,--out", imp.out, "output CSV")->required();
    imp_cmd->add_flag("--paper-scale", imp.paper_scale, "use 1000 runs per cell");
    imp_cmd->add_option("--jobs", imp.jobs, "worker threads");

    PlotArgs plot;
    CLI::App* plot_cmd = app.add_subcommand("plot", "Render a figure from result CSVs");
    plot_cmd->add_option("--kind", plot.kind,
                         "mse_vs_lr|improvement_vs_updates|error_vs_m|optimal_lr_vs_updates")
        ->required();
    plot_cmd->add_option("--in", plot.inputs, "input CSV files")->required()->delimiter(',');
    plot_cmd->add_option("--labels", plot.labels, "series labels")->delimiter(',');
    plot_cmd->add_option("--checkpoint", plot.checkpoint, "checkpoint for mse_vs_lr (-1 = last)");
    plot_cmd->add_option("--title", plot.title, "figure title override");
    plot_cmd->add_option("-o,--out", plot.out, "output SVG")->required();

    ReproArgs repro;
    CLI::App* repro_cmd = app.add_subcommand("repro", "Desk-scale reproduction of the study");
    repro_cmd->add_option("--outdir", repro.outdir, "output directory");
    repro_cmd->add_flag("--paper-scale", repro.paper_scale, "1000 runs per cell");
    repro_cmd->add_option("--jobs", repro.jobs, "worker threads");
    repro_cmd->add_option("--seed", repro.seed, "suite seed");
    repro_cmd->add_option("--updates", repro.n_updates, "updates per run");
    repro_cmd->add_option("--runs", repro.n_runs, "runs per cell at desk scale");

    gen_cmd->callback([&] { cmd_gen_env(gen); });
    sweep_cmd->callback([&] { cmd_run_sweep(sw); });
    fp_cmd->callback([&] { cmd_fixed_point(fp); });
    imp_cmd->callback([&] { cmd_improvement(imp); });
    plot_cmd->callback([&] { cmd_plot(plot); });
    repro_cmd->callback([&] { cmd_repro(repro); });

    std::vector<const char*> argv;
    argv.push_back("qtdlab");
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace qtdlab
