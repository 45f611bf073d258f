#include <doctest.h>

#include <filesystem>
#include <unistd.h>
#include <string>
#include <vector>

#include "cli/commands.hpp"
#include "cli/figures.hpp"
#include "cli/svg.hpp"
#include "qtdlab/config.hpp"
#include "qtdlab/csv.hpp"
#include "qtdlab/harness.hpp"

using namespace qtdlab;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path dir;
    TempDir() {
        dir = fs::temp_directory_path() /
              ("qtdlab_cli_test_" + std::to_string(::getpid()) + "_" +
               std::to_string(counter()++));
        fs::create_directories(dir);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(dir, ec);
    }
    std::string file(const std::string& name) const { return (dir / name).string(); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

std::string small_experiment_text(const std::string& agent) {
    return "[env]\n"
           "kind = garnet\n"
           "rewards = exponential\n"
           "n_states = 8\n"
           "branching = 3\n"
           "seed = 12\n"
           "[experiment]\n"
           "agent = " + agent + "\n"
           "m = 8\n"
           "lr_grid = 0.05 0.2 0.8\n"
           "n_updates = 120\n"
           "checkpoints = 30 120\n"
           "n_runs = 6\n"
           "base_seed = 3\n";
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("gen-env writes a deterministic loadable environment") {
    TempDir tmp;
    const std::vector<std::string> args = {"gen-env", "--kind",  "cycle", "--n",
                                           "10",      "--rewards", "gaussian", "--seed",
                                           "7",       "-o",        tmp.file("env.cfg")};
    CHECK(run_cli(args) == 0);
    const std::string first = read_text_file(tmp.file("env.cfg"));

    CHECK(run_cli({"gen-env", "--kind", "cycle", "--n", "10", "--rewards", "gaussian", "--seed",
                   "7", "-o", tmp.file("env2.cfg")}) == 0);
    CHECK(first == read_text_file(tmp.file("env2.cfg")));

    const Mrp mrp = mrp_from_config(ConfigDoc::parse(first));
    CHECK(mrp.n_states() == 10);
    for (int x = 0; x < 10; ++x) CHECK(mrp.p(x, (x + 1) % 10) == 1.0);
}

TEST_CASE("gen-env rejects invalid flag combinations") {
    TempDir tmp;
    CHECK(run_cli({"gen-env", "--kind", "garnet", "--n", "20", "--branching", "30", "-o",
                   tmp.file("x.cfg")}) == 1);
    CHECK(run_cli({"gen-env", "--kind", "triangular", "-o", tmp.file("x.cfg")}) == 1);
    CHECK(run_cli({"gen-env"}) == 1);  // missing required options
    CHECK_FALSE(fs::exists(tmp.file("x.cfg")));
}

TEST_CASE("run-sweep produces the documented CSV and a summary") {
    TempDir tmp;
    write_text_file(tmp.file("exp.cfg"), small_experiment_text("qtd"));
    CHECK(run_cli({"run-sweep", "--config", tmp.file("exp.cfg"), "-o", tmp.file("sweep.csv"),
                   "--jobs", "2"}) == 0);
    const CsvTable table = csv_parse(read_text_file(tmp.file("sweep.csv")));
    CHECK(table.header == std::vector<std::string>{"env_id", "agent", "m", "lr", "checkpoint",
                                                   "mse_mean", "mse_stderr", "n_runs",
                                                   "n_diverged"});
    CHECK(table.rows.size() == 6);  // 3 lrs x 2 checkpoints
    const SweepSummary s = sweep_from_csv(table);
    CHECK(s.env_id == "garnet-exponential");
    CHECK(s.n_runs == 6);
}

TEST_CASE("run-sweep reports config errors with diagnostics") {
    TempDir tmp;
    write_text_file(tmp.file("bad.cfg"), "[env]\nkind = cycle\n");  // missing rewards etc.
    CHECK(run_cli({"run-sweep", "--config", tmp.file("bad.cfg"), "-o", tmp.file("o.csv")}) == 1);

    std::string text = small_experiment_text("qtd");
    const auto pos = text.find("lr_grid = 0.05 0.2 0.8");
    text.replace(pos, std::string("lr_grid = 0.05 0.2 0.8").size(), "lr_grid =");
    write_text_file(tmp.file("empty_grid.cfg"), text);
    CHECK(run_cli({"run-sweep", "--config", tmp.file("empty_grid.cfg"), "-o",
                   tmp.file("o.csv")}) == 1);
}

TEST_CASE("run-sweep flags divergence with exit code 2 but still writes results") {
    TempDir tmp;
    std::string text = small_experiment_text("qtd");
    const auto pos = text.find("lr_grid = 0.05 0.2 0.8");
    text.replace(pos, std::string("lr_grid = 0.05 0.2 0.8").size(), "lr_grid = 1e200");
    write_text_file(tmp.file("diverge.cfg"), text);
    CHECK(run_cli({"run-sweep", "--config", tmp.file("diverge.cfg"), "-o",
                   tmp.file("div.csv")}) == 2);
    const SweepSummary s = sweep_from_csv(csv_parse(read_text_file(tmp.file("div.csv"))));
    CHECK(s.cells.front().n_diverged == 6);
}

TEST_CASE("run-sweep can use a realized environment file") {
    TempDir tmp;
    CHECK(run_cli({"gen-env", "--kind", "skewed", "--skew", "1.0", "--gamma", "0.9", "-o",
                   tmp.file("skew.cfg")}) == 0);
    write_text_file(tmp.file("exp.cfg"), small_experiment_text("qtd"));
    CHECK(run_cli({"run-sweep", "--config", tmp.file("exp.cfg"), "--env", tmp.file("skew.cfg"),
                   "-o", tmp.file("sweep.csv")}) == 0);
    const SweepSummary s = sweep_from_csv(csv_parse(read_text_file(tmp.file("sweep.csv"))));
    CHECK(s.env_id == "skewed");
}

TEST_CASE("fixed-point emits bound columns and distinguishes families") {
    TempDir tmp;
    CHECK(run_cli({"gen-env", "--kind", "garnet", "--rewards", "pointmass", "--seed", "5", "-o",
                   tmp.file("pm.cfg")}) == 0);
    CHECK(run_cli({"fixed-point", "--env", tmp.file("pm.cfg"), "--m", "1,2,4", "-o",
                   tmp.file("pm.csv"), "--jobs", "2"}) == 0);
    const auto pm_rows = fixed_point_from_csv(csv_parse(read_text_file(tmp.file("pm.csv"))));
    REQUIRE(pm_rows.size() == 3);
    for (const auto& r : pm_rows) {
        CHECK(r.converged);
        CHECK(std::isfinite(r.bound_41));
        CHECK(r.value_error_sup <= r.bound_41 + 1e-8);
    }
    // m doubling halves the support bound exactly.
    CHECK(pm_rows[1].bound_41 == doctest::Approx(pm_rows[0].bound_41 / 2).epsilon(1e-12));
    CHECK(pm_rows[2].bound_41 == doctest::Approx(pm_rows[1].bound_41 / 2).epsilon(1e-12));

    CHECK(run_cli({"gen-env", "--kind", "cycle", "--rewards", "gaussian", "--seed", "5", "-o",
                   tmp.file("g.cfg")}) == 0);
    CHECK(run_cli({"fixed-point", "--env", tmp.file("g.cfg"), "--m", "1,2", "-o",
                   tmp.file("g.csv"), "--dump-theta", tmp.file("theta.csv")}) == 0);
    const auto g_rows = fixed_point_from_csv(csv_parse(read_text_file(tmp.file("g.csv"))));
    for (const auto& r : g_rows) {
        CHECK(std::isinf(r.bound_41));
        CHECK(std::isfinite(r.bound_42));
    }
    const CsvTable theta = csv_parse(read_text_file(tmp.file("theta.csv")));
    CHECK(theta.header == std::vector<std::string>{"state", "i", "theta"});
    CHECK(theta.rows.size() == 20);  // 10 states x m=2
}

TEST_CASE("improvement against itself is flat at one") {
    TempDir tmp;
    write_text_file(tmp.file("a.cfg"), small_experiment_text("qtd"));
    CHECK(run_cli({"improvement", "--config-a", tmp.file("a.cfg"), "--config-b", tmp.file("a.cfg"),
                   "-o", tmp.file("imp.csv"), "--jobs", "2"}) == 0);
    const ImprovementCurve curve =
        improvement_from_csv(csv_parse(read_text_file(tmp.file("imp.csv"))));
    for (const auto& p : curve.points) CHECK(p.ratio == 1.0);
}

TEST_CASE("plot renders byte-deterministic SVG with one polyline per agent") {
    TempDir tmp;
    write_text_file(tmp.file("td.cfg"), small_experiment_text("td"));
    write_text_file(tmp.file("qtd.cfg"), small_experiment_text("qtd"));
    REQUIRE(run_cli({"run-sweep", "--config", tmp.file("td.cfg"), "-o", tmp.file("td.csv")}) == 0);
    REQUIRE(run_cli({"run-sweep", "--config", tmp.file("qtd.cfg"), "-o", tmp.file("qtd.csv")}) ==
            0);

    CHECK(run_cli({"plot", "--kind", "mse_vs_lr", "--in", tmp.file("td.csv") + "," +
                   tmp.file("qtd.csv"), "-o", tmp.file("fig.svg")}) == 0);
    CHECK(run_cli({"plot", "--kind", "mse_vs_lr", "--in", tmp.file("td.csv") + "," +
                   tmp.file("qtd.csv"), "-o", tmp.file("fig2.svg")}) == 0);
    const std::string svg = read_text_file(tmp.file("fig.svg"));
    CHECK(svg == read_text_file(tmp.file("fig2.svg")));

    std::size_t polylines = 0;
    for (std::size_t pos = svg.find("<polyline"); pos != std::string::npos;
         pos = svg.find("<polyline", pos + 1)) {
        ++polylines;
    }
    CHECK(polylines == 2);  // one per agent
}

TEST_CASE("a 40-point sweep yields 40-vertex polylines") {
    SweepSummary s;
    s.env_id = "synthetic";
    s.agent = AgentKind::Td;
    s.m = 0;
    s.n_runs = 2;
    s.lr_grid = log_spaced_grid(5e-4, 1.0, 40);
    s.checkpoints = {1000};
    for (std::size_t i = 0; i < 40; ++i) {
        s.cells.push_back({1.0 + static_cast<double>(i), 0.05, 0});
    }
    const FigureSpec fig = figure_mse_vs_lr({s}, 1000);
    const std::string svg = render_svg(fig);

    const auto start = svg.find("<polyline points=\"");
    REQUIRE(start != std::string::npos);
    const auto from = start + std::string("<polyline points=\"").size();
    const auto end = svg.find('"', from);
    const std::string points = svg.substr(from, end - from);
    const std::size_t vertices = std::count(points.begin(), points.end(), ',');
    CHECK(vertices == 40);
}

TEST_CASE("improvement plot draws the unit reference line") {
    ImprovementCurve curve;
    curve.env_id = "synthetic";
    for (int cp : {10, 100, 1000}) curve.points.push_back({cp, 1.0, 0.1, 0.1, 1, 1, 0, 0});
    const std::string svg = render_svg(figure_improvement({curve}, {"flat"}));
    CHECK(svg.find("stroke-dasharray") != std::string::npos);
}

TEST_CASE("plot rejects schema mismatches naming the column") {
    TempDir tmp;
    write_text_file(tmp.file("bad.csv"), "a,b\n1,2\n");
    CHECK(run_cli({"plot", "--kind", "mse_vs_lr", "--in", tmp.file("bad.csv"), "-o",
                   tmp.file("fig.svg")}) == 1);
    CHECK(run_cli({"plot", "--kind", "nonsense", "--in", tmp.file("bad.csv"), "-o",
                   tmp.file("fig.svg")}) == 1);
}

TEST_CASE("base seed environment override changes results") {
    TempDir tmp;
    write_text_file(tmp.file("exp.cfg"), small_experiment_text("td"));
    REQUIRE(run_cli({"run-sweep", "--config", tmp.file("exp.cfg"), "-o", tmp.file("a.csv")}) == 0);
    ::setenv("QTDLAB_BASE_SEED", "4242", 1);
    REQUIRE(run_cli({"run-sweep", "--config", tmp.file("exp.cfg"), "-o", tmp.file("b.csv")}) == 0);
    ::unsetenv("QTDLAB_BASE_SEED");
    REQUIRE(run_cli({"run-sweep", "--config", tmp.file("exp.cfg"), "-o", tmp.file("c.csv")}) == 0);
    CHECK(read_text_file(tmp.file("a.csv")) != read_text_file(tmp.file("b.csv")));
    CHECK(read_text_file(tmp.file("a.csv")) == read_text_file(tmp.file("c.csv")));
}

}  // TEST_SUITE
