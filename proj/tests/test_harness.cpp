#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "wgsum/arith.hpp"
#include "wgsum/circle.hpp"
#include "wgsum/dioph.hpp"
#include "wgsum/errors.hpp"
#include "wgsum/expsum.hpp"
#include "wgsum/harness.hpp"
#include "wgsum/parallel.hpp"
#include "wgsum/singular.hpp"

using namespace wgsum;
using doctest::Approx;

namespace fs = std::filesystem;

static std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

static std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) out.push_back(line);
    return out;
}

static std::vector<std::string> cells_of(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string cell;
    while (std::getline(is, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

static fs::path tmp_file(const std::string& name) {
    return fs::temp_directory_path() / name;
}

static int cli(std::vector<std::string> args) {
    args.insert(args.begin(), "wgsum");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

TEST_CASE("parse: flags and defaults") {
    auto cfg = parse_config({"sum", "--k", "4", "--x", "1e6", "--theta", "0.9",
                             "--alpha", "1/7"});
    CHECK(cfg.subcommand == "sum");
    CHECK(cfg.k == 4);
    CHECK(cfg.x == 1e6);
    CHECK(cfg.theta == 0.9);
    CHECK(cfg.delta == 1e-4); // default
    CHECK(cfg.bits == 320);   // default
    CHECK(cfg.alpha == "1/7");
}

TEST_CASE("parse: alpha exactness is enforced where consumed") {
    CHECK_THROWS_AS(parse_config({"sum", "--alpha", "0.3333"}), usage_error);
    CHECK_THROWS_AS(parse_config({"vaughan", "--alpha", "0.3333"}), usage_error);
    auto ok = parse_config({"sum", "--alpha", "0.3333@20"});
    CHECK(ok.alpha == "0.3333@20");
    // subcommands that never read alpha do not validate it
    auto d = parse_config({"params", "--alpha", "0.3333"});
    CHECK(d.subcommand == "params");
}

TEST_CASE("parse: config file merges under explicit flags") {
    auto path = tmp_file("wgsum_test_cfg.ini");
    {
        std::ofstream out(path);
        out << "# comment\ndelta = 1e-3\ntheta = 0.85\nQ-S = 33\n";
    }
    auto cfg = parse_config({"params", "--config", path.string()});
    CHECK(cfg.delta == 1e-3);
    CHECK(cfg.theta == 0.85);
    CHECK(cfg.Q_S == 33);
    auto cfg2 = parse_config(
        {"params", "--config", path.string(), "--delta", "2e-4"});
    CHECK(cfg2.delta == 2e-4); // flag wins
    CHECK(cfg2.theta == 0.85); // file fills the rest
    fs::remove(path);
}

TEST_CASE("parse: unknown keys and flags are usage errors") {
    auto path = tmp_file("wgsum_test_bad.ini");
    {
        std::ofstream out(path);
        out << "deltaz = 3\n";
    }
    CHECK_THROWS_AS(parse_config({"params", "--config", path.string()}),
                    usage_error);
    fs::remove(path);
    CHECK_THROWS_AS(parse_config({"params", "--bogus", "1"}), usage_error);
    CHECK_THROWS_AS(parse_config({}), usage_error);            // no subcommand
    CHECK_THROWS_AS(parse_config({"frobnicate"}), usage_error);
    CHECK_THROWS_AS(parse_config({"params", "--k", "abc"}), usage_error);
}

TEST_CASE("serialize round-trips; hash ignores execution knobs") {
    auto cfg = parse_config({"hua", "--k", "3", "--X", "12", "--Y", "5", "--s",
                             "4", "--method", "quadrature", "--workers", "4",
                             "--seed", "9"});
    auto back = parse_config(serialize(cfg));
    CHECK(back == cfg);
    CHECK(config_hash(back) == config_hash(cfg));
    CHECK(config_hash(cfg).size() == 16);

    auto other = cfg;
    other.workers = 1;
    other.out = "elsewhere.csv";
    other.no_log = true;
    CHECK(config_hash(other) == config_hash(cfg));

    auto diff = cfg;
    diff.X = 13;
    CHECK(config_hash(diff) != config_hash(cfg));
}

TEST_CASE("params: derived values in one CSV row") {
    auto cfg = parse_config(
        {"params", "--k", "3", "--theta", "0.9", "--x", "1e6", "--delta", "1e-4"});
    auto out = run_config(cfg);
    auto lines = lines_of(out.csv);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "t_k,K,sigma_k,rho,P,Q,U,V");
    SumParams p = make_sum_params(3, 1e6, 0.9, 1e-4, 0.05);
    std::string want = "6,96,1/12," + g17(p.rho) + ',' + g17(p.P) + ',' +
                       g17(p.Q) + ',' + g17(p.U) + ',' + g17(p.V);
    CHECK(lines[1] == want);
    CHECK(out.payload.find("\"t_k\":6") != std::string::npos);
}

TEST_CASE("reps: reads coefficients off the convolution") {
    auto cfg = parse_config(
        {"reps", "--k", "3", "--s", "2", "--X", "2", "--Y", "1", "--n", "16"});
    auto out = run_config(cfg);
    auto lines = lines_of(out.csv);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "n,s,k,X,Y,value");
    double want = std::pow(std::log(2.0), 2); // both summands are 2^3
    CHECK(lines[1] == "16,2,3,2,1," + g17(want));
    CHECK(std::stod(cells_of(lines[1])[5]) == Approx(0.4805).epsilon(1e-3));

    auto range = parse_config({"reps", "--k", "3", "--s", "2", "--X", "2", "--Y",
                               "1", "--n", "16", "--n-hi", "35"});
    auto out2 = run_config(range);
    auto lines2 = lines_of(out2.csv);
    REQUIRE(lines2.size() == 21);
    auto conv = convolve_power(
        weight_series(2, 1, 3, WeightSeriesKind::PrimeLogAtPk), 2);
    for (std::size_t i = 1; i < lines2.size(); ++i) {
        auto cells = cells_of(lines2[i]);
        CHECK(cells[0] == std::to_string(15 + i));
        CHECK(cells[5] == g17(conv.at(15 + static_cast<int64_t>(i))));
    }
}

TEST_CASE("sum: matches a direct evaluation") {
    auto cfg = parse_config({"sum", "--k", "3", "--x", "2000", "--theta", "0.9",
                             "--delta", "1e-4", "--alpha", "1/7"});
    auto out = run_config(cfg);
    auto lines = lines_of(out.csv);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "k,x,theta,alpha,real,imag,abs,terms");

    SumParams p = make_sum_params(3, 2000, 0.9, 1e-4);
    auto [lo, hi] = integer_range(p.x_exact, Rat(p.x_exact + p.y_exact));
    WeightTable table = sieve_weights(lo, hi, WeightKind::VonMangoldt);
    PhaseContext ctx(Rat(1, 7), 3, static_cast<uint64_t>(hi), 320);
    SumValue v = weighted_sum(ctx, table);

    auto cells = cells_of(lines[1]);
    REQUIRE(cells.size() == 8);
    CHECK(cells[3] == "1/7");
    CHECK(cells[4] == g17(v.value.real()));
    CHECK(cells[5] == g17(v.value.imag()));
    CHECK(cells[6] == g17(v.abs()));
    CHECK(cells[7] == std::to_string(v.terms));
}

TEST_CASE("dissect: one row per arc and gap") {
    auto cfg = parse_config({"dissect", "--k", "3", "--x", "100000", "--theta",
                             "0.9", "--delta", "1e-4"});
    auto out = run_config(cfg);
    auto d = build_dissection(make_sum_params(3, 100000, 0.9, 1e-4));
    auto lines = lines_of(out.csv);
    REQUIRE(lines.size() == 1 + d.arcs.size() + d.minor.size());
    CHECK(lines[0] == "type,q,a,lo,hi");
    auto first = cells_of(lines[1]);
    CHECK(first[0] == "major");
    CHECK(first[1] == "1");
    CHECK(first[2] == "0");
    CHECK(cells_of(lines[1 + d.arcs.size()])[0] == "minor");
}

TEST_CASE("hua: method selection and values") {
    auto cfg = parse_config({"hua", "--k", "3", "--X", "10", "--Y", "3", "--s", "2"});
    auto out = run_config(cfg);
    auto series = weight_series(10, 3, 3, WeightSeriesKind::PrimeLogAtPk);
    double parseval = hua_moment(series, 2, HuaMethod::Parseval);
    auto cells = cells_of(lines_of(out.csv)[1]);
    CHECK(cells[4] == "parseval"); // the default
    CHECK(cells[5] == g17(parseval));
    CHECK(parseval == Approx(16.115433253847595).epsilon(1e-12));

    auto quad = parse_config({"hua", "--k", "3", "--X", "10", "--Y", "3", "--s",
                              "2", "--method", "quadrature"});
    double qv = std::stod(cells_of(lines_of(run_config(quad).csv)[1])[5]);
    CHECK(qv == Approx(parseval).epsilon(1e-9));

    CHECK_THROWS_AS(parse_config({"hua", "--method", "simpson"}), usage_error);
    CHECK_THROWS_AS(parse_config({"params", "--method", "parseval"}), usage_error);
}

TEST_CASE("sseries: per-q rows, summary on the last row") {
    auto cfg = parse_config(
        {"sseries", "--n", "90", "--s", "6", "--k", "3", "--Q-S", "50"});
    auto out = run_config(cfg);
    auto r = singular_series(90, 6, 3, 50, SeriesMethod::Both);
    auto lines = lines_of(out.csv);
    REQUIRE(lines.size() == 51);
    CHECK(lines[0] == "q,term,partial_sum,euler_product_total,tail_estimate");
    auto last = cells_of(lines[50]);
    REQUIRE(last.size() == 5);
    CHECK(last[0] == "50");
    CHECK(last[2] == g17(r.total)); // same ascending accumulation
    CHECK(last[3] == g17(r.euler_product_total));
    CHECK(last[4] == g17(r.tail_estimate));
    CHECK(cells_of(lines[1])[3].empty()); // summary only on the last row

    auto euler = parse_config({"sseries", "--n", "90", "--s", "6", "--k", "3",
                               "--Q-S", "50", "--method", "euler"});
    auto r2 = singular_series(90, 6, 3, 50, SeriesMethod::EulerProduct);
    CHECK(lines_of(run_config(euler).csv).size() == 1 + r2.terms.size());
}

TEST_CASE("scan: identical CSV for 1 and 4 workers") {
    int saved = worker_count();
    std::vector<std::string> base = {"scan",    "--k",     "3",      "--x",
                                     "100000",  "--theta", "0.9",    "--delta",
                                     "1e-4",    "--samples", "8",    "--seed",
                                     "3"};
    auto one = base, four = base;
    one.insert(one.end(), {"--workers", "1"});
    four.insert(four.end(), {"--workers", "4"});
    auto cfg1 = parse_config(one);
    auto cfg4 = parse_config(four);
    CHECK(config_hash(cfg1) == config_hash(cfg4));
    auto out1 = run_config(cfg1);
    auto out4 = run_config(cfg4);
    CHECK(out1.csv == out4.csv);
    CHECK(out1.csv.rfind("# max_ratio ", 0) == 0);
    set_worker_count(saved);
}

TEST_CASE("report: deterministic markdown and artifacts") {
    auto cfg = parse_config({"report", "--k", "3", "--x", "100000", "--theta",
                             "0.9", "--delta", "1e-4", "--X", "10", "--Y", "3",
                             "--s", "2", "--n", "100", "--Q-S", "50",
                             "--samples", "5", "--seed", "2"});
    auto out = run_config(cfg);
    CHECK(out.csv.rfind("# wgsum report", 0) == 0);
    CHECK(out.csv.find("max |S_k| / bound") != std::string::npos);
    CHECK(out.csv.find("| 6 | 96 | 1/12 |") != std::string::npos);
    REQUIRE(out.artifacts.size() == 6);
    CHECK(out.artifacts[0].first == "scan.csv");
    CHECK(out.artifacts[0].second.rfind("# max_ratio ", 0) == 0);
    CHECK(out.artifacts[3].first == "plot_ratio_vs_q.py");
    CHECK(out.artifacts[3].second.find("matplotlib") != std::string::npos);

    auto again = run_config(cfg);
    CHECK(again.csv == out.csv);
    for (std::size_t i = 0; i < out.artifacts.size(); ++i)
        CHECK(again.artifacts[i].second == out.artifacts[i].second);
}

TEST_CASE("plot scripts: schema checked, comments skipped") {
    auto csv = tmp_file("wgsum_test_reps.csv");
    {
        std::ofstream f(csv);
        f << "n,s,k,X,Y,value\n16,2,3,2,1,0.48\n";
    }
    auto script = tmp_file("wgsum_test_plot.py");
    emit_plot_script(csv.string(), PlotKind::RhoVsN, script.string());
    std::ifstream in(script);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str().find("matplotlib") != std::string::npos);
    CHECK(buf.str().find(csv.string()) != std::string::npos);
    fs::remove(script);

    CHECK_THROWS_WITH_AS(
        emit_plot_script(csv.string(), PlotKind::RatioVsQ, script.string()),
        doctest::Contains("missing columns: q, ratio"), usage_error);
    fs::remove(csv);

    auto scan_csv = tmp_file("wgsum_test_scan.csv");
    {
        std::ofstream f(scan_csv);
        f << "# max_ratio 0.5\nk,x,theta,q,a,offset,abs_sum,rhs,ratio,arc\n";
    }
    emit_plot_script(scan_csv.string(), PlotKind::RatioVsQ, script.string());
    fs::remove(scan_csv);
    fs::remove(script);
}

TEST_CASE("cli: exit codes follow the error taxonomy") {
    auto out_file = tmp_file("wgsum_test_out.csv");

    CHECK(cli({"params", "--k", "3", "--theta", "0.9", "--x", "1e6", "--delta",
               "1e-4", "--out", out_file.string(), "--no-log"}) == 0);
    {
        std::ifstream in(out_file);
        std::string first;
        std::getline(in, first);
        CHECK(first == "t_k,K,sigma_k,rho,P,Q,U,V");
    }
    fs::remove(out_file);

    CHECK(cli({"params", "--k", "abc", "--no-log"}) == 2);
    CHECK(cli({"frobnicate"}) == 2);
    CHECK(cli({"sum", "--alpha", "0.3333", "--no-log"}) == 2);
    CHECK(cli({"params", "--theta", "0.5", "--k", "3", "--x", "1e6", "--delta",
               "1e-4", "--no-log"}) == 3);
    CHECK(cli({"reps", "--X", "2000", "--Y", "1000", "--k", "3", "--s", "2",
               "--n", "10", "--no-log"}) == 4);
}

TEST_CASE("cli: results log accumulates one record per run") {
    auto out_file = tmp_file("wgsum_test_out2.csv");
    auto log_file = tmp_file("wgsum_test_log.jsonl");
    fs::remove(log_file);

    std::vector<std::string> args = {"params", "--k",   "3",    "--theta",
                                     "0.9",    "--x",   "1e6",  "--delta",
                                     "1e-4",   "--out", out_file.string(),
                                     "--log",  log_file.string()};
    CHECK(cli(args) == 0);
    CHECK(cli(args) == 0);

    std::ifstream in(log_file);
    std::vector<std::string> recs;
    std::string line;
    while (std::getline(in, line)) recs.push_back(line);
    REQUIRE(recs.size() == 2);
    for (const auto& rec : recs) {
        CHECK(rec.find("\"cmd\":\"params\"") != std::string::npos);
        CHECK(rec.find("\"version\":\"0.1.0\"") != std::string::npos);
        CHECK(rec.find("\"config\":\"") != std::string::npos);
        CHECK(rec.find("\"t_k\":6") != std::string::npos);
        CHECK(rec.find("\"ts\":\"") != std::string::npos);
    }
    // same config -> same hash in both records
    auto hash_of = [](const std::string& rec) {
        auto pos = rec.find("\"config\":\"");
        return rec.substr(pos + 10, 16);
    };
    CHECK(hash_of(recs[0]) == hash_of(recs[1]));

    fs::remove(out_file);
    fs::remove(log_file);
}
