#include "wgsum/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "wgsum/arith.hpp"
#include "wgsum/bounds.hpp"
#include "wgsum/circle.hpp"
#include "wgsum/dioph.hpp"
#include "wgsum/errors.hpp"
#include "wgsum/expsum.hpp"
#include "wgsum/parallel.hpp"
#include "wgsum/rat.hpp"
#include "wgsum/singular.hpp"
#include "wgsum/vaughan.hpp"

namespace wgsum {

namespace {

using nlohmann::json;

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const std::vector<std::pair<const char*, const char*>> kSubcommands = {
    {"params", "derived sum/dissection parameters for (k, x, theta, delta)"},
    {"sum", "weighted exponential sum over primes in (x, x + x^theta]"},
    {"dissect", "major/minor arc dissection as exact rational intervals"},
    {"vaughan", "Vaughan decomposition S1 - S2 - S3 and its residual"},
    {"scan", "random minor-arc scan of |S_k| against the two-term bound"},
    {"reps", "weighted representation counts rho_s(n) over a prime window"},
    {"hua", "moment of the window exponential sum over the circle"},
    {"sseries", "truncated singular series and Euler product"},
    {"report", "small end-to-end run: CSV artifacts, plot scripts, summary"},
};

std::unique_ptr<CLI::App> build_app(RunConfig& cfg) {
    auto app = std::make_unique<CLI::App>("Waring-Goldbach exponential sum workbench");
    app->add_option("--k", cfg.k, "power in the phase n^k alpha");
    app->add_option("--x", cfg.x, "interval center; the window is (x, x + x^theta]");
    app->add_option("--theta", cfg.theta, "interval exponent, 3/4 < theta <= 1");
    app->add_option("--delta", cfg.delta, "arc-size parameter");
    app->add_option("--epsilon", cfg.epsilon, "epsilon in the bound exponents");
    app->add_option("--X", cfg.X, "prime window center (circle side)");
    app->add_option("--Y", cfg.Y, "prime window half-width, |p - X| <= Y");
    app->add_option("--s", cfg.s, "number of summands / moment order");
    app->add_option("--n", cfg.n, "target integer");
    app->add_option("--n-hi", cfg.n_hi, "end of the n range (reps)");
    app->add_option("--Q-S", cfg.Q_S, "singular series truncation");
    app->add_option("--alpha", cfg.alpha, "a/q exact, or d.ddd@B fixed point");
    app->add_option("--samples", cfg.samples, "sample count (scan, report)");
    app->add_option("--seed", cfg.seed, "sampling seed");
    app->add_option("--bits", cfg.bits, "fixed-point phase precision");
    app->add_option("--workers", cfg.workers, "worker threads (0: library default)");
    app->add_option("--method", cfg.method,
                    "hua: parseval|quadrature; sseries: truncate|euler|both");
    app->add_option("--out", cfg.out, "output file (report: directory)");
    app->add_option("--log", cfg.log_file, "results log path");
    app->add_flag("--no-log", cfg.no_log, "skip the results log");
    app->set_config("--config", "", "key = value file; explicit flags win");
    app->allow_config_extras(CLI::config_extras_mode::error);
    for (const auto& [name, desc] : kSubcommands)
        app->add_subcommand(name, desc)->fallthrough();
    app->require_subcommand(1);
    return app;
}

// post-parse validation shared by parse_config and run_cli
void finalize(RunConfig& cfg, const CLI::App& app) {
    for (const auto& [name, desc] : kSubcommands) {
        (void)desc;
        if (app.got_subcommand(name)) {
            cfg.subcommand = name;
            break;
        }
    }
    require(!cfg.subcommand.empty(), "harness: no subcommand after parse");
    if (cfg.subcommand == "sum" || cfg.subcommand == "vaughan")
        parse_alpha(cfg.alpha); // rejects bare decimals up front
    if (!cfg.method.empty()) {
        bool ok = false;
        if (cfg.subcommand == "hua")
            ok = cfg.method == "parseval" || cfg.method == "quadrature";
        else if (cfg.subcommand == "sseries")
            ok = cfg.method == "truncate" || cfg.method == "euler" ||
                 cfg.method == "both";
        if (!ok)
            throw usage_error("--method " + cfg.method + " is not valid for " +
                              cfg.subcommand);
    }
}

std::string iso_now() {
    std::time_t t = std::chrono::system_clock::to_time_t(
        std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// ---------------------------------------------------------------- plots

struct PlotSpec {
    const char* xcol;
    const char* ycol;
    const char* style;
    const char* title;
    bool logx;
};

PlotSpec plot_spec(PlotKind kind) {
    switch (kind) {
        case PlotKind::RatioVsQ:
            return {"q", "ratio", ".", "minor-arc ratio vs q", true};
        case PlotKind::RhoVsN:
            return {"n", "value", ".-", "weighted representation count", false};
        case PlotKind::SeriesConvergence:
            return {"q", "partial_sum", "-", "singular series partial sums", true};
    }
    throw domain_error("plot: unknown kind");
}

void check_plot_schema(const std::string& header, PlotKind kind) {
    std::vector<std::string> cols;
    std::string cell;
    std::istringstream is(header);
    while (std::getline(is, cell, ',')) {
        if (!cell.empty() && cell.back() == '\r') cell.pop_back();
        cols.push_back(cell);
    }
    const PlotSpec spec = plot_spec(kind);
    std::string missing;
    for (const char* want : {spec.xcol, spec.ycol})
        if (std::find(cols.begin(), cols.end(), want) == cols.end())
            missing += std::string(missing.empty() ? "" : ", ") + want;
    if (!missing.empty())
        throw usage_error("plot script: csv is missing columns: " + missing);
}

std::string first_header(const std::string& csv) {
    std::istringstream is(csv);
    std::string line;
    while (std::getline(is, line) && (line.empty() || line[0] == '#')) {}
    return line;
}

std::string make_plot_script(const std::string& csv_path, PlotKind kind) {
    const PlotSpec spec = plot_spec(kind);
    std::filesystem::path png(csv_path);
    png.replace_extension(".png");
    std::ostringstream os;
    os << "#!/usr/bin/env python3\n"
       << "# " << spec.title << "; reads " << csv_path << ", writes "
       << png.string() << "\n"
       << "import csv\n"
       << "\n"
       << "import matplotlib\n"
       << "\n"
       << "matplotlib.use(\"Agg\")\n"
       << "import matplotlib.pyplot as plt\n"
       << "\n"
       << "xs, ys = [], []\n"
       << "with open(\"" << csv_path << "\") as fh:\n"
       << "    rows = (ln for ln in fh if not ln.startswith(\"#\"))\n"
       << "    for row in csv.DictReader(rows):\n"
       << "        x, y = row[\"" << spec.xcol << "\"], row[\"" << spec.ycol
       << "\"]\n"
       << "        if not x or not y or y == \"inf\":\n"
       << "            continue\n"
       << "        xs.append(float(x))\n"
       << "        ys.append(float(y))\n"
       << "plt.figure(figsize=(7.0, 4.5))\n"
       << "plt.plot(xs, ys, \"" << spec.style << "\", markersize=4, linewidth=0.9)\n";
    if (spec.logx) os << "plt.xscale(\"log\")\n";
    os << "plt.xlabel(\"" << spec.xcol << "\")\n"
       << "plt.ylabel(\"" << spec.ycol << "\")\n"
       << "plt.title(\"" << spec.title << "\")\n"
       << "plt.tight_layout()\n"
       << "plt.savefig(\"" << png.string() << "\", dpi=150)\n"
       << "print(\"wrote " << png.string() << "\")\n";
    return os.str();
}

// ----------------------------------------------------------- subcommands

RunOutput cmd_params(const RunConfig& cfg) {
    SumParams p = make_sum_params(cfg.k, cfg.x, cfg.theta, cfg.delta, cfg.epsilon);
    std::string csv = "t_k,K,sigma_k,rho,P,Q,U,V\n";
    csv += std::to_string(p.t_k) + ',' + std::to_string(p.bigK) + ",1/" +
           std::to_string(2 * p.t_k) + ',' + g17(p.rho) + ',' + g17(p.P) + ',' +
           g17(p.Q) + ',' + g17(p.U) + ',' + g17(p.V) + '\n';
    json payload{{"t_k", p.t_k}, {"K", p.bigK}, {"rho", p.rho},
                 {"P", p.P},     {"Q", p.Q},    {"circle_mode", p.circle_mode}};
    return {csv, payload.dump(), {}};
}

RunOutput cmd_sum(const RunConfig& cfg) {
    SumParams p = make_sum_params(cfg.k, cfg.x, cfg.theta, cfg.delta, cfg.epsilon);
    ExactReal alpha = parse_alpha(cfg.alpha);
    auto [lo, hi] = integer_range(p.x_exact, Rat(p.x_exact + p.y_exact));
    WeightTable table = sieve_weights(lo, hi, WeightKind::VonMangoldt);
    PhaseContext ctx(alpha.value, cfg.k, static_cast<uint64_t>(hi), cfg.bits);
    SumValue v = weighted_sum(ctx, table);
    std::string csv = "k,x,theta,alpha,real,imag,abs,terms\n";
    csv += std::to_string(cfg.k) + ',' + g17(cfg.x) + ',' + g17(cfg.theta) + ',' +
           cfg.alpha + ',' + g17(v.value.real()) + ',' + g17(v.value.imag()) +
           ',' + g17(v.abs()) + ',' + std::to_string(v.terms) + '\n';
    json payload{{"abs", v.abs()}, {"terms", v.terms}};
    return {csv, payload.dump(), {}};
}

RunOutput cmd_dissect(const RunConfig& cfg) {
    SumParams p = make_sum_params(cfg.k, cfg.x, cfg.theta, cfg.delta, cfg.epsilon);
    ArcDissection d = build_dissection(p);
    std::string csv = "type,q,a,lo,hi\n";
    for (const Arc& arc : d.arcs)
        csv += "major," + arc.q.get_str() + ',' + arc.a.get_str() + ',' +
               arc.lo.get_str() + ',' + arc.hi.get_str() + '\n';
    for (const auto& gap : d.minor)
        csv += "minor,,," + gap.first.get_str() + ',' + gap.second.get_str() + '\n';
    json payload{{"P", d.P_floor.get_str()},
                 {"arcs", d.arcs.size()},
                 {"gaps", d.minor.size()}};
    return {csv, payload.dump(), {}};
}

RunOutput cmd_vaughan(const RunConfig& cfg) {
    SumParams p = make_sum_params(cfg.k, cfg.x, cfg.theta, cfg.delta, cfg.epsilon);
    ExactReal alpha = parse_alpha(cfg.alpha);
    VaughanPlan plan = build_plan(p);
    auto [lo, hi] = integer_range(p.x_exact, Rat(p.x_exact + p.y_exact));
    (void)lo;
    PhaseContext ctx(alpha.value, cfg.k, static_cast<uint64_t>(hi), cfg.bits);
    Decomposition d = decompose(plan, ctx, p.x, p.y);
    double res = residual(plan, ctx, p.x, p.y);
    std::string csv =
        "k,x,theta,alpha,S1_re,S1_im,S2_re,S2_im,S3_re,S3_im,total_re,total_im,"
        "residual\n";
    std::complex<double> tot = d.total();
    csv += std::to_string(cfg.k) + ',' + g17(cfg.x) + ',' + g17(cfg.theta) + ',' +
           cfg.alpha + ',' + g17(d.S1.value.real()) + ',' + g17(d.S1.value.imag()) +
           ',' + g17(d.S2.value.real()) + ',' + g17(d.S2.value.imag()) + ',' +
           g17(d.S3.value.real()) + ',' + g17(d.S3.value.imag()) + ',' +
           g17(tot.real()) + ',' + g17(tot.imag()) + ',' + g17(res) + '\n';
    json payload{{"residual", res}, {"total_abs", std::abs(tot)}};
    return {csv, payload.dump(), {}};
}

RunOutput cmd_scan(const RunConfig& cfg) {
    SumParams p = make_sum_params(cfg.k, cfg.x, cfg.theta, cfg.delta, cfg.epsilon);
    ScanSpec spec;
    spec.count = cfg.samples;
    spec.seed = cfg.seed;
    ScanResult res = minor_arc_scan(p, spec);
    json payload{{"max_ratio", res.max_ratio},
                 {"records", res.records.size()},
                 {"skipped", res.notes.size()}};
    return {scan_to_csv(res), payload.dump(), {}};
}

RunOutput cmd_reps(const RunConfig& cfg) {
    auto series = weight_series(cfg.X, cfg.Y, cfg.k, WeightSeriesKind::PrimeLogAtPk);
    auto conv = convolve_power(series, cfg.s);
    int64_t lo = cfg.n, hi = std::max(cfg.n, cfg.n_hi);
    if (hi - lo >= 1000000) throw resource_error("reps: n range too large");
    std::string csv = "n,s,k,X,Y,value\n";
    for (int64_t n = lo; n <= hi; ++n)
        csv += std::to_string(n) + ',' + std::to_string(cfg.s) + ',' +
               std::to_string(cfg.k) + ',' + g17(cfg.X) + ',' + g17(cfg.Y) + ',' +
               g17(conv.at(n)) + '\n';
    json payload{{"rows", hi - lo + 1}, {"value_at_n", conv.at(lo)}};
    return {csv, payload.dump(), {}};
}

RunOutput cmd_hua(const RunConfig& cfg) {
    const std::string method = cfg.method.empty() ? "parseval" : cfg.method;
    HuaMethod m = method == "parseval" ? HuaMethod::Parseval : HuaMethod::Quadrature;
    auto series = weight_series(cfg.X, cfg.Y, cfg.k, WeightSeriesKind::PrimeLogAtPk);
    double v = hua_moment(series, cfg.s, m);
    std::string csv = "k,X,Y,s,method,value\n";
    csv += std::to_string(cfg.k) + ',' + g17(cfg.X) + ',' + g17(cfg.Y) + ',' +
           std::to_string(cfg.s) + ',' + method + ',' + g17(v) + '\n';
    json payload{{"value", v}, {"method", method}};
    return {csv, payload.dump(), {}};
}

std::string sseries_csv(const SingularSeriesResult& r) {
    std::string csv = "q,term,partial_sum,euler_product_total,tail_estimate\n";
    double run = 0.0;
    for (std::size_t i = 0; i < r.terms.size(); ++i) {
        run += r.terms[i].second;
        csv += std::to_string(r.terms[i].first) + ',' + g17(r.terms[i].second) +
               ',' + g17(run);
        if (i + 1 == r.terms.size())
            csv += ',' + g17(r.euler_product_total) + ',' + g17(r.tail_estimate);
        else
            csv += ",,";
        csv += '\n';
    }
    if (r.terms.empty())
        csv += ",,," + g17(r.euler_product_total) + ',' + g17(r.tail_estimate) + '\n';
    return csv;
}

RunOutput cmd_sseries(const RunConfig& cfg) {
    const std::string method = cfg.method.empty() ? "both" : cfg.method;
    SeriesMethod m = method == "truncate" ? SeriesMethod::Truncate
                     : method == "euler"  ? SeriesMethod::EulerProduct
                                          : SeriesMethod::Both;
    SingularSeriesResult r = singular_series(cfg.n, cfg.s, cfg.k, cfg.Q_S, m);
    json payload{{"total", r.total},
                 {"euler", r.euler_product_total},
                 {"tail", std::isfinite(r.tail_estimate) ? json(r.tail_estimate)
                                                         : json("inf")}};
    return {sseries_csv(r), payload.dump(), {}};
}

RunOutput cmd_report(const RunConfig& cfg) {
    SumParams p = make_sum_params(cfg.k, cfg.x, cfg.theta, cfg.delta, cfg.epsilon);

    ScanSpec spec;
    spec.count = cfg.samples;
    spec.seed = cfg.seed;
    ScanResult scan = minor_arc_scan(p, spec);
    std::string scan_csv = scan_to_csv(scan);

    auto series = weight_series(cfg.X, cfg.Y, cfg.k, WeightSeriesKind::PrimeLogAtPk);
    auto conv = convolve_power(series, cfg.s);
    if (conv.size() > 1000000) throw resource_error("report: window too dense");
    std::string reps_csv = "n,s,k,X,Y,value\n";
    for (const auto& [n, v] : conv.entries)
        reps_csv += std::to_string(n) + ',' + std::to_string(cfg.s) + ',' +
                    std::to_string(cfg.k) + ',' + g17(cfg.X) + ',' + g17(cfg.Y) +
                    ',' + g17(v) + '\n';

    const int64_t n_series = cfg.n != 0 ? cfg.n : 100;
    SingularSeriesResult ss =
        singular_series(n_series, cfg.s, cfg.k, cfg.Q_S, SeriesMethod::Both);
    std::string ss_csv = sseries_csv(ss);

    check_plot_schema(first_header(scan_csv), PlotKind::RatioVsQ);
    check_plot_schema(first_header(reps_csv), PlotKind::RhoVsN);
    check_plot_schema(first_header(ss_csv), PlotKind::SeriesConvergence);

    // prime count in the window, through the cache-aware table
    const auto limit = static_cast<uint64_t>(std::floor(cfg.X + cfg.Y));
    PrimeTable pt = PrimeTable::load_or_sieve(limit, cache_dir());
    std::size_t window_primes = 0;
    for (uint64_t q : pt.primes)
        if (static_cast<double>(q) >= cfg.X - cfg.Y &&
            static_cast<double>(q) <= cfg.X + cfg.Y)
            ++window_primes;

    std::ostringstream md;
    md << "# wgsum report\n\n"
       << "## parameters\n\n"
       << "k = " << cfg.k << ", x = " << g17(cfg.x) << ", theta = "
       << g17(cfg.theta) << ", delta = " << g17(cfg.delta) << ", epsilon = "
       << g17(cfg.epsilon) << "\n\n"
       << "| t_k | K | sigma_k | rho | P | Q | U | V |\n"
       << "|----:|--:|--------:|----:|--:|--:|--:|--:|\n"
       << "| " << p.t_k << " | " << p.bigK << " | 1/" << 2 * p.t_k << " | "
       << g17(p.rho) << " | " << g17(p.P) << " | " << g17(p.Q) << " | "
       << g17(p.U) << " | " << g17(p.V) << " |\n\n"
       << "## minor-arc scan\n\n"
       << "samples: " << cfg.samples << ", minor records: " << scan.records.size()
       << ", skipped as major: " << scan.notes.size() << "\n\n"
       << "max |S_k| / bound: " << g17(scan.max_ratio) << "\n\n"
       << "## representation counts\n\n"
       << "window |p - X| <= Y with X = " << g17(cfg.X) << ", Y = " << g17(cfg.Y)
       << ", k = " << cfg.k << " holds " << window_primes << " primes\n\n";
    if (conv.empty()) {
        md << "rho_" << cfg.s << " vanishes: the window holds no primes\n\n";
    } else {
        md << "rho_" << cfg.s << " has " << conv.size()
           << " nonzero coefficients in [" << conv.min_freq() << ", "
           << conv.max_freq() << "]; rho_" << cfg.s << "(" << conv.min_freq()
           << ") = " << g17(conv.entries.front().second) << "\n\n";
    }
    md << "## singular series\n\n"
       << "n = " << n_series << ", s = " << cfg.s << ", k = " << cfg.k
       << ", Q_S = " << cfg.Q_S << "\n\n"
       << "truncated total " << g17(ss.total) << ", euler product "
       << g17(ss.euler_product_total) << ", tail estimate "
       << g17(ss.tail_estimate) << "\n\n"
       << "## artifacts\n\n"
       << "- scan.csv (plot_ratio_vs_q.py)\n"
       << "- reps.csv (plot_rho_vs_n.py)\n"
       << "- sseries.csv (plot_series_convergence.py)\n";

    RunOutput out;
    out.csv = md.str();
    out.artifacts = {
        {"scan.csv", scan_csv},
        {"reps.csv", reps_csv},
        {"sseries.csv", ss_csv},
        {"plot_ratio_vs_q.py", make_plot_script("scan.csv", PlotKind::RatioVsQ)},
        {"plot_rho_vs_n.py", make_plot_script("reps.csv", PlotKind::RhoVsN)},
        {"plot_series_convergence.py",
         make_plot_script("sseries.csv", PlotKind::SeriesConvergence)},
    };
    json payload{{"max_ratio", scan.max_ratio},
                 {"series_total", ss.total},
                 {"artifacts", out.artifacts.size()}};
    out.payload = payload.dump();
    return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw usage_error("cannot write " + path.string());
    out << content;
}

} // namespace

std::vector<std::string> serialize(const RunConfig& cfg) {
    std::vector<std::string> v{cfg.subcommand};
    auto add = [&](const char* flag, const std::string& val) {
        v.push_back(flag);
        v.push_back(val);
    };
    add("--k", std::to_string(cfg.k));
    add("--x", g17(cfg.x));
    add("--theta", g17(cfg.theta));
    add("--delta", g17(cfg.delta));
    add("--epsilon", g17(cfg.epsilon));
    add("--X", g17(cfg.X));
    add("--Y", g17(cfg.Y));
    add("--s", std::to_string(cfg.s));
    add("--n", std::to_string(cfg.n));
    add("--n-hi", std::to_string(cfg.n_hi));
    add("--Q-S", std::to_string(cfg.Q_S));
    add("--alpha", cfg.alpha);
    add("--samples", std::to_string(cfg.samples));
    add("--seed", std::to_string(cfg.seed));
    add("--bits", std::to_string(cfg.bits));
    if (cfg.workers != 0) add("--workers", std::to_string(cfg.workers));
    if (!cfg.method.empty()) add("--method", cfg.method);
    if (!cfg.out.empty()) add("--out", cfg.out);
    add("--log", cfg.log_file);
    if (cfg.no_log) v.push_back("--no-log");
    return v;
}

std::string config_hash(const RunConfig& cfg) {
    RunConfig canon = cfg;
    canon.workers = 0;
    canon.out.clear();
    canon.log_file.clear();
    canon.no_log = false;
    uint64_t h = 1469598103934665603ull;
    for (const auto& part : serialize(canon)) {
        for (unsigned char c : part) {
            h ^= c;
            h *= 1099511628211ull;
        }
        h ^= 0x1f; // separator so {"ab","c"} and {"a","bc"} differ
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

RunConfig parse_config(const std::vector<std::string>& args) {
    RunConfig cfg;
    auto app = build_app(cfg);
    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app->parse(rev);
    } catch (const CLI::ParseError& e) {
        throw usage_error(std::string("arguments: ") + e.what());
    }
    finalize(cfg, *app);
    return cfg;
}

RunOutput run_config(const RunConfig& cfg) {
    if (cfg.workers > 0) set_worker_count(cfg.workers);
    if (cfg.subcommand == "params") return cmd_params(cfg);
    if (cfg.subcommand == "sum") return cmd_sum(cfg);
    if (cfg.subcommand == "dissect") return cmd_dissect(cfg);
    if (cfg.subcommand == "vaughan") return cmd_vaughan(cfg);
    if (cfg.subcommand == "scan") return cmd_scan(cfg);
    if (cfg.subcommand == "reps") return cmd_reps(cfg);
    if (cfg.subcommand == "hua") return cmd_hua(cfg);
    if (cfg.subcommand == "sseries") return cmd_sseries(cfg);
    if (cfg.subcommand == "report") return cmd_report(cfg);
    throw usage_error("unknown subcommand: " + cfg.subcommand);
}

void emit_plot_script(const std::string& csv_path, PlotKind kind,
                      const std::string& script_path) {
    std::ifstream in(csv_path);
    if (!in) throw usage_error("plot script: cannot read " + csv_path);
    std::string line;
    while (std::getline(in, line) && (line.empty() || line[0] == '#')) {}
    check_plot_schema(line, kind);
    std::ofstream out(script_path);
    if (!out) throw usage_error("plot script: cannot write " + script_path);
    out << make_plot_script(csv_path, kind);
}

std::string cache_dir() {
    const char* env = std::getenv("WGSUM_CACHE");
    return env ? std::string(env) : std::string();
}

void append_log(const std::string& path, const RunConfig& cfg,
                const std::string& payload) {
    json rec{{"ts", iso_now()},
             {"config", config_hash(cfg)},
             {"cmd", cfg.subcommand},
             {"payload", json::parse(payload)},
             {"version", kVersion}};
    std::ofstream out(path, std::ios::app);
    if (!out) throw usage_error("cannot open results log: " + path);
    out << rec.dump() << '\n';
}

int run_cli(int argc, char** argv) {
    RunConfig cfg;
    auto app = build_app(cfg);
    try {
        app->parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app->exit(e); // --help family
        std::cerr << e.what() << '\n';
        return EXIT_USAGE;
    }
    try {
        finalize(cfg, *app);
        RunOutput out = run_config(cfg);
        if (cfg.subcommand == "report") {
            std::filesystem::path dir = cfg.out.empty() ? "report" : cfg.out;
            std::filesystem::create_directories(dir);
            for (const auto& [name, content] : out.artifacts)
                write_file(dir / name, content);
            write_file(dir / "report.md", out.csv);
            std::cout << out.csv;
        } else if (!cfg.out.empty()) {
            write_file(cfg.out, out.csv);
        } else {
            std::cout << out.csv;
        }
        if (!cfg.no_log) append_log(cfg.log_file, cfg, out.payload);
        return EXIT_OK;
    } catch (const usage_error& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return EXIT_USAGE;
    } catch (const domain_error& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return EXIT_DOMAIN;
    } catch (const resource_error& e) {
        std::cerr << "resource error: " << e.what() << '\n';
        return EXIT_RESOURCE;
    } catch (const invariant_error& e) {
        std::cerr << "invariant violation: " << e.what() << '\n';
        return EXIT_INVARIANT;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return EXIT_INVARIANT;
    }
}

} // namespace wgsum
