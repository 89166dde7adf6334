// assoclab command line: simulate | verify | ols-condition | assumptions
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "assoclab/config.hpp"
#include "assoclab/presets.hpp"

namespace fs = std::filesystem;
using assoclab::Error;
using assoclab::ErrorKind;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "0.1.0";

int exit_code_for(const Error& e) {
    switch (e.kind()) {
        case ErrorKind::Degenerate:
        case ErrorKind::Construction:
            return 3;
        default:
            return 2;
    }
}

void print_error(const Error& e) {
    ordered_json j;
    j["kind"] = assoclab::to_string(e.kind());
    j["message"] = e.what();
    std::cerr << "error: " << j.dump() << "\n";
}

std::string now_utc() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string default_out_dir() {
    if (const char* env = std::getenv("ASSOCLAB_OUT_DIR")) return env;
    return "out";
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Config, "cannot write " + path.string());
    out << text;
}

void write_histogram_block(std::ofstream& out, const std::string& tag,
                           const std::vector<double>& samples, int bins) {
    double lo = 1e300, hi = -1e300;
    for (double v : samples) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (samples.empty() || !(hi > lo)) {
        out << "# " << tag << " (degenerate)\n";
        return;
    }
    std::vector<int> count(bins, 0);
    const double w = (hi - lo) / bins;
    for (double v : samples) {
        int b = static_cast<int>((v - lo) / w);
        if (b >= bins) b = bins - 1;
        if (b < 0) b = 0;
        ++count[b];
    }
    out << "# " << tag << "\nbin_left,bin_right,count\n";
    char buf[128];
    for (int b = 0; b < bins; ++b) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%d\n", lo + b * w, lo + (b + 1) * w,
                      count[b]);
        out << buf;
    }
}

std::vector<double> stat_samples(const assoclab::McReport& rep, bool correlation) {
    std::vector<double> v;
    for (const auto& row : rep.rows)
        if (!row.degenerate) v.push_back(correlation ? row.scaled_rho : row.scaled_t);
    return v;
}

struct SimulateArgs {
    std::string config_path;
    std::string preset;
    std::string out_dir;
    uint64_t seed = 0;
    int threads = -1;
    bool csv = false;
};

int cmd_simulate(const SimulateArgs& args) {
    const auto t0 = std::chrono::steady_clock::now();
    fs::path out_dir(args.out_dir.empty() ? default_out_dir() : args.out_dir);
    fs::create_directories(out_dir);
    std::vector<std::string> outputs;

    if (args.preset == "figure1") {
        // closed-form variance curve of the scaled covariance at equal betas
        std::ofstream csv(out_dir / "figure1.curve.csv");
        csv << "beta,variance\n";
        for (int i = 0; i <= 300; ++i) {
            const double beta = i * 0.01;
            const double m = assoclab::solve_magnetization(beta);
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.2f,%.12g\n", beta,
                          (1 - m * m) * (1 - m * m));
            csv << buf;
        }
        outputs.push_back("figure1.curve.csv");
        ordered_json manifest;
        manifest["preset"] = "figure1";
        manifest["version"] = kVersion;
        manifest["timestamp"] = now_utc();
        manifest["outputs"] = outputs;
        write_text(out_dir / "manifest.json", manifest.dump(2));
        std::cout << "wrote " << (out_dir / "figure1.curve.csv").string() << "\n";
        return 0;
    }

    std::string text;
    if (!args.config_path.empty()) {
        std::ifstream in(args.config_path);
        if (!in) throw Error(ErrorKind::Config, "cannot read config: " + args.config_path);
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    } else if (!args.preset.empty()) {
        text = assoclab::preset_config_text(args.preset);
    } else {
        throw Error(ErrorKind::Config, "simulate needs --config or --preset");
    }
    const std::string base_dir =
        args.config_path.empty() ? std::string()
                                 : fs::path(args.config_path).parent_path().string();
    assoclab::ParsedConfig pc = assoclab::parse_config_text(text, base_dir);
    if (args.seed) pc.experiment.master_seed = args.seed;
    if (args.threads >= 0) pc.experiment.threads = args.threads;
    if (args.csv) pc.output.csv = true;

    const std::string resolved = assoclab::resolved_config_text(pc);
    write_text(out_dir / "resolved.config", resolved);
    outputs.push_back("resolved.config");

    const std::string& name = pc.experiment.name;
    if (pc.sweep) {
        assoclab::TrendReport tr = assoclab::monotonicity_sweep(
            pc.experiment, pc.sweep->beta_grid, pc.sweep->vary_y, pc.sweep->use_correlation);
        ordered_json trend;
        trend["name"] = name;
        trend["statistic"] = pc.sweep->use_correlation ? "scaled_rho" : "scaled_t";
        trend["spearman"] = tr.spearman;
        ordered_json pts = ordered_json::array();
        std::ofstream hist;
        if (pc.output.histogram) {
            hist.open(out_dir / (name + ".hist.csv"));
            outputs.push_back(name + ".hist.csv");
        }
        for (size_t i = 0; i < tr.points.size(); ++i) {
            const auto& pt = tr.points[i];
            pts.push_back(ordered_json{{"beta", pt.beta},
                                       {"sd", pt.sd},
                                       {"var", pt.var},
                                       {"sd_bootstrap_se", pt.sd_bootstrap_se}});
            char tag[64];
            std::snprintf(tag, sizeof(tag), "%s_beta_%g", name.c_str(), pt.beta);
            write_text(out_dir / (std::string(tag) + ".report.json"),
                       tr.reports[i].to_json());
            outputs.push_back(std::string(tag) + ".report.json");
            if (pc.output.csv) {
                assoclab::write_replicates_csv(
                    tr.reports[i], (out_dir / (std::string(tag) + ".replicates.csv")).string());
                outputs.push_back(std::string(tag) + ".replicates.csv");
            }
            if (pc.output.histogram) {
                char hdr[64];
                std::snprintf(hdr, sizeof(hdr), "beta=%g", pt.beta);
                write_histogram_block(hist, hdr,
                                      stat_samples(tr.reports[i], pc.sweep->use_correlation),
                                      pc.output.hist_bins);
            }
        }
        trend["points"] = std::move(pts);
        write_text(out_dir / (name + ".trend.json"), trend.dump(2));
        outputs.push_back(name + ".trend.json");
        std::cout << "sweep " << name << ": spearman(sd, beta) = " << tr.spearman << "\n";
    } else {
        assoclab::McReport rep = assoclab::run_experiment(pc.experiment);
        write_text(out_dir / (name + ".report.json"), rep.to_json());
        outputs.push_back(name + ".report.json");
        if (pc.output.csv) {
            assoclab::write_replicates_csv(rep,
                                           (out_dir / (name + ".replicates.csv")).string());
            outputs.push_back(name + ".replicates.csv");
        }
        if (pc.output.histogram) {
            std::ofstream hist(out_dir / (name + ".hist.csv"));
            if (pc.experiment.want_rho)
                write_histogram_block(hist, "scaled_rho", stat_samples(rep, true),
                                      pc.output.hist_bins);
            if (pc.experiment.want_t)
                write_histogram_block(hist, "scaled_t", stat_samples(rep, false),
                                      pc.output.hist_bins);
            outputs.push_back(name + ".hist.csv");
        }
        if (pc.output.spin_dump && (!rep.spins_x.empty() || !rep.spins_y.empty())) {
            // raw replicate spins: per replicate the X vector then, when
            // present, the Y vector; one signed byte per spin
            std::ofstream bin(out_dir / (name + ".spins.bin"), std::ios::binary);
            for (size_t r = 0; r < rep.rows.size(); ++r) {
                if (!rep.spins_x.empty())
                    bin.write(reinterpret_cast<const char*>(rep.spins_x[r].data()),
                              static_cast<std::streamsize>(rep.spins_x[r].size()));
                if (!rep.spins_y.empty())
                    bin.write(reinterpret_cast<const char*>(rep.spins_y[r].data()),
                              static_cast<std::streamsize>(rep.spins_y[r].size()));
            }
            outputs.push_back(name + ".spins.bin");
        }
        for (const auto& s : rep.stats) {
            std::cout << name << " " << s.label << ": mean=" << s.mean << " var=" << s.var;
            if (s.type1_rate) std::cout << " type1=" << *s.type1_rate;
            if (s.ks_pvalue) std::cout << " ks_p=" << *s.ks_pvalue;
            std::cout << "\n";
        }
        if (rep.ols) std::cout << name << " ols coverage=" << rep.ols->coverage << "\n";
    }

    const auto t1 = std::chrono::steady_clock::now();
    ordered_json manifest;
    if (!args.config_path.empty()) manifest["config_path"] = args.config_path;
    if (!args.preset.empty()) manifest["preset"] = args.preset;
    manifest["resolved_config"] = resolved;
    manifest["version"] = kVersion;
    manifest["timestamp"] = now_utc();
    manifest["outputs"] = outputs;
    manifest["wall_clock_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    write_text(out_dir / "manifest.json", manifest.dump(2));
    return 0;
}

int cmd_verify(const std::string& id, uint64_t seed, int threads) {
    assoclab::VerifyResult res = assoclab::run_verify(id, seed, threads);
    for (const auto& c : res.checks) {
        std::printf("[%s] %-44s observed=%-12.6g range=[%.6g, %.6g] %s%s%s\n",
                    res.id.c_str(), c.label.c_str(), c.observed, c.lo,
                    c.hi >= 1e300 ? INFINITY : c.hi, c.pass ? "PASS" : "FAIL",
                    c.detail.empty() ? "" : "  # ", c.detail.c_str());
    }
    std::printf("[%s] %s\n", res.id.c_str(), res.pass ? "ALL CHECKS PASSED" : "FAILED");
    return res.pass ? 0 : 1;
}

int cmd_ols_condition(const std::string& f, const std::string& g, int n) {
    const auto fp = assoclab::parse_profile(f);
    const auto gp = assoclab::parse_profile(g);
    const auto rep = assoclab::ols_condition(fp, gp, n);
    std::printf("f = %s, g = %s, n = %d\n", f.c_str(), g.c_str(), n);
    std::printf("  int f g    = %.9g   (riemann at n: %.9g)\n", rep.int_fg, rep.riemann_fg);
    std::printf("  int f      = %.9g   (riemann at n: %.9g)\n", rep.int_f, rep.riemann_f);
    std::printf("  int g      = %.9g   (riemann at n: %.9g)\n", rep.int_g, rep.riemann_g);
    std::printf("  true/naive variance ratio -> %.9g\n", rep.variance_ratio());
    std::printf("  verdict: %s\n", assoclab::to_string(rep.verdict));
    return 0;
}

int cmd_assumptions(const std::string& family, int n, int side, int dim, int degree,
                    uint64_t graph_seed, const std::string& matrix_file) {
    assoclab::GraphFamily fam;
    if (family == "lattice") {
        fam = assoclab::GraphFamily::lattice(side, dim);
    } else if (family == "curie_weiss") {
        fam = assoclab::GraphFamily::curie_weiss(n);
    } else if (family == "complete_bipartite") {
        fam = assoclab::GraphFamily::complete_bipartite(n);
    } else if (family == "random_regular") {
        fam = assoclab::GraphFamily::random_regular(n, degree, graph_seed);
    } else if (family == "explicit") {
        std::ifstream in(matrix_file);
        if (!in) throw Error(ErrorKind::Config, "cannot read matrix file: " + matrix_file);
        std::ostringstream ss;
        ss << in.rdbuf();
        fam = assoclab::explicit_matrix_from_text(ss.str());
    } else {
        throw Error(ErrorKind::Config, "unknown family: " + family);
    }
    const auto q = assoclab::build_interaction(fam);
    const auto rep = assoclab::check_assumptions(q);
    ordered_json j;
    j["family"] = assoclab::to_string(q.kind());
    j["n"] = q.size();
    j["is_regular"] = rep.is_regular;
    j["max_row_sum_dev"] = rep.max_row_sum_dev;
    j["max_entry_times_n"] = rep.max_entry_times_n;
    j["frobenius_sq"] = rep.frobenius_sq;
    if (rep.known_spectral_gap) j["known_spectral_gap"] = *rep.known_spectral_gap;
    std::cout << j.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"assoclab: Monte Carlo laboratory for association statistics under "
                 "within-vector dependence"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    SimulateArgs sim_args;
    auto* sim = app.add_subcommand("simulate", "run an experiment from a config or preset");
    sim->add_option("--config", sim_args.config_path, "experiment config file");
    sim->add_option("--preset", sim_args.preset,
                    "built-in preset (figure1..figure5e, t2_*, t3_*, t4i_sigma4, "
                    "c5_*, iid_baseline)");
    sim->add_option("--out-dir", sim_args.out_dir, "output directory (ASSOCLAB_OUT_DIR)");
    sim->add_option("--seed", sim_args.seed, "override master seed");
    sim->add_option("--threads", sim_args.threads, "worker thread cap");
    sim->add_flag("--csv", sim_args.csv, "emit per-replicate CSV");

    std::string verify_id;
    uint64_t verify_seed = 0;
    int verify_threads = 0;
    auto* ver = app.add_subcommand("verify", "run a preset theorem verification");
    ver->add_option("id", verify_id, "one of T1, T2, C3, T3, T4i, T4ii, C5, T5")->required();
    ver->add_option("--seed", verify_seed, "override master seed");
    ver->add_option("--threads", verify_threads, "worker thread cap");

    std::string olsf = "const:1", olsg = "const:1";
    int olsn = 200;
    auto* olsc = app.add_subcommand("ols-condition", "evaluate the validity condition");
    olsc->add_option("--f", olsf, "regressor eigenvalue profile, e.g. power:2");
    olsc->add_option("--g", olsg, "error eigenvalue profile, e.g. exp:+:1");
    olsc->add_option("--n", olsn, "finite-sample grid size");

    std::string as_family = "curie_weiss", as_matrix;
    int as_n = 100, as_side = 4, as_dim = 2, as_degree = 4;
    uint64_t as_seed = 1;
    auto* asum = app.add_subcommand("assumptions", "report dense-regularity diagnostics");
    asum->add_option("--family", as_family,
                     "lattice | curie_weiss | complete_bipartite | random_regular | explicit");
    asum->add_option("--n", as_n, "vertex count");
    asum->add_option("--side", as_side, "lattice side");
    asum->add_option("--dim", as_dim, "lattice dimension");
    asum->add_option("--degree", as_degree, "random regular degree");
    asum->add_option("--graph-seed", as_seed, "graph construction seed");
    asum->add_option("--matrix-file", as_matrix, "explicit matrix text file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (sim->parsed()) return cmd_simulate(sim_args);
        if (ver->parsed()) return cmd_verify(verify_id, verify_seed, verify_threads);
        if (olsc->parsed()) return cmd_ols_condition(olsf, olsg, olsn);
        if (asum->parsed())
            return cmd_assumptions(as_family, as_n, as_side, as_dim, as_degree, as_seed,
                                   as_matrix);
    } catch (const Error& e) {
        print_error(e);
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: {\"kind\":\"internal\",\"message\":\"" << e.what() << "\"}\n";
        return 2;
    }
    return 2;
}
