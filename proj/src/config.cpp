#include "assoclab/config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace assoclab {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

using Sections = std::map<std::string, ConfigSection>;

Sections parse_sections(const std::string& text) {
    Sections out;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw Error(ErrorKind::Config,
                            "line " + std::to_string(lineno) + ": unterminated section header");
            section = lower(trim(line.substr(1, line.size() - 2)));
            out[section];
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorKind::Config,
                        "line " + std::to_string(lineno) + ": expected key = value");
        if (section.empty())
            throw Error(ErrorKind::Config,
                        "line " + std::to_string(lineno) + ": key outside any [section]");
        const std::string key = lower(trim(line.substr(0, eq)));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw Error(ErrorKind::Config, "line " + std::to_string(lineno) + ": empty key");
        out[section][key] = val;
    }
    return out;
}

const std::string* get(const ConfigSection& s, const std::string& key) {
    auto it = s.find(key);
    return it == s.end() ? nullptr : &it->second;
}

double to_double(const std::string& v, const std::string& key) {
    try {
        size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw Error(ErrorKind::Config, "bad number for '" + key + "': " + v);
    }
}

int64_t to_int(const std::string& v, const std::string& key) {
    try {
        size_t pos = 0;
        int64_t d = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw Error(ErrorKind::Config, "bad integer for '" + key + "': " + v);
    }
}

uint64_t to_uint(const std::string& v, const std::string& key) {
    try {
        size_t pos = 0;
        uint64_t d = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw Error(ErrorKind::Config, "bad integer for '" + key + "': " + v);
    }
}

bool to_bool(const std::string& v, const std::string& key) {
    const std::string s = lower(v);
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw Error(ErrorKind::Config, "bad boolean for '" + key + "': " + v);
}

std::vector<double> split_doubles(const std::string& v, const std::string& key) {
    std::vector<double> out;
    std::string item;
    std::istringstream in(v);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(to_double(item, key));
    }
    if (out.empty()) throw Error(ErrorKind::Config, "empty list for '" + key + "'");
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Config, "cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string resolve_path(const std::string& base_dir, const std::string& p) {
    std::filesystem::path path(p);
    if (path.is_absolute() || base_dir.empty()) return p;
    return (std::filesystem::path(base_dir) / path).string();
}

SamplerMethod parse_sampler(const std::string& v) {
    const std::string s = lower(v);
    if (s == "auto") return SamplerMethod::Auto;
    if (s == "exact" || s == "exact_cw") return SamplerMethod::ExactCW;
    if (s == "glauber") return SamplerMethod::Glauber;
    if (s == "wolff") return SamplerMethod::Wolff;
    if (s == "brute_force" || s == "brute") return SamplerMethod::BruteForce;
    throw Error(ErrorKind::Config, "unknown sampler: " + v);
}

BasisKind parse_basis(const std::string& v) {
    const std::string s = lower(v);
    if (s == "centering" || s == "centering_aligned") return BasisKind::CenteringAligned;
    if (s == "random" || s == "random_orthogonal") return BasisKind::RandomOrthogonal;
    if (s == "identity") return BasisKind::Identity;
    throw Error(ErrorKind::Config, "unknown basis: " + v);
}

}  // namespace

OlsProfile parse_profile(const std::string& text) {
    const std::string t = trim(text);
    const size_t c1 = t.find(':');
    const std::string head = lower(c1 == std::string::npos ? t : t.substr(0, c1));
    const std::string rest = c1 == std::string::npos ? "" : t.substr(c1 + 1);
    if (head == "const" || head == "constant")
        return OlsProfile::constant(rest.empty() ? 1.0 : to_double(rest, "const"));
    if (head == "power") return OlsProfile::power(to_double(rest, "power"));
    if (head == "exp" || head == "exponential") {
        const size_t c2 = rest.find(':');
        if (c2 == std::string::npos)
            throw Error(ErrorKind::Config, "exponential profile needs exp:<sign>:<q>");
        const std::string sgn = trim(rest.substr(0, c2));
        const double q = to_double(trim(rest.substr(c2 + 1)), "exp q");
        if (sgn != "+" && sgn != "-")
            throw Error(ErrorKind::Config, "exponential sign must be + or -");
        return OlsProfile::exponential(sgn == "+" ? 1.0 : -1.0, q);
    }
    throw Error(ErrorKind::Config, "unknown profile: " + text);
}

std::string profile_to_text(const OlsProfile& p) {
    std::ostringstream os;
    switch (p.kind) {
        case OlsProfile::Kind::Constant: os << "const:" << p.c; break;
        case OlsProfile::Kind::Power: os << "power:" << p.p; break;
        case OlsProfile::Kind::Exponential:
            os << "exp:" << (p.sign >= 0 ? "+" : "-") << ":" << p.q;
            break;
        case OlsProfile::Kind::Inline:
            throw Error(ErrorKind::Config, "inline profile has no text form");
    }
    return os.str();
}

ModelDesc parse_model_section(const ConfigSection& sec, int n,
                              const std::string& section_name,
                              const std::string& base_dir) {
    const std::string* kind = get(sec, "kind");
    if (!kind) throw Error(ErrorKind::Config, section_name + ": missing 'kind'");
    const std::string k = lower(*kind);

    if (k == "gaussian") {
        ModelDesc d;
        d.kind = ModelDesc::Kind::Gaussian;
        const std::string cov = get(sec, "covariance") ? lower(*get(sec, "covariance")) : "identity";
        if (cov == "identity") {
            double var = get(sec, "variance") ? to_double(*get(sec, "variance"), "variance") : 1.0;
            d.gaussian.covariance = CovarianceModel::identity_scaled(n, var);
        } else if (cov == "equicorrelation") {
            const std::string* rho = get(sec, "rho");
            if (!rho) throw Error(ErrorKind::Config, section_name + ": equicorrelation needs rho");
            d.gaussian.covariance = CovarianceModel::equicorrelation(n, to_double(*rho, "rho"));
        } else if (cov == "eigenspec") {
            EigenSpec spec;
            if (const std::string* fam = get(sec, "eigen_family")) {
                const std::string f = lower(*fam);
                const size_t c = f.find(':');
                const std::string head = c == std::string::npos ? f : f.substr(0, c);
                const std::string arg = c == std::string::npos ? "" : f.substr(c + 1);
                if (head == "sigma2")
                    spec = correlation_variance_spec(n, to_double(arg, "sigma2"));
                else if (head == "spike")
                    spec = spike_spec(n, arg.empty() ? 2.5 : to_double(arg, "spike"));
                else
                    throw Error(ErrorKind::Config, "unknown eigen_family: " + *fam);
            } else if (const std::string* prof = get(sec, "profile")) {
                spec = profile_spec(n, parse_profile(*prof));
            } else if (const std::string* vals = get(sec, "eigen_values")) {
                spec.n = n;
                spec.values = split_doubles(*vals, "eigen_values");
                if (static_cast<int>(spec.values.size()) != n)
                    throw Error(ErrorKind::Config, "eigen_values must list exactly n values");
            } else if (const std::string* file = get(sec, "eigen_file")) {
                std::istringstream in(read_file(resolve_path(base_dir, *file)));
                double v;
                spec.n = n;
                while (in >> v) spec.values.push_back(v);
                if (static_cast<int>(spec.values.size()) != n)
                    throw Error(ErrorKind::Config, "eigen_file must hold exactly n values");
            } else {
                throw Error(ErrorKind::Config,
                            section_name + ": eigenspec needs eigen_family, profile, "
                                           "eigen_values or eigen_file");
            }
            if (const std::string* basis = get(sec, "basis")) spec.basis = parse_basis(*basis);
            if (const std::string* bs = get(sec, "basis_seed"))
                spec.basis_seed = to_uint(*bs, "basis_seed");
            d.gaussian.covariance = CovarianceModel::from_eigen_spec(std::move(spec));
        } else {
            throw Error(ErrorKind::Config, "unknown covariance: " + cov);
        }
        return d;
    }

    // Ising families
    ModelDesc d;
    d.kind = ModelDesc::Kind::Ising;
    GraphFamily fam;
    if (k == "lattice") {
        const std::string* side = get(sec, "side");
        if (!side) throw Error(ErrorKind::Config, section_name + ": lattice needs side");
        int dim = get(sec, "dim") ? static_cast<int>(to_int(*get(sec, "dim"), "dim")) : 2;
        fam = GraphFamily::lattice(static_cast<int>(to_int(*side, "side")), dim);
        if (fam.n != n)
            throw Error(ErrorKind::Config, section_name + ": side^dim must equal n");
    } else if (k == "curie_weiss") {
        fam = GraphFamily::curie_weiss(n);
    } else if (k == "complete_bipartite") {
        fam = GraphFamily::complete_bipartite(n);
    } else if (k == "random_regular") {
        const std::string* deg = get(sec, "degree");
        if (!deg) throw Error(ErrorKind::Config, section_name + ": random_regular needs degree");
        uint64_t gseed = get(sec, "graph_seed") ? to_uint(*get(sec, "graph_seed"), "graph_seed") : 0;
        fam = GraphFamily::random_regular(n, static_cast<int>(to_int(*deg, "degree")), gseed);
    } else if (k == "explicit") {
        const std::string* file = get(sec, "matrix_file");
        if (!file) throw Error(ErrorKind::Config, section_name + ": explicit needs matrix_file");
        fam = explicit_matrix_from_text(read_file(resolve_path(base_dir, *file)));
        if (fam.n != n)
            throw Error(ErrorKind::Config, section_name + ": matrix size must equal n");
    } else {
        throw Error(ErrorKind::Config, "unknown model kind: " + *kind);
    }
    d.ising.family = std::move(fam);
    const std::string* beta = get(sec, "beta");
    if (!beta) throw Error(ErrorKind::Config, section_name + ": ising model needs beta");
    d.ising.beta = to_double(*beta, "beta");
    if (d.ising.beta < 0) throw Error(ErrorKind::Config, "beta must be >= 0");
    if (const std::string* s = get(sec, "sampler")) d.ising.plan.method = parse_sampler(*s);
    if (const std::string* v = get(sec, "glauber_burn_in"))
        d.ising.plan.glauber_burn_in_sweeps = static_cast<int>(to_int(*v, "glauber_burn_in"));
    if (const std::string* v = get(sec, "wolff_burn_in"))
        d.ising.plan.wolff_burn_in_clusters = static_cast<int>(to_int(*v, "wolff_burn_in"));
    return d;
}

ParsedConfig parse_config_text(const std::string& text, const std::string& base_dir) {
    Sections secs = parse_sections(text);
    auto exp_it = secs.find("experiment");
    if (exp_it == secs.end()) throw Error(ErrorKind::Config, "missing [experiment] section");
    const ConfigSection& e = exp_it->second;

    ParsedConfig pc;
    ExperimentConfig& cfg = pc.experiment;
    if (const std::string* v = get(e, "name")) cfg.name = *v;
    const std::string* nval = get(e, "n");
    if (!nval) throw Error(ErrorKind::Config, "[experiment] needs n");
    cfg.n = static_cast<int>(to_int(*nval, "n"));
    const std::string* rval = get(e, "replicates");
    if (!rval) throw Error(ErrorKind::Config, "[experiment] needs replicates");
    cfg.replicates = static_cast<int>(to_int(*rval, "replicates"));
    if (const std::string* v = get(e, "master_seed")) cfg.master_seed = to_uint(*v, "master_seed");
    if (const std::string* v = get(e, "nominal_alpha")) {
        cfg.nominal_alpha = to_double(*v, "nominal_alpha");
        if (cfg.nominal_alpha <= 0.0 || cfg.nominal_alpha >= 1.0)
            throw Error(ErrorKind::Config, "nominal_alpha must be in (0,1)");
    }
    if (const std::string* v = get(e, "ols_beta_true")) cfg.ols_beta_true = to_double(*v, "ols_beta_true");
    if (const std::string* v = get(e, "threads")) cfg.threads = static_cast<int>(to_int(*v, "threads"));
    if (const std::string* v = get(e, "note")) cfg.note = *v;

    cfg.want_t = cfg.want_rho = cfg.want_ols = false;
    std::string stats = get(e, "statistics") ? lower(*get(e, "statistics")) : "t,rho";
    std::istringstream sin(stats);
    std::string item;
    while (std::getline(sin, item, ',')) {
        item = trim(item);
        if (item == "t") cfg.want_t = true;
        else if (item == "rho") cfg.want_rho = true;
        else if (item == "ols") cfg.want_ols = true;
        else if (!item.empty())
            throw Error(ErrorKind::Config, "unknown statistic: " + item);
    }
    if (!cfg.want_t && !cfg.want_rho && !cfg.want_ols)
        throw Error(ErrorKind::Config, "statistics selects nothing");

    auto mx = secs.find("model_x");
    if (mx == secs.end()) throw Error(ErrorKind::Config, "missing [model_x] section");
    cfg.model_x = parse_model_section(mx->second, cfg.n, "model_x", base_dir);

    if (cfg.want_ols) {
        auto ols = secs.find("ols");
        if (ols == secs.end()) throw Error(ErrorKind::Config, "ols statistic needs an [ols] section");
        const std::string* g = get(ols->second, "g");
        if (!g) throw Error(ErrorKind::Config, "[ols] needs g (error eigenvalue profile)");
        OlsProfile gp = parse_profile(*g);
        uint64_t bseed = 0;
        BasisKind basis = BasisKind::CenteringAligned;
        if (cfg.model_x.kind == ModelDesc::Kind::Gaussian &&
            cfg.model_x.gaussian.covariance.kind == CovarianceModel::Kind::FromEigenSpec) {
            basis = cfg.model_x.gaussian.covariance.spec.basis;
            bseed = cfg.model_x.gaussian.covariance.spec.basis_seed;
        }
        cfg.noise.covariance =
            CovarianceModel::from_eigen_spec(profile_spec(cfg.n, gp, bseed, basis));
        cfg.ols_g = gp;
        if (const std::string* f = get(ols->second, "f")) {
            cfg.ols_f = parse_profile(*f);
        } else if (cfg.model_x.kind == ModelDesc::Kind::Gaussian) {
            // reconstruct f from the regressor model when it is expressible
            const auto& cm = cfg.model_x.gaussian.covariance;
            if (cm.kind == CovarianceModel::Kind::IdentityScaled)
                cfg.ols_f = OlsProfile::constant(cm.variance);
            else if (const std::string* prof = get(mx->second, "profile"))
                cfg.ols_f = parse_profile(*prof);
        }
    } else {
        auto my = secs.find("model_y");
        if (my == secs.end())
            cfg.model_y = cfg.model_x;  // default: same model for both vectors
        else
            cfg.model_y = parse_model_section(my->second, cfg.n, "model_y", base_dir);
    }

    if (auto sw = secs.find("sweep"); sw != secs.end()) {
        SweepSpec spec;
        const std::string* grid = get(sw->second, "beta_grid");
        if (!grid) throw Error(ErrorKind::Config, "[sweep] needs beta_grid");
        spec.beta_grid = split_doubles(*grid, "beta_grid");
        if (const std::string* v = get(sw->second, "vary_y")) spec.vary_y = to_bool(*v, "vary_y");
        if (const std::string* v = get(sw->second, "statistic"))
            spec.use_correlation = lower(*v) != "t";
        if (cfg.model_x.kind != ModelDesc::Kind::Ising)
            throw Error(ErrorKind::Config, "sweeps apply to ising models");
        pc.sweep = std::move(spec);
    }

    if (auto out = secs.find("output"); out != secs.end()) {
        if (const std::string* v = get(out->second, "csv")) pc.output.csv = to_bool(*v, "csv");
        if (const std::string* v = get(out->second, "histogram"))
            pc.output.histogram = to_bool(*v, "histogram");
        if (const std::string* v = get(out->second, "spin_dump"))
            pc.output.spin_dump = to_bool(*v, "spin_dump");
        if (const std::string* v = get(out->second, "hist_bins"))
            pc.output.hist_bins = static_cast<int>(to_int(*v, "hist_bins"));
    }
    cfg.keep_spins = pc.output.spin_dump && !pc.sweep.has_value();
    return pc;
}

ParsedConfig parse_config_file(const std::string& path) {
    const std::string text = read_file(path);
    return parse_config_text(text, std::filesystem::path(path).parent_path().string());
}

namespace {

void emit_model(std::ostringstream& os, const ModelDesc& d, const char* section) {
    os << "[" << section << "]\n";
    if (d.kind == ModelDesc::Kind::Gaussian) {
        os << "kind = gaussian\n";
        const auto& cm = d.gaussian.covariance;
        switch (cm.kind) {
            case CovarianceModel::Kind::IdentityScaled:
                os << "covariance = identity\n";
                os << "variance = " << cm.variance << "\n";
                break;
            case CovarianceModel::Kind::Equicorrelation:
                os << "covariance = equicorrelation\n";
                os << "rho = " << cm.rho << "\n";
                break;
            case CovarianceModel::Kind::FromEigenSpec: {
                os << "covariance = eigenspec\n";
                os << "eigen_values = ";
                for (size_t i = 0; i < cm.spec.values.size(); ++i) {
                    if (i) os << ",";
                    char buf[32];
                    std::snprintf(buf, sizeof(buf), "%.17g", cm.spec.values[i]);
                    os << buf;
                }
                os << "\n";
                os << "basis = "
                   << (cm.spec.basis == BasisKind::CenteringAligned  ? "centering"
                       : cm.spec.basis == BasisKind::RandomOrthogonal ? "random"
                                                                      : "identity")
                   << "\n";
                os << "basis_seed = " << cm.spec.basis_seed << "\n";
                break;
            }
        }
    } else {
        const auto& fam = d.ising.family;
        os << "kind = " << to_string(fam.kind) << "\n";
        if (fam.kind == GraphKind::Lattice) {
            os << "side = " << fam.side << "\n";
            os << "dim = " << fam.dim << "\n";
        } else if (fam.kind == GraphKind::RandomRegular) {
            os << "degree = " << fam.degree << "\n";
            os << "graph_seed = " << fam.seed << "\n";
        }
        os << "beta = " << d.ising.beta << "\n";
        os << "sampler = " << to_string(d.ising.plan.method) << "\n";
        os << "glauber_burn_in = " << d.ising.plan.glauber_burn_in_sweeps << "\n";
        os << "wolff_burn_in = " << d.ising.plan.wolff_burn_in_clusters << "\n";
    }
    os << "\n";
}

}  // namespace

std::string resolved_config_text(const ParsedConfig& pc) {
    const ExperimentConfig& cfg = pc.experiment;
    std::ostringstream os;
    os.precision(17);
    os << "[experiment]\n";
    os << "name = " << cfg.name << "\n";
    os << "statistics = ";
    bool first = true;
    auto add = [&](const char* s) {
        if (!first) os << ",";
        os << s;
        first = false;
    };
    if (cfg.want_t) add("t");
    if (cfg.want_rho) add("rho");
    if (cfg.want_ols) add("ols");
    os << "\n";
    os << "n = " << cfg.n << "\n";
    os << "replicates = " << cfg.replicates << "\n";
    os << "master_seed = " << cfg.master_seed << "\n";
    os << "nominal_alpha = " << cfg.nominal_alpha << "\n";
    os << "ols_beta_true = " << cfg.ols_beta_true << "\n";
    os << "threads = " << cfg.threads << "\n";
    if (!cfg.note.empty()) os << "note = " << cfg.note << "\n";
    os << "\n";
    emit_model(os, cfg.model_x, "model_x");
    if (cfg.want_ols) {
        os << "[ols]\n";
        if (cfg.ols_f) os << "f = " << profile_to_text(*cfg.ols_f) << "\n";
        if (cfg.ols_g) os << "g = " << profile_to_text(*cfg.ols_g) << "\n";
        os << "\n";
    } else {
        emit_model(os, cfg.model_y, "model_y");
    }
    if (pc.sweep) {
        os << "[sweep]\n";
        os << "beta_grid = ";
        for (size_t i = 0; i < pc.sweep->beta_grid.size(); ++i) {
            if (i) os << ",";
            os << pc.sweep->beta_grid[i];
        }
        os << "\n";
        os << "vary_y = " << (pc.sweep->vary_y ? "true" : "false") << "\n";
        os << "statistic = " << (pc.sweep->use_correlation ? "rho" : "t") << "\n\n";
    }
    os << "[output]\n";
    os << "csv = " << (pc.output.csv ? "true" : "false") << "\n";
    os << "histogram = " << (pc.output.histogram ? "true" : "false") << "\n";
    os << "spin_dump = " << (pc.output.spin_dump ? "true" : "false") << "\n";
    os << "hist_bins = " << pc.output.hist_bins << "\n";
    return os.str();
}

}  // namespace assoclab
