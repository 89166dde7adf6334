#include "assoclab/presets.hpp"

#include <map>
#include <sstream>

namespace assoclab {

namespace {

std::string seed_line() {
    std::ostringstream os;
    os << "master_seed = " << kDefaultMasterSeed << "\n";
    return os.str();
}

std::string cw_pair(const char* name, double b1, double b2) {
    std::ostringstream os;
    os << "[experiment]\nname = " << name << "\nstatistics = t,rho\nn = 1000\n"
       << "replicates = 2000\n"
       << seed_line()
       << "\n[model_x]\nkind = curie_weiss\nbeta = " << b1 << "\nsampler = exact\n"
       << "\n[model_y]\nkind = curie_weiss\nbeta = " << b2 << "\nsampler = exact\n";
    return os.str();
}

std::string dense_pair(const char* name, const char* kind, double beta, const char* extra) {
    std::ostringstream os;
    os << "[experiment]\nname = " << name << "\nstatistics = t,rho\nn = 800\n"
       << "replicates = 1000\n"
       << seed_line()
       << "\n[model_x]\nkind = " << kind << "\nbeta = " << beta << "\nsampler = glauber\n"
       << extra
       << "\n[model_y]\nkind = " << kind << "\nbeta = " << beta << "\nsampler = glauber\n"
       << extra;
    return os.str();
}

std::string ols_scenario(const char* name, bool identity_x, const char* g) {
    std::ostringstream os;
    os << "[experiment]\nname = " << name << "\nstatistics = ols\nn = 200\n"
       << "replicates = 500\n"
       << seed_line();
    if (identity_x)
        os << "\n[model_x]\nkind = gaussian\ncovariance = identity\n";
    else
        os << "\n[model_x]\nkind = gaussian\ncovariance = eigenspec\nprofile = power:2\n";
    os << "\n[ols]\n";
    if (identity_x) os << "f = const:1\n";
    os << "g = " << g << "\n";
    return os.str();
}

const std::map<std::string, std::string>& registry() {
    static const std::map<std::string, std::string> reg = [] {
        std::map<std::string, std::string> m;
        m["iid_baseline"] =
            "[experiment]\nname = iid_baseline\nstatistics = t,rho\nn = 1000\n"
            "replicates = 2000\n" +
            seed_line() +
            "\n[model_x]\nkind = curie_weiss\nbeta = 0\nsampler = exact\n";
        m["figure2"] =
            "[experiment]\nname = figure2\nstatistics = t,rho\nn = 4096\n"
            "replicates = 500\n" +
            seed_line() +
            "\n[model_x]\nkind = lattice\nside = 64\ndim = 2\nbeta = 0\nsampler = wolff\n"
            "\n[sweep]\nbeta_grid = 0,0.4,0.8,1.2,1.6\nvary_y = true\nstatistic = rho\n"
            "\n[output]\nhistogram = true\n";
        m["figure3"] =
            "[experiment]\nname = figure3\nstatistics = t,rho\nn = 4096\n"
            "replicates = 500\n" +
            seed_line() +
            "\n[model_x]\nkind = lattice\nside = 64\ndim = 2\nbeta = 0\nsampler = wolff\n"
            "\n[sweep]\nbeta_grid = 0,0.4,0.8,1.2,1.6\nvary_y = true\nstatistic = t\n"
            "\n[output]\nhistogram = true\n";
        m["figure4"] =
            "[experiment]\nname = figure4\nstatistics = t,rho\nn = 200\n"
            "replicates = 1000\n" +
            seed_line() +
            "note = spike spectrum: top centered eigenvalue n^2.5, remainder 1\n"
            "\n[model_x]\nkind = gaussian\ncovariance = eigenspec\neigen_family = spike:2.5\n"
            "\n[output]\nhistogram = true\n";
        m["t4ii_spike"] = m["figure4"];
        m["figure5a"] = ols_scenario("figure5a", false, "exp:+:0.85");
        m["figure5b"] = ols_scenario("figure5b", false, "exp:+:1");
        m["figure5c"] = ols_scenario("figure5c", false, "exp:-:1");
        m["figure5d"] = ols_scenario("figure5d", false, "exp:-:0.85");
        m["figure5e"] = ols_scenario("figure5e", true, "exp:+:1");
        m["t2_cw_05_05"] = cw_pair("t2_cw_05_05", 0.5, 0.5);
        m["t2_cw_15_15"] = cw_pair("t2_cw_15_15", 1.5, 1.5);
        m["t2_cw_2_03"] = cw_pair("t2_cw_2_03", 2.0, 0.3);
        m["t3_bipartite_05"] = dense_pair("t3_bipartite_05", "complete_bipartite", 0.5, "");
        m["t3_bipartite_15"] = dense_pair("t3_bipartite_15", "complete_bipartite", 1.5, "");
        m["t3_regular_05"] = dense_pair("t3_regular_05", "random_regular", 0.5, "degree = 200\n");
        m["t3_regular_15"] = dense_pair("t3_regular_15", "random_regular", 1.5, "degree = 200\n");
        m["t4i_sigma4"] =
            "[experiment]\nname = t4i_sigma4\nstatistics = t,rho\nn = 1000\n"
            "replicates = 2000\n" +
            seed_line() +
            "\n[model_x]\nkind = gaussian\ncovariance = eigenspec\neigen_family = sigma2:4\n";
        m["c5_equicorr_03"] =
            "[experiment]\nname = c5_equicorr_03\nstatistics = t,rho\nn = 1000\n"
            "replicates = 2000\n" +
            seed_line() +
            "\n[model_x]\nkind = gaussian\ncovariance = equicorrelation\nrho = 0.3\n";
        m["c5_equicorr_07"] =
            "[experiment]\nname = c5_equicorr_07\nstatistics = t,rho\nn = 1000\n"
            "replicates = 2000\n" +
            seed_line() +
            "\n[model_x]\nkind = gaussian\ncovariance = equicorrelation\nrho = 0.7\n";
        return m;
    }();
    return reg;
}

}  // namespace

std::vector<std::string> preset_names() {
    std::vector<std::string> out;
    for (const auto& [k, v] : registry()) out.push_back(k);
    return out;
}

bool has_preset(const std::string& name) { return registry().count(name) > 0; }

std::string preset_config_text(const std::string& name) {
    auto it = registry().find(name);
    if (it == registry().end())
        throw Error(ErrorKind::Config, "unknown preset: " + name);
    return it->second;
}

}  // namespace assoclab
