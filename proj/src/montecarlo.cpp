#include "assoclab/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <thread>

#include <json.hpp>

namespace assoclab {

using ordered_json = nlohmann::ordered_json;

ModelDesc ModelDesc::make_ising(GraphFamily family, double beta, SamplerPlan plan) {
    ModelDesc d;
    d.kind = Kind::Ising;
    d.ising.family = std::move(family);
    d.ising.beta = beta;
    d.ising.plan = plan;
    return d;
}

ModelDesc ModelDesc::make_gaussian(CovarianceModel cov) {
    ModelDesc d;
    d.kind = Kind::Gaussian;
    d.gaussian.covariance = std::move(cov);
    return d;
}

namespace {

bool same_family(const GraphFamily& a, const GraphFamily& b) {
    return a.kind == b.kind && a.n == b.n && a.side == b.side && a.dim == b.dim &&
           a.degree == b.degree && a.seed == b.seed && a.dense == b.dense;
}

bool same_covariance(const CovarianceModel& a, const CovarianceModel& b) {
    if (a.kind != b.kind || a.n != b.n) return false;
    switch (a.kind) {
        case CovarianceModel::Kind::Equicorrelation: return a.rho == b.rho;
        case CovarianceModel::Kind::IdentityScaled: return a.variance == b.variance;
        case CovarianceModel::Kind::FromEigenSpec:
            return a.spec.basis == b.spec.basis && a.spec.basis_seed == b.spec.basis_seed &&
                   a.spec.values == b.spec.values;
    }
    return false;
}

bool dense_regular_kind(GraphKind k) {
    return k == GraphKind::CurieWeiss || k == GraphKind::CompleteBipartite ||
           k == GraphKind::RandomRegular;
}

struct PreparedModel {
    ModelDesc::Kind kind = ModelDesc::Kind::Ising;
    std::shared_ptr<const InteractionMatrix> q;
    std::shared_ptr<const IsingSamplerContext> ctx;
    std::shared_ptr<const CovarianceHandle> cov;
    double beta = 0.0;

    void draw(uint64_t seed, int64_t rep, std::vector<double>& out, SpinVector& tmp) const {
        if (kind == ModelDesc::Kind::Ising) {
            tmp = ctx->draw(seed, rep);
            spins_to_doubles(tmp, out);
        } else {
            out.resize(cov->size());
            Rng rng(seed);
            cov->sample(rng, out);
        }
    }
};

PreparedModel prepare_model(const ModelDesc& desc, int n, uint64_t master_seed,
                            const PreparedModel* shareable, const ModelDesc* other) {
    PreparedModel p;
    p.kind = desc.kind;
    if (desc.kind == ModelDesc::Kind::Ising) {
        if (desc.ising.family.n != n)
            throw Error(ErrorKind::Config, "model size does not match experiment n");
        p.beta = desc.ising.beta;
        if (shareable && other && other->kind == ModelDesc::Kind::Ising &&
            same_family(desc.ising.family, other->ising.family)) {
            p.q = shareable->q;  // X and Y share one realized interaction matrix
        } else {
            GraphFamily fam = desc.ising.family;
            if (fam.kind == GraphKind::RandomRegular && fam.seed == 0) fam.seed = master_seed;
            p.q = std::make_shared<InteractionMatrix>(build_interaction(fam));
        }
        p.ctx = std::make_shared<IsingSamplerContext>(IsingModel::make(*p.q, desc.ising.beta),
                                                      desc.ising.plan);
    } else {
        if (desc.gaussian.covariance.n != n)
            throw Error(ErrorKind::Config, "covariance size does not match experiment n");
        if (shareable && other && other->kind == ModelDesc::Kind::Gaussian &&
            same_covariance(desc.gaussian.covariance, other->gaussian.covariance)) {
            p.cov = shareable->cov;
        } else {
            p.cov = std::make_shared<CovarianceHandle>(desc.gaussian.covariance);
        }
    }
    return p;
}

void parallel_for(int64_t count, int threads, const std::function<void(int64_t)>& fn) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    threads = static_cast<int>(std::min<int64_t>(threads, count));
    if (threads <= 1) {
        for (int64_t r = 0; r < count; ++r) fn(r);
        return;
    }
    std::atomic<int64_t> next{0};
    std::mutex err_mu;
    std::exception_ptr err;
    auto worker = [&]() {
        while (true) {
            const int64_t r = next.fetch_add(1);
            if (r >= count) break;
            try {
                fn(r);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!err) err = std::current_exception();
                next.store(count);
                break;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

struct MeanVar {
    int count = 0;
    double mean = 0.0, var = 0.0;
};

MeanVar mean_var(const std::vector<double>& v) {
    MeanVar mv;
    mv.count = static_cast<int>(v.size());
    if (v.empty()) return mv;
    double s = 0.0;
    for (double x : v) s += x;
    mv.mean = s / mv.count;
    if (mv.count > 1) {
        double acc = 0.0;
        for (double x : v) acc += (x - mv.mean) * (x - mv.mean);
        mv.var = acc / (mv.count - 1);
    }
    return mv;
}

std::optional<PredictionPair> attach_prediction(const ExperimentConfig& cfg,
                                                const PreparedModel& px,
                                                const PreparedModel& py,
                                                std::string& note) {
    if (cfg.model_x.kind == ModelDesc::Kind::Ising &&
        cfg.model_y.kind == ModelDesc::Kind::Ising) {
        const GraphKind kx = cfg.model_x.ising.family.kind;
        const GraphKind ky = cfg.model_y.ising.family.kind;
        if (kx == GraphKind::Lattice && ky == GraphKind::Lattice &&
            cfg.model_x.ising.family.dim == cfg.model_y.ising.family.dim) {
            try {
                return predict_lattice(px.beta, py.beta, cfg.model_x.ising.family.dim);
            } catch (const Error&) {
                note = "no prediction: lattice betas outside the subcritical regime";
                return std::nullopt;
            }
        }
        if (dense_regular_kind(kx) && dense_regular_kind(ky))
            return predict_curie_weiss(px.beta, py.beta);
        return std::nullopt;
    }
    if (cfg.model_x.kind == ModelDesc::Kind::Gaussian &&
        cfg.model_y.kind == ModelDesc::Kind::Gaussian &&
        same_covariance(cfg.model_x.gaussian.covariance, cfg.model_y.gaussian.covariance)) {
        const auto& spec = px.cov->centered_spectrum();
        try {
            return predict_gaussian(spec, cfg.n);
        } catch (const Error&) {
            note = "no prediction: spectrum between the bulk and spike regimes";
            return std::nullopt;
        }
    }
    return std::nullopt;
}

}  // namespace

McReport run_experiment(const ExperimentConfig& cfg) {
    if (cfg.replicates < 100)
        throw Error(ErrorKind::Parameter, "experiments require at least 100 replicates");
    if (cfg.n < 2) throw Error(ErrorKind::Parameter, "experiments require n >= 2");
    if (!cfg.want_t && !cfg.want_rho && !cfg.want_ols)
        throw Error(ErrorKind::Parameter, "no statistics requested");

    PreparedModel px = prepare_model(cfg.model_x, cfg.n, cfg.master_seed, nullptr, nullptr);
    PreparedModel py;
    std::shared_ptr<const CovarianceHandle> noise;
    if (cfg.want_ols) {
        if (cfg.model_x.kind != ModelDesc::Kind::Gaussian)
            throw Error(ErrorKind::Config, "ols experiments need a gaussian regressor model");
        if (cfg.noise.covariance.n != cfg.n)
            throw Error(ErrorKind::Config, "noise covariance size does not match n");
        noise = std::make_shared<CovarianceHandle>(cfg.noise.covariance);
    } else {
        py = prepare_model(cfg.model_y, cfg.n, cfg.master_seed, &px, &cfg.model_x);
    }

    McReport rep;
    rep.name = cfg.name;
    rep.n = cfg.n;
    rep.replicates = cfg.replicates;
    rep.master_seed = cfg.master_seed;
    rep.nominal_alpha = cfg.nominal_alpha;
    rep.ols_beta_true = cfg.ols_beta_true;
    if (px.ctx) rep.two_well_x = px.ctx->two_well_heuristic();
    if (py.ctx) rep.two_well_y = py.ctx->two_well_heuristic();

    std::optional<PredictionPair> pred;
    if (!cfg.want_ols) pred = attach_prediction(cfg, px, py, rep.note);
    if (!cfg.note.empty())
        rep.note = rep.note.empty() ? cfg.note : cfg.note + "; " + rep.note;

    const int64_t reps = cfg.replicates;
    rep.rows.assign(reps, {});
    if (cfg.keep_spins) {
        if (px.kind == ModelDesc::Kind::Ising) rep.spins_x.assign(reps, {});
        if (py.ctx) rep.spins_y.assign(reps, {});
    }
    const double sqn = std::sqrt(static_cast<double>(cfg.n));
    const bool do_t = cfg.want_t, do_rho = cfg.want_rho, do_ols = cfg.want_ols;

    parallel_for(reps, cfg.threads, [&](int64_t r) {
        static thread_local std::vector<double> x, y;
        static thread_local SpinVector tmp;
        ReplicateRow& row = rep.rows[r];
        const uint64_t sx = derive_seed(cfg.master_seed, static_cast<uint64_t>(r), kStreamX);
        px.draw(sx, r, x, tmp);
        if (!rep.spins_x.empty()) rep.spins_x[r] = tmp.spins;
        if (do_ols) {
            const uint64_t se = derive_seed(cfg.master_seed, static_cast<uint64_t>(r), kStreamNoise);
            y.resize(cfg.n);
            Rng rng(se);
            noise->sample(rng, y);
            for (int i = 0; i < cfg.n; ++i) y[i] += cfg.ols_beta_true * x[i];
        } else {
            const uint64_t sy = derive_seed(cfg.master_seed, static_cast<uint64_t>(r), kStreamY);
            py.draw(sy, r, y, tmp);
            if (!rep.spins_y.empty()) rep.spins_y[r] = tmp.spins;
        }
        try {
            if (do_t) {
                row.t_n = sample_covariance(x, y);
                row.scaled_t = sqn * row.t_n;
            }
            if (do_rho) {
                row.rho_n = sample_correlation(x, y);
                row.scaled_rho = sqn * row.rho_n;
            }
            if (do_ols) {
                OlsFit f = ols_fit(x, y, cfg.nominal_alpha);
                row.beta_hat = f.beta_hat;
                row.naive_var = f.naive_var;
                row.ci_low = f.ci_low;
                row.ci_high = f.ci_high;
                row.covered = f.ci_low <= cfg.ols_beta_true && cfg.ols_beta_true <= f.ci_high;
                row.reject_zero = !f.covers_zero;
            }
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::Degenerate) throw;
            row.degenerate = true;
        }
    });

    for (const auto& row : rep.rows)
        if (row.degenerate) ++rep.degenerate_count;
    if (rep.degenerate_count * 100 > cfg.replicates) {
        throw Error(ErrorKind::Degenerate,
                    "experiment aborted: " + std::to_string(rep.degenerate_count) + " of " +
                        std::to_string(cfg.replicates) +
                        " replicates degenerate (constant draws; likely far above the "
                        "critical temperature)");
    }

    const double zcrit = normal_quantile(1.0 - cfg.nominal_alpha / 2.0);
    auto collect = [&](auto getter) {
        std::vector<double> v;
        v.reserve(rep.rows.size());
        for (const auto& row : rep.rows)
            if (!row.degenerate) v.push_back(getter(row));
        return v;
    };

    if (do_t) {
        auto v = collect([](const ReplicateRow& r) { return r.scaled_t; });
        StatSummary s;
        s.label = "scaled_t";
        auto mv = mean_var(v);
        s.count = mv.count;
        s.mean = mv.mean;
        s.var = mv.var;
        s.sd = std::sqrt(mv.var);
        int rejects = 0;
        for (double t : v)
            if (std::abs(t) > zcrit) ++rejects;
        s.type1_rate = v.empty() ? 0.0 : static_cast<double>(rejects) / v.size();
        if (pred) {
            s.prediction = pred->covariance;
            if (pred->covariance.law == LawKind::Normal) {
                auto [d, p] = ks_test(v, normal_cdf_law(pred->covariance.variance));
                s.ks_distance = d;
                s.ks_pvalue = p;
            }
        }
        rep.stats.push_back(std::move(s));
        if (pred && pred->covariance.law == LawKind::NormalTimesChi) {
            // spike regime: n T / top centered eigenvalue against the product law
            const double top = *pred->covariance.scale_top_eig;
            std::vector<double> w;
            w.reserve(v.size());
            for (double t : v) w.push_back(t * sqn / top);
            StatSummary sp;
            sp.label = "spike_scaled_t";
            auto mv2 = mean_var(w);
            sp.count = mv2.count;
            sp.mean = mv2.mean;
            sp.var = mv2.var;
            sp.sd = std::sqrt(mv2.var);
            sp.prediction = pred->covariance;
            auto [d, p] = ks_test(w, [](double t) { return normal_times_chi_cdf(t); });
            sp.ks_distance = d;
            sp.ks_pvalue = p;
            rep.stats.push_back(std::move(sp));
        }
    }
    if (do_rho) {
        auto v = collect([](const ReplicateRow& r) { return r.scaled_rho; });
        StatSummary s;
        s.label = "scaled_rho";
        auto mv = mean_var(v);
        s.count = mv.count;
        s.mean = mv.mean;
        s.var = mv.var;
        s.sd = std::sqrt(mv.var);
        int rejects = 0;
        for (double t : v)
            if (std::abs(t) > zcrit) ++rejects;
        s.type1_rate = v.empty() ? 0.0 : static_cast<double>(rejects) / v.size();
        if (pred && pred->correlation.statistic == StatisticKind::ScaledCorrelation) {
            s.prediction = pred->correlation;
            if (pred->correlation.law == LawKind::Normal) {
                auto [d, p] = ks_test(v, normal_cdf_law(pred->correlation.variance));
                s.ks_distance = d;
                s.ks_pvalue = p;
            }
        }
        rep.stats.push_back(std::move(s));
        if (pred && pred->correlation.law == LawKind::Rademacher) {
            auto raw = collect([](const ReplicateRow& r) { return r.rho_n; });
            StatSummary sr;
            sr.label = "rho_raw";
            auto mv2 = mean_var(raw);
            sr.count = mv2.count;
            sr.mean = mv2.mean;
            sr.var = mv2.var;
            sr.sd = std::sqrt(mv2.var);
            sr.prediction = pred->correlation;
            int above = 0;
            for (double t : raw)
                if (std::abs(t) > 0.8) ++above;
            sr.frac_abs_above = raw.empty() ? 0.0 : static_cast<double>(above) / raw.size();
            rep.stats.push_back(std::move(sr));
        }
    }
    if (do_ols) {
        OlsSummary o;
        auto bh = collect([](const ReplicateRow& r) { return r.beta_hat; });
        auto mv = mean_var(bh);
        o.mean_beta_hat = mv.mean;
        o.var_beta_scaled = mv.var * cfg.n;
        int covered = 0, rejects = 0;
        double nv = 0.0;
        int cnt = 0;
        for (const auto& row : rep.rows) {
            if (row.degenerate) continue;
            ++cnt;
            if (row.covered) ++covered;
            if (row.reject_zero) ++rejects;
            nv += row.naive_var;
        }
        o.coverage = cnt ? static_cast<double>(covered) / cnt : 0.0;
        o.reject_rate = cnt ? static_cast<double>(rejects) / cnt : 0.0;
        o.mean_naive_var_scaled = cnt ? nv / cnt * cfg.n : 0.0;
        if (cfg.ols_f && cfg.ols_g) o.condition = ols_condition(*cfg.ols_f, *cfg.ols_g, cfg.n);
        rep.ols = std::move(o);
    }
    return rep;
}

// --- KS --------------------------------------------------------------------

std::pair<double, double> ks_test(std::vector<double> samples, const CdfFn& cdf) {
    if (samples.size() < 100)
        throw Error(ErrorKind::Parameter, "ks test needs at least 100 samples");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, std::max((i + 1) / n - f, f - i / n));
    }
    return {d, kolmogorov_pvalue(samples.size(), d)};
}

double kolmogorov_pvalue(size_t n_samples, double distance) {
    const double x = std::sqrt(static_cast<double>(n_samples)) * distance;
    if (x <= 0.2) return 1.0;  // series region where the survival mass is all of it
    double p = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * x * x);
        p += (k % 2 == 1) ? term : -term;
    }
    p *= 2.0;
    return std::min(1.0, std::max(0.0, p));
}

CdfFn normal_cdf_law(double variance) {
    if (variance <= 0.0) throw Error(ErrorKind::Parameter, "law variance must be positive");
    const double sd = std::sqrt(variance);
    return [sd](double t) { return normal_cdf(t / sd); };
}

namespace {

double phi(double x) { return 0.3989422804014327 * std::exp(-0.5 * x * x); }

double simpson_panel(double t, double a, double b, int m) {
    // integrand 2 phi(b) Phi(t/b); at the left endpoint of the first panel
    // (b = 0) the limit for t > 0 is 2 phi(0)
    const double h = (b - a) / m;
    auto f = [t](double u) {
        if (u <= 0.0) return 2.0 * phi(0.0);
        return 2.0 * phi(u) * normal_cdf(t / u);
    };
    double s = f(a) + f(b);
    for (int i = 1; i < m; ++i) s += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return s * h / 3.0;
}

}  // namespace

double normal_times_chi_cdf(double t) {
    if (t == 0.0) return 0.5;
    if (t < 0.0) return 1.0 - normal_times_chi_cdf(-t);
    const double v = simpson_panel(t, 0.0, 0.1, 4096) + simpson_panel(t, 0.1, 1.0, 4096) +
                     simpson_panel(t, 1.0, 12.0, 4096);
    return std::min(1.0, v);
}

// --- sweeps ------------------------------------------------------------------

namespace {

std::vector<double> ranks_of(const std::vector<double>& v) {
    std::vector<size_t> idx(v.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (size_t pos = 0; pos < idx.size(); ++pos) r[idx[pos]] = static_cast<double>(pos + 1);
    // average ties
    size_t i = 0;
    std::vector<size_t> sorted = idx;
    while (i < sorted.size()) {
        size_t j = i;
        while (j + 1 < sorted.size() && v[sorted[j + 1]] == v[sorted[i]]) ++j;
        if (j > i) {
            double avg = 0.0;
            for (size_t k = i; k <= j; ++k) avg += r[sorted[k]];
            avg /= (j - i + 1);
            for (size_t k = i; k <= j; ++k) r[sorted[k]] = avg;
        }
        i = j + 1;
    }
    return r;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const auto n = a.size();
    double ma = 0, mb = 0;
    for (size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0, saa = 0, sbb = 0;
    for (size_t i = 0; i < n; ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (saa <= 0 || sbb <= 0) return 0.0;
    return sab / std::sqrt(saa * sbb);
}

double bootstrap_sd_se(const std::vector<double>& v, uint64_t seed, int B = 200) {
    Rng rng(seed);
    std::vector<double> sds;
    sds.reserve(B);
    std::vector<double> resample(v.size());
    for (int b = 0; b < B; ++b) {
        for (auto& x : resample) x = v[rng.below(v.size())];
        auto mv = mean_var(resample);
        sds.push_back(std::sqrt(mv.var));
    }
    auto mv = mean_var(sds);
    return std::sqrt(mv.var);
}

}  // namespace

TrendReport monotonicity_sweep(const ExperimentConfig& base,
                               const std::vector<double>& beta_grid, bool vary_y,
                               bool use_correlation) {
    if (beta_grid.size() < 2)
        throw Error(ErrorKind::Parameter, "sweep needs at least 2 grid points");
    if (base.model_x.kind == ModelDesc::Kind::Ising &&
        base.model_x.ising.family.kind == GraphKind::Lattice &&
        base.model_x.ising.family.dim <= 2) {
        const double bc = lattice_critical_beta(base.model_x.ising.family.dim);
        for (double b : beta_grid)
            if (b < 0.0 || b >= bc)
                throw Error(ErrorKind::Regime, "sweep grid outside [0, critical beta)");
    }
    TrendReport tr;
    std::vector<double> betas, sds;
    for (size_t i = 0; i < beta_grid.size(); ++i) {
        ExperimentConfig cfg = base;
        cfg.name = base.name + "@beta=" + std::to_string(beta_grid[i]);
        cfg.model_x.ising.beta = beta_grid[i];
        if (vary_y) cfg.model_y.ising.beta = beta_grid[i];
        McReport r = run_experiment(cfg);  // common master seed across points
        const StatSummary* s = r.find(use_correlation ? "scaled_rho" : "scaled_t");
        if (!s) throw Error(ErrorKind::Parameter, "sweep statistic missing from report");
        TrendPoint pt;
        pt.beta = beta_grid[i];
        pt.sd = s->sd;
        pt.var = s->var;
        std::vector<double> vals;
        for (const auto& row : r.rows)
            if (!row.degenerate)
                vals.push_back(use_correlation ? row.scaled_rho : row.scaled_t);
        pt.sd_bootstrap_se =
            bootstrap_sd_se(vals, derive_seed(base.master_seed, i, kStreamBoot));
        tr.points.push_back(pt);
        betas.push_back(pt.beta);
        sds.push_back(pt.sd);
        tr.reports.push_back(std::move(r));
    }
    tr.spearman = pearson(ranks_of(betas), ranks_of(sds));
    return tr;
}

McReport ols_coverage_experiment(const OlsScenario& sc) {
    auto basis_ok = [](const CovarianceModel& a, const CovarianceModel& b) {
        auto diagonalizable_anywhere = [](const CovarianceModel& m) {
            return m.kind == CovarianceModel::Kind::IdentityScaled;
        };
        if (diagonalizable_anywhere(a) || diagonalizable_anywhere(b)) return true;
        if (a.kind != CovarianceModel::Kind::FromEigenSpec ||
            b.kind != CovarianceModel::Kind::FromEigenSpec)
            return false;
        return a.spec.basis == b.spec.basis && a.spec.basis_seed == b.spec.basis_seed;
    };
    if (!basis_ok(sc.sigma_x, sc.sigma_eps))
        throw Error(ErrorKind::Config,
                    "ols scenario requires a shared eigenbasis for X and the errors");
    ExperimentConfig cfg;
    cfg.name = sc.name;
    cfg.model_x = ModelDesc::make_gaussian(sc.sigma_x);
    cfg.noise.covariance = sc.sigma_eps;
    cfg.want_t = false;
    cfg.want_rho = false;
    cfg.want_ols = true;
    cfg.n = sc.n;
    cfg.replicates = sc.replicates;
    cfg.master_seed = sc.master_seed;
    cfg.nominal_alpha = sc.alpha;
    cfg.ols_beta_true = sc.beta_true;
    cfg.threads = sc.threads;
    cfg.ols_f = sc.f;
    cfg.ols_g = sc.g;
    return run_experiment(cfg);
}

// --- spec builders ---------------------------------------------------------------

EigenSpec correlation_variance_spec(int n, double sigma2) {
    if (n < 2 || sigma2 < 1.0)
        throw Error(ErrorKind::Parameter, "construction needs n >= 2 and sigma2 >= 1");
    EigenSpec spec;
    spec.n = n;
    spec.basis = BasisKind::CenteringAligned;
    spec.values.assign(n, 0.0);
    spec.values[0] = 1.0;  // mean direction
    int l0 = static_cast<int>(std::ceil(n / sigma2));
    l0 = std::min(l0, n - 1);
    for (int i = 1; i <= l0; ++i) spec.values[i] = 1.0;
    return spec;
}

EigenSpec spike_spec(int n, double exponent) {
    if (n < 3) throw Error(ErrorKind::Parameter, "spike construction needs n >= 3");
    EigenSpec spec;
    spec.n = n;
    spec.basis = BasisKind::CenteringAligned;
    spec.values.assign(n, 1.0);
    spec.values[1] = std::pow(static_cast<double>(n), exponent);
    return spec;
}

EigenSpec profile_spec(int n, const OlsProfile& profile, uint64_t basis_seed,
                       BasisKind basis) {
    EigenSpec spec;
    spec.n = n;
    spec.basis = basis;
    spec.basis_seed = basis_seed;
    spec.values.resize(n);
    for (int i = 1; i <= n; ++i)
        spec.values[i - 1] = profile.value(static_cast<double>(i) / n, n);
    return spec;
}

// --- serialization -----------------------------------------------------------------

namespace {

ordered_json prediction_json(const LimitPrediction& p) {
    ordered_json j;
    switch (p.statistic) {
        case StatisticKind::ScaledCovariance: j["statistic"] = "scaled_covariance"; break;
        case StatisticKind::ScaledCorrelation: j["statistic"] = "scaled_correlation"; break;
        case StatisticKind::RawCorrelation: j["statistic"] = "raw_correlation"; break;
        case StatisticKind::OlsValidity: j["statistic"] = "ols_validity"; break;
    }
    j["law"] = to_string(p.law);
    if (p.law == LawKind::Normal) j["variance"] = p.variance;
    if (p.law == LawKind::Unknown)
        j["direction"] = p.direction == VarianceDirection::Inflated  ? "inflated"
                         : p.direction == VarianceDirection::Deflated ? "deflated"
                                                                      : "unchanged";
    if (p.scale_top_eig) j["scale_top_eigenvalue"] = *p.scale_top_eig;
    j["source"] = p.source;
    return j;
}

}  // namespace

const StatSummary* McReport::find(const std::string& label) const {
    for (const auto& s : stats)
        if (s.label == label) return &s;
    return nullptr;
}

std::string McReport::to_json() const {
    ordered_json j;
    j["name"] = name;
    j["n"] = n;
    j["replicates"] = replicates;
    j["master_seed"] = master_seed;
    j["nominal_alpha"] = nominal_alpha;
    j["ols_beta_true"] = ols_beta_true;
    j["degenerate_count"] = degenerate_count;
    if (two_well_x || two_well_y) {
        j["two_well_heuristic"] = ordered_json{{"x", two_well_x}, {"y", two_well_y}};
    }
    if (!note.empty()) j["note"] = note;
    ordered_json arr = ordered_json::array();
    for (const auto& s : stats) {
        ordered_json js;
        js["label"] = s.label;
        js["count"] = s.count;
        js["mean"] = s.mean;
        js["var"] = s.var;
        js["sd"] = s.sd;
        if (s.type1_rate) js["type1_rate"] = *s.type1_rate;
        if (s.prediction) js["prediction"] = prediction_json(*s.prediction);
        if (s.ks_distance) {
            js["ks"] = ordered_json{{"distance", *s.ks_distance},
                                    {"pvalue", *s.ks_pvalue},
                                    {"pass_at_0.001", *s.ks_pvalue > 0.001}};
        }
        if (s.frac_abs_above) js["frac_abs_above_0.8"] = *s.frac_abs_above;
        arr.push_back(std::move(js));
    }
    j["statistics"] = std::move(arr);
    if (ols) {
        ordered_json jo;
        jo["coverage"] = ols->coverage;
        jo["reject_rate"] = ols->reject_rate;
        jo["mean_beta_hat"] = ols->mean_beta_hat;
        jo["mean_naive_var_scaled"] = ols->mean_naive_var_scaled;
        jo["var_beta_scaled"] = ols->var_beta_scaled;
        if (ols->condition) {
            jo["condition"] = ordered_json{{"int_fg", ols->condition->int_fg},
                                           {"int_f", ols->condition->int_f},
                                           {"int_g", ols->condition->int_g},
                                           {"riemann_fg", ols->condition->riemann_fg},
                                           {"riemann_f", ols->condition->riemann_f},
                                           {"riemann_g", ols->condition->riemann_g},
                                           {"verdict", to_string(ols->condition->verdict)}};
        }
        j["ols"] = std::move(jo);
    }
    return j.dump(2);
}

void write_replicates_csv(const McReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Parameter, "cannot open csv path: " + path);
    out << "replicate,t_n,scaled_t,rho_n,scaled_rho,beta_hat,naive_var,ci_low,ci_high\n";
    char buf[256];
    for (size_t r = 0; r < report.rows.size(); ++r) {
        const auto& row = report.rows[r];
        std::snprintf(buf, sizeof(buf),
                      "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r, row.t_n,
                      row.scaled_t, row.rho_n, row.scaled_rho, row.beta_hat, row.naive_var,
                      row.ci_low, row.ci_high);
        out << buf;
    }
}

}  // namespace assoclab
