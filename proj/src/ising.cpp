#include "assoclab/ising.hpp"

#include <algorithm>
#include <cmath>

namespace assoclab {

double SpinVector::mean() const {
    int64_t s = 0;
    for (int8_t v : spins) s += v;
    return static_cast<double>(s) / static_cast<double>(spins.size());
}

uint64_t SpinVector::to_mask() const {
    uint64_t m = 0;
    for (size_t i = 0; i < spins.size(); ++i)
        if (spins[i] > 0) m |= (1ULL << i);
    return m;
}

void spins_to_doubles(const SpinVector& s, std::vector<double>& out) {
    out.resize(s.spins.size());
    for (size_t i = 0; i < s.spins.size(); ++i) out[i] = s.spins[i];
}

IsingModel IsingModel::make(const InteractionMatrix& q, double beta) {
    if (beta < 0.0) throw Error(ErrorKind::Parameter, "beta must be >= 0");
    IsingModel m;
    m.q = &q;
    m.beta = beta;
    m.coupling_scale = 1.0;
    if (q.kind() == GraphKind::Lattice)
        m.coupling_scale = static_cast<double>(q.size()) / (2.0 * static_cast<double>(q.edge_count()));
    return m;
}

const char* to_string(SamplerMethod m) {
    switch (m) {
        case SamplerMethod::Auto: return "auto";
        case SamplerMethod::ExactCW: return "exact_cw";
        case SamplerMethod::Wolff: return "wolff";
        case SamplerMethod::Glauber: return "glauber";
        case SamplerMethod::BruteForce: return "brute_force";
    }
    return "?";
}

// --- exact Curie-Weiss ------------------------------------------------------

CurieWeissExact::CurieWeissExact(int n, double beta) : n_(n) {
    if (n < 2) throw Error(ErrorKind::Parameter, "curie_weiss exact needs n >= 2");
    if (beta < 0.0) throw Error(ErrorKind::Parameter, "beta must be >= 0");
    std::vector<double> logw(n + 1);
    const double lgn = std::lgamma(n + 1.0);
    double mx = -1e300;
    for (int k = 0; k <= n; ++k) {
        const double s = 2.0 * k - n;
        logw[k] = lgn - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
                  beta * s * s / (2.0 * n);
        mx = std::max(mx, logw[k]);
    }
    pmf_.resize(n + 1);
    double tot = 0.0;
    for (int k = 0; k <= n; ++k) {
        pmf_[k] = std::exp(logw[k] - mx);
        tot += pmf_[k];
    }
    cdf_.resize(n + 1);
    double run = 0.0;
    for (int k = 0; k <= n; ++k) {
        pmf_[k] /= tot;
        run += pmf_[k];
        cdf_[k] = run;
    }
    cdf_[n] = 1.0;
}

SpinVector CurieWeissExact::sample(Rng& rng) const {
    const double u = rng.uniform();
    const int k = static_cast<int>(std::lower_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
    SpinVector sv;
    sv.spins.assign(n_, -1);
    // uniform k-subset via partial Fisher-Yates
    std::vector<int32_t> idx(n_);
    for (int i = 0; i < n_; ++i) idx[i] = i;
    for (int i = 0; i < k; ++i) {
        const int j = i + static_cast<int>(rng.below(static_cast<uint64_t>(n_ - i)));
        std::swap(idx[i], idx[j]);
        sv.spins[idx[i]] = 1;
    }
    return sv;
}

// --- auxiliary-field cross check ---------------------------------------------

CurieWeissAuxVar::CurieWeissAuxVar(int n, double beta) : n_(n), beta_(beta) {
    if (n < 2) throw Error(ErrorKind::Parameter, "aux-var sampler needs n >= 2");
    if (beta <= 0.0)
        throw Error(ErrorKind::Parameter, "aux-var construction needs beta > 0");
    // field density q(z) proportional to exp(n (log(2 cosh(beta z)) - beta z^2 / 2))
    const int pts = 1 << 15;
    const double zmax = 4.0;
    grid_.resize(pts + 1);
    std::vector<double> h(pts + 1);
    double hmax = -1e300;
    for (int i = 0; i <= pts; ++i) {
        const double z = -zmax + 2.0 * zmax * i / pts;
        grid_[i] = z;
        const double lc = std::abs(beta * z) + std::log1p(std::exp(-2.0 * std::abs(beta * z)));
        h[i] = n * (lc + std::log(2.0) - 0.5 * beta * z * z);
        hmax = std::max(hmax, h[i]);
    }
    cdf_.assign(pts + 1, 0.0);
    for (int i = 1; i <= pts; ++i) {
        const double a = std::exp(h[i - 1] - hmax), b = std::exp(h[i] - hmax);
        cdf_[i] = cdf_[i - 1] + 0.5 * (a + b) * (grid_[i] - grid_[i - 1]);
    }
    const double tot = cdf_.back();
    for (auto& c : cdf_) c /= tot;
}

SpinVector CurieWeissAuxVar::sample(Rng& rng) const {
    const double u = rng.uniform();
    const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
    size_t i = static_cast<size_t>(it - cdf_.begin());
    double z;
    if (i == 0) {
        z = grid_.front();
    } else {
        const double c0 = cdf_[i - 1], c1 = cdf_[i];
        const double t = c1 > c0 ? (u - c0) / (c1 - c0) : 0.5;
        z = grid_[i - 1] + t * (grid_[i] - grid_[i - 1]);
    }
    const double p_plus = 1.0 / (1.0 + std::exp(-2.0 * beta_ * z));
    SpinVector sv;
    sv.spins.resize(n_);
    for (int j = 0; j < n_; ++j) sv.spins[j] = rng.uniform() < p_plus ? 1 : -1;
    return sv;
}

std::vector<double> CurieWeissAuxVar::count_pmf() const {
    std::vector<double> pmf(n_ + 1, 0.0);
    const double lgn = std::lgamma(n_ + 1.0);
    for (size_t i = 1; i < grid_.size(); ++i) {
        const double w = cdf_[i] - cdf_[i - 1];
        if (w <= 0.0) continue;
        const double z = 0.5 * (grid_[i] + grid_[i - 1]);
        const double lp = -std::log1p(std::exp(-2.0 * beta_ * z));   // log p(+1|z)
        const double lq = -std::log1p(std::exp(2.0 * beta_ * z));    // log p(-1|z)
        for (int k = 0; k <= n_; ++k) {
            const double lbin = lgn - std::lgamma(k + 1.0) - std::lgamma(n_ - k + 1.0);
            pmf[k] += w * std::exp(lbin + k * lp + (n_ - k) * lq);
        }
    }
    double tot = 0.0;
    for (double p : pmf) tot += p;
    for (auto& p : pmf) p /= tot;
    return pmf;
}

// --- Glauber ------------------------------------------------------------------

GlauberSampler::GlauberSampler(const IsingModel& model, uint64_t seed)
    : model_(model), rng_(seed) {
    const int n = model.size();
    state_.spins.assign(n, 1);
    order_.resize(n);
    for (int i = 0; i < n; ++i) order_[i] = i;
    init_all(1);
}

void GlauberSampler::init_random() {
    for (auto& s : state_.spins) s = rng_.bernoulli(0.5) ? 1 : -1;
    total_ = 0;
    half_sum_[0] = half_sum_[1] = 0;
    const int n = model_.size();
    for (int i = 0; i < n; ++i) {
        total_ += state_.spins[i];
        half_sum_[i < n / 2 ? 0 : 1] += state_.spins[i];
    }
}

void GlauberSampler::init_all(int8_t value) {
    const int n = model_.size();
    std::fill(state_.spins.begin(), state_.spins.end(), value);
    total_ = static_cast<int64_t>(value) * n;
    half_sum_[0] = static_cast<int64_t>(value) * (n / 2);
    half_sum_[1] = static_cast<int64_t>(value) * (n - n / 2);
}

double GlauberSampler::local_field(int i) const {
    const auto& q = *model_.q;
    switch (q.kind()) {
        case GraphKind::CurieWeiss:
            return static_cast<double>(total_ - state_.spins[i]) / q.size();
        case GraphKind::CompleteBipartite: {
            const int other = (i < q.size() / 2) ? 1 : 0;
            return 2.0 * static_cast<double>(half_sum_[other]) / q.size();
        }
        case GraphKind::Lattice:
        case GraphKind::RandomRegular: {
            int64_t s = 0;
            for (int32_t j : q.neighbors(i)) s += state_.spins[j];
            return q.edge_weight() * static_cast<double>(s);
        }
        case GraphKind::ExplicitMatrix: {
            const auto& d = q.dense_values();
            const int n = q.size();
            double s = 0.0;
            for (int j = 0; j < n; ++j) s += d[static_cast<size_t>(i) * n + j] * state_.spins[j];
            return s;
        }
    }
    return 0.0;
}

void GlauberSampler::update_site(int i) {
    const double field = local_field(i);
    const double p_plus = 1.0 / (1.0 + std::exp(-2.0 * model_.effective_beta() * field));
    const int8_t nv = rng_.uniform() < p_plus ? 1 : -1;
    const int8_t ov = state_.spins[i];
    if (nv != ov) {
        state_.spins[i] = nv;
        const int delta = 2 * nv;  // nv - ov
        total_ += delta;
        half_sum_[i < model_.size() / 2 ? 0 : 1] += delta;
    }
}

void GlauberSampler::run_sweeps(int sweeps) {
    for (int s = 0; s < sweeps; ++s) {
        rng_.shuffle(order_);
        for (int32_t i : order_) update_site(i);
    }
}

// --- Wolff ---------------------------------------------------------------------

WolffSampler::WolffSampler(const IsingModel& model, uint64_t seed)
    : model_(model), rng_(seed) {
    const auto& q = *model.q;
    if (q.kind() != GraphKind::Lattice)
        throw Error(ErrorKind::Parameter, "wolff sampler requires a lattice model");
    if (q.lattice_dim() < 1 || q.lattice_dim() > 3)
        throw Error(ErrorKind::Unsupported, "wolff supports lattice dim 1..3");
    p_add_ = 1.0 - std::exp(-2.0 * model.effective_beta() * q.edge_weight());
    state_.spins.assign(q.size(), 1);
    visit_epoch_.assign(q.size(), 0);
    init_random();
}

void WolffSampler::init_random() {
    for (auto& s : state_.spins) s = rng_.bernoulli(0.5) ? 1 : -1;
}

int WolffSampler::flip_cluster() {
    const auto& q = *model_.q;
    const int n = q.size();
    const int seed_site = static_cast<int>(rng_.below(static_cast<uint64_t>(n)));
    const int8_t val = state_.spins[seed_site];
    ++epoch_;
    stack_.clear();
    stack_.push_back(seed_site);
    visit_epoch_[seed_site] = epoch_;
    int flipped = 0;
    while (!stack_.empty()) {
        const int v = stack_.back();
        stack_.pop_back();
        state_.spins[v] = static_cast<int8_t>(-val);
        ++flipped;
        for (int32_t u : q.neighbors(v)) {
            if (visit_epoch_[u] == epoch_ || state_.spins[u] != val) continue;
            if (rng_.uniform() < p_add_) {
                visit_epoch_[u] = epoch_;
                stack_.push_back(u);
            }
        }
    }
    return flipped;
}

void WolffSampler::run(int min_clusters, double floor_sweeps) {
    const int64_t floor_sites =
        static_cast<int64_t>(floor_sweeps * static_cast<double>(model_.size()));
    int clusters = 0;
    int64_t sites = 0;
    while (clusters < min_clusters || sites < floor_sites) {
        sites += flip_cluster();
        ++clusters;
    }
    // a coin-flip extra cluster; at beta = 0 every cluster is a singleton and
    // a fixed flip count would conserve the spin-count parity between samples
    if (rng_.bernoulli(0.5)) flip_cluster();
}

// --- brute force -----------------------------------------------------------------

std::vector<double> brute_force_pmf(const IsingModel& model) {
    const int n = model.size();
    if (n > 20) throw Error(ErrorKind::Size, "brute force capped at n = 20");
    const auto& q = *model.q;
    const double eb = model.effective_beta();
    const uint64_t states = 1ULL << n;

    std::vector<int8_t> x(n, -1);
    // energy of the all-minus state
    double energy = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) energy += q.entry(i, j);  // x_i x_j = 1
    energy *= eb / 2.0;

    std::vector<double> logw(states);
    logw[0] = energy;
    // Gray-code walk: state for code g(s) differs from g(s-1) in bit ctz(s)
    uint64_t mask = 0;
    for (uint64_t s = 1; s < states; ++s) {
        const int k = __builtin_ctzll(s);
        double field = 0.0;
        for (int j = 0; j < n; ++j) field += q.entry(k, j) * x[j];
        energy += -2.0 * eb * x[k] * field;
        x[k] = static_cast<int8_t>(-x[k]);
        mask ^= (1ULL << k);
        logw[mask] = energy;
    }
    double mx = -1e300;
    for (double v : logw) mx = std::max(mx, v);
    double tot = 0.0;
    for (auto& v : logw) {
        v = std::exp(v - mx);
        tot += v;
    }
    for (auto& v : logw) v /= tot;
    return logw;
}

// --- replicate draws ----------------------------------------------------------------

IsingSamplerContext::IsingSamplerContext(const IsingModel& model, const SamplerPlan& plan)
    : model_(model), plan_(plan), method_(plan.method) {
    const GraphKind kind = model.q->kind();
    if (method_ == SamplerMethod::Auto) {
        if (kind == GraphKind::CurieWeiss)
            method_ = SamplerMethod::ExactCW;
        else if (kind == GraphKind::Lattice)
            method_ = SamplerMethod::Wolff;
        else
            method_ = SamplerMethod::Glauber;
    }
    switch (method_) {
        case SamplerMethod::ExactCW:
            if (kind != GraphKind::CurieWeiss)
                throw Error(ErrorKind::Parameter, "exact sampler requires the complete-graph family");
            exact_ = std::make_shared<CurieWeissExact>(model.size(), model.beta);
            break;
        case SamplerMethod::BruteForce: {
            auto pmf = brute_force_pmf(model);
            auto cdf = std::make_shared<std::vector<double>>(std::move(pmf));
            double run = 0.0;
            for (auto& v : *cdf) {
                run += v;
                v = run;
            }
            cdf->back() = 1.0;
            brute_cdf_ = std::move(cdf);
            break;
        }
        case SamplerMethod::Glauber: {
            glauber_burn_in_ = plan.glauber_burn_in_sweeps;
            if (glauber_burn_in_ < 0) glauber_burn_in_ = model.beta <= 1.0 ? 500 : 2000;
            const bool dense_regular = kind == GraphKind::CurieWeiss ||
                                       kind == GraphKind::CompleteBipartite ||
                                       kind == GraphKind::RandomRegular;
            two_well_ = dense_regular && model.beta > 1.0;
            break;
        }
        case SamplerMethod::Wolff:
            break;  // constructor validates family and dimension
        case SamplerMethod::Auto:
            break;
    }
    if (method_ == SamplerMethod::Wolff) {
        WolffSampler probe(model, 0);  // validate eagerly
        (void)probe;
    }
}

SpinVector IsingSamplerContext::draw(uint64_t seed, int64_t replicate) const {
    switch (method_) {
        case SamplerMethod::ExactCW: {
            Rng rng(seed);
            return exact_->sample(rng);
        }
        case SamplerMethod::BruteForce: {
            Rng rng(seed);
            const double u = rng.uniform();
            const auto& cdf = *brute_cdf_;
            const uint64_t mask =
                static_cast<uint64_t>(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
            SpinVector sv;
            sv.spins.resize(model_.size());
            for (int i = 0; i < model_.size(); ++i)
                sv.spins[i] = (mask >> i) & 1 ? 1 : -1;
            return sv;
        }
        case SamplerMethod::Glauber: {
            GlauberSampler g(model_, seed);
            if (two_well_)
                g.init_all(replicate % 2 == 0 ? 1 : -1);
            else
                g.init_random();
            g.run_sweeps(glauber_burn_in_);
            return g.state();
        }
        case SamplerMethod::Wolff: {
            WolffSampler w(model_, seed);
            w.run(plan_.wolff_burn_in_clusters, plan_.wolff_burn_floor_sweeps);
            return w.state();
        }
        case SamplerMethod::Auto:
            break;
    }
    throw Error(ErrorKind::Parameter, "unresolved sampler method");
}

}  // namespace assoclab
