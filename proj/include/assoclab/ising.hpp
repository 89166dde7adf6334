// Ising model sampling: exact Curie-Weiss draws through the magnetization
// count pmf, Wolff cluster updates on lattices, single-site heat-bath
// updates on general interaction matrices, brute-force enumeration for
// small n, and the auxiliary-field cross-check sampler.
#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "assoclab/graphs.hpp"
#include "assoclab/rng.hpp"

namespace assoclab {

struct SpinVector {
    std::vector<int8_t> spins;  // entries exactly -1 or +1

    int size() const { return static_cast<int>(spins.size()); }
    double mean() const;
    uint64_t to_mask() const;  // bit i set iff spin i == +1 (size <= 63)
};

void spins_to_doubles(const SpinVector& s, std::vector<double>& out);

// Gibbs weight exp((beta/2) * scale * x'Qx). For lattices the stored unit
// couplings are scaled by n/(2|E|), which puts the 2d critical point at
// 2 log(1+sqrt(2)); dense families carry the scaling in their entries.
struct IsingModel {
    const InteractionMatrix* q = nullptr;
    double beta = 0.0;
    double coupling_scale = 1.0;

    static IsingModel make(const InteractionMatrix& q, double beta);
    double effective_beta() const { return beta * coupling_scale; }
    int size() const { return q->size(); }
};

enum class SamplerMethod { Auto, ExactCW, Wolff, Glauber, BruteForce };

struct SamplerPlan {
    SamplerMethod method = SamplerMethod::Auto;
    int glauber_burn_in_sweeps = -1;  // -1: 500 subcritical, 2000 supercritical
    int glauber_thin_sweeps = 5;
    int wolff_burn_in_clusters = 200;
    int wolff_thin_clusters = 20;
    // Cluster counts are a poor burn-in unit at high temperature where
    // clusters are near-singletons, so burn-in additionally runs until this
    // many multiples of n sites have been flipped.
    double wolff_burn_floor_sweeps = 10.0;
    double wolff_thin_floor_sweeps = 1.0;
};

const char* to_string(SamplerMethod m);

// --- exact Curie-Weiss sampling ---------------------------------------

class CurieWeissExact {
public:
    CurieWeissExact(int n, double beta);
    // pmf of the number of +1 spins, proportional to C(n,k) exp(beta (2k-n)^2 / 2n)
    const std::vector<double>& count_pmf() const { return pmf_; }
    SpinVector sample(Rng& rng) const;

private:
    int n_;
    std::vector<double> pmf_, cdf_;
};

// Auxiliary-field construction: draws the mixing field z from its marginal
// density (tabulated inverse CDF), then spins i.i.d. with
// P(+1 | z) = sigmoid(2 beta z). Cross-check route only.
class CurieWeissAuxVar {
public:
    CurieWeissAuxVar(int n, double beta);
    SpinVector sample(Rng& rng) const;
    // analytic count pmf: Binomial(n, p(z)) mixed over the field density
    std::vector<double> count_pmf() const;

private:
    int n_;
    double beta_;
    std::vector<double> grid_, cdf_;
};

// --- MCMC samplers ------------------------------------------------------

class GlauberSampler {
public:
    GlauberSampler(const IsingModel& model, uint64_t seed);
    void init_random();
    void init_all(int8_t value);
    void run_sweeps(int sweeps);
    const SpinVector& state() const { return state_; }

private:
    double local_field(int i) const;
    void update_site(int i);

    IsingModel model_;
    Rng rng_;
    SpinVector state_;
    std::vector<int32_t> order_;
    // maintained aggregates for O(1) fields on the implicit dense families
    int64_t total_ = 0;
    int64_t half_sum_[2] = {0, 0};
};

class WolffSampler {
public:
    WolffSampler(const IsingModel& model, uint64_t seed);
    void init_random();
    // flips clusters until both the count and the flipped-site floor are met
    void run(int min_clusters, double floor_sweeps);
    const SpinVector& state() const { return state_; }

private:
    int flip_cluster();

    IsingModel model_;
    Rng rng_;
    double p_add_;
    SpinVector state_;
    std::vector<int32_t> stack_;
    std::vector<uint32_t> visit_epoch_;
    uint32_t epoch_ = 0;
};

// --- brute force ----------------------------------------------------------

// Exact pmf over all 2^n states, indexed by to_mask(); n <= 20.
std::vector<double> brute_force_pmf(const IsingModel& model);

// --- one-shot replicate draws ----------------------------------------------

// Immutable per-experiment context; draw() is safe to call concurrently.
class IsingSamplerContext {
public:
    IsingSamplerContext(const IsingModel& model, const SamplerPlan& plan);

    SpinVector draw(uint64_t seed, int64_t replicate) const;
    SamplerMethod resolved_method() const { return method_; }
    bool two_well_heuristic() const { return two_well_; }
    const IsingModel& model() const { return model_; }

private:
    IsingModel model_;
    SamplerPlan plan_;
    SamplerMethod method_;
    bool two_well_ = false;
    int glauber_burn_in_ = 500;
    std::shared_ptr<CurieWeissExact> exact_;
    std::shared_ptr<std::vector<double>> brute_cdf_;
};

}  // namespace assoclab
