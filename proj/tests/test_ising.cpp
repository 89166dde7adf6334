#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "assoclab/ising.hpp"
#include "assoclab/theory.hpp"

using namespace assoclab;

namespace {

double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
    REQUIRE(p.size() == q.size());
    double tv = 0.0;
    for (size_t i = 0; i < p.size(); ++i) tv += std::abs(p[i] - q[i]);
    return tv / 2.0;
}

// aggregate a state pmf over +1 counts
std::vector<double> count_pmf_from_states(const std::vector<double>& pmf, int n) {
    std::vector<double> out(n + 1, 0.0);
    for (size_t mask = 0; mask < pmf.size(); ++mask)
        out[__builtin_popcountll(mask)] += pmf[mask];
    return out;
}

std::vector<double> empirical_state_pmf(const std::function<SpinVector()>& draw, int n,
                                        int samples) {
    std::vector<double> pmf(1ULL << n, 0.0);
    for (int s = 0; s < samples; ++s) pmf[draw().to_mask()] += 1.0;
    for (auto& p : pmf) p /= samples;
    return pmf;
}

}  // namespace

TEST_CASE("brute force pmf: two-spin complete graph closed form") {
    auto q = build_interaction(GraphFamily::curie_weiss(2));
    for (double beta : {0.3, 1.0, 2.5}) {
        auto model = IsingModel::make(q, beta);
        auto pmf = brute_force_pmf(model);
        const double z = 2 * std::exp(beta / 2) + 2 * std::exp(-beta / 2);
        CHECK(pmf[0b11] == doctest::Approx(std::exp(beta / 2) / z).epsilon(1e-12));
        CHECK(pmf[0b00] == doctest::Approx(std::exp(beta / 2) / z).epsilon(1e-12));
        CHECK(pmf[0b01] == doctest::Approx(pmf[0b10]).epsilon(1e-12));
    }
}

TEST_CASE("brute force pmf: beta=0 is uniform, any graph") {
    for (auto fam : {GraphFamily::lattice(2, 2), GraphFamily::complete_bipartite(4)}) {
        auto q = build_interaction(fam);
        auto pmf = brute_force_pmf(IsingModel::make(q, 0.0));
        for (double p : pmf) CHECK(p == doctest::Approx(1.0 / 16).epsilon(1e-12));
    }
}

TEST_CASE("brute force pmf sums to one and is flip symmetric") {
    for (auto fam : {GraphFamily::lattice(2, 2), GraphFamily::curie_weiss(6),
                     GraphFamily::complete_bipartite(6)}) {
        auto q = build_interaction(fam);
        auto pmf = brute_force_pmf(IsingModel::make(q, 0.8));
        double tot = 0.0;
        for (double p : pmf) tot += p;
        CHECK(tot == doctest::Approx(1.0).epsilon(1e-12));
        const uint64_t full = pmf.size() - 1;
        for (size_t mask = 0; mask < pmf.size(); ++mask)
            CHECK(pmf[mask] == doctest::Approx(pmf[full ^ mask]).epsilon(1e-12));
    }
    auto q = build_interaction(GraphFamily::curie_weiss(21));
    CHECK_THROWS_AS(brute_force_pmf(IsingModel::make(q, 0.5)), Error);
}

TEST_CASE("exact curie-weiss count pmf equals brute force, n <= 10") {
    for (int n : {4, 6, 10}) {
        auto q = build_interaction(GraphFamily::curie_weiss(n));
        for (double beta : {0.0, 0.5, 0.8, 1.0, 1.5}) {
            CurieWeissExact ex(n, beta);
            auto brute = count_pmf_from_states(brute_force_pmf(IsingModel::make(q, beta)), n);
            CHECK(total_variation(ex.count_pmf(), brute) < 1e-12);
        }
    }
}

TEST_CASE("exact curie-weiss draws: independence at beta=0") {
    CurieWeissExact ex(50, 0.0);
    Rng rng(11);
    int plus = 0;
    const int reps = 4000;
    for (int r = 0; r < reps; ++r) {
        auto sv = ex.sample(rng);
        if (sv.spins[0] > 0) ++plus;
    }
    CHECK(std::abs(plus / static_cast<double>(reps) - 0.5) < 0.03);
}

TEST_CASE("exact curie-weiss supercritical concentration at the magnetization root") {
    const double m = solve_magnetization(2.0);
    CurieWeissExact ex(2000, 2.0);
    Rng rng(123);
    int within = 0;
    const int reps = 500;
    for (int r = 0; r < reps; ++r) {
        auto sv = ex.sample(rng);
        if (std::abs(std::abs(sv.mean()) - m) < 0.05) ++within;
    }
    CHECK(within >= static_cast<int>(0.99 * reps));
}

TEST_CASE("exact curie-weiss state distribution matches brute force") {
    const int n = 6;
    const double beta = 0.8;
    auto q = build_interaction(GraphFamily::curie_weiss(n));
    auto target = brute_force_pmf(IsingModel::make(q, beta));
    CurieWeissExact ex(n, beta);
    Rng rng(5);
    auto emp = empirical_state_pmf([&] { return ex.sample(rng); }, n, 200000);
    CHECK(total_variation(emp, target) < 0.02);
}

TEST_CASE("auxiliary-field sampler agrees with the exact count pmf") {
    for (double beta : {0.5, 1.5}) {
        CurieWeissAuxVar aux(8, beta);
        CurieWeissExact ex(8, beta);
        CHECK(total_variation(aux.count_pmf(), ex.count_pmf()) < 1e-6);
    }
    // sampling smoke test
    CurieWeissAuxVar aux(10, 1.2);
    Rng rng(3);
    auto sv = aux.sample(rng);
    CHECK(sv.size() == 10);
    for (int8_t s : sv.spins) CHECK((s == 1 || s == -1));
    CHECK_THROWS_AS(CurieWeissAuxVar(8, 0.0), Error);
}

TEST_CASE("glauber on the bipartite graph converges to brute force") {
    const int n = 4;
    auto q = build_interaction(GraphFamily::complete_bipartite(n));
    auto model = IsingModel::make(q, 0.7);
    auto target = brute_force_pmf(model);
    GlauberSampler g(model, 99);
    g.init_random();
    g.run_sweeps(50);
    auto emp = empirical_state_pmf(
        [&] {
            g.run_sweeps(10);
            return g.state();
        },
        n, 60000);
    CHECK(total_variation(emp, target) < 0.02);
}

TEST_CASE("glauber at beta=0 is uniform after one sweep") {
    const int n = 4;
    auto q = build_interaction(GraphFamily::complete_bipartite(n));
    auto model = IsingModel::make(q, 0.0);
    GlauberSampler g(model, 17);
    g.init_all(1);
    auto emp = empirical_state_pmf(
        [&] {
            g.run_sweeps(1);
            return g.state();
        },
        n, 50000);
    std::vector<double> uniform(1 << n, 1.0 / (1 << n));
    CHECK(total_variation(emp, uniform) < 0.02);
}

TEST_CASE("glauber mean-field fluctuations of the sample mean") {
    // subcritical variance of the mean: (1/n) / (1 - beta)
    const int n = 500;
    const double beta = 0.5;
    auto q = build_interaction(GraphFamily::curie_weiss(n));
    auto model = IsingModel::make(q, beta);
    const int reps = 1000;
    double sum_sq = 0.0;
    for (int r = 0; r < reps; ++r) {
        GlauberSampler g(model, derive_seed(404, r, kStreamX));
        g.init_random();
        g.run_sweeps(200);
        const double m = g.state().mean();
        sum_sq += m * m;
    }
    const double target = 1.0 / (n * (1.0 - beta));
    CHECK(sum_sq / reps == doctest::Approx(target).epsilon(0.15));
}

TEST_CASE("wolff on the 2x2 lattice converges to brute force") {
    auto q = build_interaction(GraphFamily::lattice(2, 2));
    auto model = IsingModel::make(q, 0.5);
    auto target = brute_force_pmf(model);
    WolffSampler w(model, 42);
    w.run(50, 10.0);
    auto emp = empirical_state_pmf(
        [&] {
            w.run(10, 1.0);
            return w.state();
        },
        4, 200000);
    CHECK(total_variation(emp, target) < 0.02);
}

TEST_CASE("wolff at beta=0 leaves spins i.i.d. uniform") {
    auto q = build_interaction(GraphFamily::lattice(2, 2));
    auto model = IsingModel::make(q, 0.0);
    WolffSampler w(model, 1);
    auto emp = empirical_state_pmf(
        [&] {
            w.run(4, 1.0);
            return w.state();
        },
        4, 100000);
    std::vector<double> uniform(16, 1.0 / 16);
    CHECK(total_variation(emp, uniform) < 0.02);
}

TEST_CASE("wolff rejects unsupported inputs") {
    auto cb = build_interaction(GraphFamily::complete_bipartite(4));
    CHECK_THROWS_AS(WolffSampler(IsingModel::make(cb, 0.5), 1), Error);
    auto l4 = build_interaction(GraphFamily::lattice(2, 4));  // dim 4
    CHECK_THROWS_AS(WolffSampler(IsingModel::make(l4, 0.5), 1), Error);
    auto l3 = build_interaction(GraphFamily::lattice(2, 3));
    CHECK_NOTHROW(WolffSampler(IsingModel::make(l3, 0.5), 1));
}

TEST_CASE("lattice coupling scale places criticality at 2 log(1+sqrt 2)") {
    // per-edge Gibbs weight is beta * n/(2|E|); on the 64x64 grid the grid
    // scale is 1/(4(1-1/side))
    auto q = build_interaction(GraphFamily::lattice(64, 2));
    auto model = IsingModel::make(q, 1.6);
    const double scale = 4096.0 / (2.0 * 8064.0);
    CHECK(model.coupling_scale == doctest::Approx(scale).epsilon(1e-12));
    // effective per-edge coupling stays below the standard-normalization
    // critical point 0.4406868 for the full acceptance grid
    CHECK(model.effective_beta() < 0.4406868);
    auto m17 = IsingModel::make(q, 1.74);
    CHECK(m17.effective_beta() > 0.4406868);  // just above, as expected near 1.76*(1-1/64)
}

TEST_CASE("nearest-neighbor covariance is strictly positive on the lattice") {
    auto q = build_interaction(GraphFamily::lattice(64, 2));
    auto model = IsingModel::make(q, 0.6);
    const int reps = 40;
    double acc = 0.0;
    int64_t pairs = 0;
    for (int r = 0; r < reps; ++r) {
        WolffSampler w(model, derive_seed(7000, r, kStreamX));
        w.run(200, 10.0);
        const auto& s = w.state().spins;
        // E[X_i X_j] over all nearest-neighbor pairs; means vanish by symmetry
        for (int v = 0; v < q.size(); ++v)
            for (int32_t u : q.neighbors(v))
                if (u > v) {
                    acc += s[v] * s[u];
                    ++pairs;
                }
    }
    const double nn_cov = acc / static_cast<double>(pairs);
    CHECK(nn_cov > 0.1);
}

TEST_CASE("samplers are deterministic given seed and plan") {
    auto q = build_interaction(GraphFamily::lattice(4, 2));
    auto model = IsingModel::make(q, 0.9);
    WolffSampler w1(model, 31415), w2(model, 31415);
    w1.run(100, 5.0);
    w2.run(100, 5.0);
    CHECK(w1.state().spins == w2.state().spins);

    auto cb = build_interaction(GraphFamily::complete_bipartite(10));
    auto gm = IsingModel::make(cb, 0.8);
    GlauberSampler g1(gm, 2718), g2(gm, 2718);
    g1.init_random();
    g2.init_random();
    g1.run_sweeps(40);
    g2.run_sweeps(40);
    CHECK(g1.state().spins == g2.state().spins);

    CurieWeissExact ex(64, 1.2);
    Rng r1(555), r2(555);
    for (int i = 0; i < 5; ++i) CHECK(ex.sample(r1).spins == ex.sample(r2).spins);
}

TEST_CASE("sampler context: two-well flag and method resolution") {
    auto cw = build_interaction(GraphFamily::curie_weiss(50));
    IsingSamplerContext auto_cw(IsingModel::make(cw, 0.5), {});
    CHECK(auto_cw.resolved_method() == SamplerMethod::ExactCW);

    SamplerPlan glauber_plan;
    glauber_plan.method = SamplerMethod::Glauber;
    glauber_plan.glauber_burn_in_sweeps = 50;
    IsingSamplerContext sup(IsingModel::make(cw, 1.5), glauber_plan);
    CHECK(sup.two_well_heuristic());
    IsingSamplerContext sub(IsingModel::make(cw, 0.5), glauber_plan);
    CHECK_FALSE(sub.two_well_heuristic());

    auto lat = build_interaction(GraphFamily::lattice(3, 2));
    IsingSamplerContext auto_lat(IsingModel::make(lat, 0.5), {});
    CHECK(auto_lat.resolved_method() == SamplerMethod::Wolff);

    // identical seeds give identical draws through the context as well
    auto a = sup.draw(909, 4);
    auto b = sup.draw(909, 4);
    CHECK(a.spins == b.spins);
}

TEST_CASE("empirical spin-flip symmetry of the sample mean") {
    CurieWeissExact ex(100, 0.9);
    Rng rng(808);
    const int reps = 2000;
    double acc = 0.0, acc2 = 0.0;
    for (int r = 0; r < reps; ++r) {
        const double m = ex.sample(rng).mean();
        acc += m;
        acc2 += m * m;
    }
    const double mean = acc / reps;
    const double se = std::sqrt((acc2 / reps - mean * mean) / reps);
    CHECK(std::abs(mean) <= 4.0 * se);
}
