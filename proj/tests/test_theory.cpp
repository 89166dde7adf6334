#include <doctest.h>

#include <cmath>

#include "assoclab/theory.hpp"

using namespace assoclab;

namespace {

// independent oracle: damped fixed-point iteration from 0.9
double magnetization_by_iteration(double beta) {
    double m = 0.9;
    for (int i = 0; i < 20000; ++i) m = std::tanh(beta * m);
    return m;
}

}  // namespace

TEST_CASE("magnetization fixed point") {
    CHECK(solve_magnetization(0.5) == 0.0);
    CHECK(solve_magnetization(1.0) == 0.0);
    const double m2 = solve_magnetization(2.0);
    CHECK(m2 == doctest::Approx(magnetization_by_iteration(2.0)).epsilon(1e-9));
    CHECK(m2 == doctest::Approx(0.957504).epsilon(1e-6));
    for (double beta : {1.1, 1.5, 3.0, 5.0}) {
        const double m = solve_magnetization(beta);
        CHECK(m == doctest::Approx(magnetization_by_iteration(beta)).epsilon(1e-10));
        CHECK(std::abs(std::tanh(beta * m) - m) < 1e-11);
        CHECK(m > 0.0);
        CHECK(m < 1.0);
    }
}

TEST_CASE("curie-weiss prediction values") {
    auto p = predict_curie_weiss(0.5, 0.9);
    CHECK(p.covariance.law == LawKind::Normal);
    CHECK(p.covariance.variance == doctest::Approx(1.0));
    CHECK(p.correlation.variance == doctest::Approx(1.0));

    const double m2 = solve_magnetization(2.0);
    auto q = predict_curie_weiss(2.0, 0.3);
    CHECK(q.covariance.variance == doctest::Approx(1.0 - m2 * m2).epsilon(1e-9));
    CHECK(q.covariance.variance == doctest::Approx(0.08318).epsilon(1e-3));

    auto r = predict_curie_weiss(2.0, 2.0);
    CHECK(r.covariance.variance == doctest::Approx((1 - m2 * m2) * (1 - m2 * m2)).epsilon(1e-9));
    CHECK(r.covariance.variance == doctest::Approx(0.006919).epsilon(1e-3));
    CHECK(r.correlation.variance == doctest::Approx(1.0));
}

TEST_CASE("curie-weiss variance is non-increasing in beta, 1 on [0,1], below after") {
    double prev = 2.0;
    for (double beta = 0.0; beta <= 3.0; beta += 0.05) {
        const double v = predict_curie_weiss(beta, 0.0).covariance.variance;
        CHECK(v <= prev + 1e-12);
        if (beta <= 1.0)
            CHECK(v == doctest::Approx(1.0));
        else
            CHECK(v < 1.0);
        prev = v;
    }
}

TEST_CASE("lattice prediction: regimes and errors") {
    auto p = predict_lattice(0.0, 0.0, 2);
    CHECK(p.covariance.law == LawKind::Normal);
    CHECK(p.covariance.variance == doctest::Approx(1.0));

    auto q = predict_lattice(0.5, 0.5, 2);
    CHECK(q.covariance.law == LawKind::Unknown);
    CHECK(q.covariance.direction == VarianceDirection::Inflated);

    CHECK_NOTHROW(predict_lattice(1.7, 0.2, 2));  // both below 1.7627
    CHECK_THROWS_AS(predict_lattice(1.8, 0.2, 2), Error);
    CHECK_NOTHROW(predict_lattice(50.0, 0.0, 1));  // no 1-d transition
    CHECK(lattice_critical_beta(2) == doctest::Approx(2.0 * std::log(1.0 + std::sqrt(2.0))));
}

TEST_CASE("ols condition: closed-form integrals") {
    const double e = std::exp(1.0);
    // f = x^2, g = e^x: int fg = e-2 > (1/3)(e-1)
    auto rep = ols_condition(OlsProfile::power(2), OlsProfile::exponential(+1, 1), 200);
    CHECK(rep.int_fg == doctest::Approx(e - 2.0).epsilon(1e-7));
    CHECK(rep.int_f == doctest::Approx(1.0 / 3.0).epsilon(1e-7));
    CHECK(rep.int_g == doctest::Approx(e - 1.0).epsilon(1e-7));
    CHECK(rep.verdict == OlsVerdict::Anticonservative);

    // f = x^2, g = e^{-x}: int fg = 2 - 5/e < (1/3)(1 - 1/e)
    auto rep2 = ols_condition(OlsProfile::power(2), OlsProfile::exponential(-1, 1), 200);
    CHECK(rep2.int_fg == doctest::Approx(2.0 - 5.0 / e).epsilon(1e-7));
    CHECK(rep2.int_g == doctest::Approx(1.0 - 1.0 / e).epsilon(1e-7));
    CHECK(rep2.verdict == OlsVerdict::Valid);

    // constant f factors out: equality
    auto rep3 = ols_condition(OlsProfile::constant(2.5), OlsProfile::exponential(+1, 0.85), 200);
    CHECK(rep3.verdict == OlsVerdict::Exact);
}

TEST_CASE("ols condition: symmetry and scale invariance") {
    const OlsProfile f = OlsProfile::power(2);
    const OlsProfile g = OlsProfile::exponential(+1, 0.85);
    auto a = ols_condition(f, g, 300);
    auto b = ols_condition(g, f, 300);
    CHECK(a.verdict == b.verdict);
    CHECK(a.int_fg == doctest::Approx(b.int_fg).epsilon(1e-12));

    // scaling f by c scales both sides equally
    OlsProfile f2 = OlsProfile::power(2);
    auto scaled_value = [&](double x, int n) { return 7.0 * f2.value(x, n); };
    (void)scaled_value;
    std::vector<double> inline_vals;
    for (int i = 1; i <= 300; ++i) inline_vals.push_back(7.0 * f.value(i / 300.0, 300));
    auto c = ols_condition(OlsProfile::from_values(inline_vals), g, 300);
    CHECK(c.verdict == a.verdict);
}

TEST_CASE("ols condition: monotone pairs violate the inequality") {
    // both increasing (or both decreasing) profiles are anticonservative
    const OlsProfile incs[] = {OlsProfile::power(1), OlsProfile::power(2),
                               OlsProfile::exponential(+1, 1),
                               OlsProfile::exponential(+1, 0.85)};
    for (const auto& f : incs)
        for (const auto& g : incs) {
            // skip the near-degenerate constant-vs-constant case
            auto rep = ols_condition(f, g, 200);
            CHECK(rep.verdict == OlsVerdict::Anticonservative);
        }
    auto dec = ols_condition(OlsProfile::exponential(-1, 1), OlsProfile::exponential(-1, 0.85), 200);
    CHECK(dec.verdict == OlsVerdict::Anticonservative);
    // one increasing, one decreasing: valid
    auto mix = ols_condition(OlsProfile::power(1), OlsProfile::exponential(-1, 1), 200);
    CHECK(mix.verdict == OlsVerdict::Valid);
}

TEST_CASE("gaussian prediction regimes") {
    SpectralSummary bulk;
    bulk.centered_eigs.assign(999, 0.5);
    bulk.centered_eigs.push_back(0.0);
    bulk.deflation_factor = 0.9995;
    bulk.regime = SpectralRegime::Bulk;
    auto p = predict_gaussian(bulk, 1000);
    CHECK(p.covariance.law == LawKind::Normal);
    CHECK(p.covariance.variance == doctest::Approx(999 * 0.25 / 1000));
    CHECK(p.correlation.law == LawKind::Normal);

    SpectralSummary spike;
    spike.centered_eigs.assign(200, 0.0);
    spike.centered_eigs[0] = 4e4;
    spike.regime = SpectralRegime::Spike;
    auto q = predict_gaussian(spike, 200);
    CHECK(q.covariance.law == LawKind::NormalTimesChi);
    CHECK(*q.covariance.scale_top_eig == doctest::Approx(4e4));
    CHECK(q.correlation.law == LawKind::Rademacher);

    SpectralSummary nei;
    nei.centered_eigs.assign(100, 1.0);
    nei.regime = SpectralRegime::Neither;
    CHECK_THROWS_AS(predict_gaussian(nei, 100), Error);
}
