#include <doctest.h>

#include <cmath>
#include <vector>

#include "assoclab/rng.hpp"
#include "assoclab/stats.hpp"

using namespace assoclab;

TEST_CASE("sample covariance: pinned values") {
    std::vector<double> a{1, -1}, b{1, -1}, c{1, 1};
    CHECK(sample_covariance(a, b) == doctest::Approx(1.0));
    CHECK(sample_covariance(a, c) == doctest::Approx(0.0));
    // means 2.5; centered products are 0.75 each, so the sum is 3;
    // cross-checked via (x.y - sx sy / n)/n = (28 - 25)/4
    std::vector<double> x{1, 2, 3, 4}, y{2, 1, 4, 3};
    CHECK(sample_covariance(x, y) == doctest::Approx(0.75));
}

TEST_CASE("sample correlation: pinned values") {
    std::vector<double> x{1, 2, 3, 4}, y{2, 1, 4, 3};
    CHECK(sample_correlation(x, x) == doctest::Approx(1.0));
    std::vector<double> a{1, -1, 1, -1}, b{-1, 1, -1, 1};
    CHECK(sample_correlation(a, b) == doctest::Approx(-1.0));
    // 3 / (sqrt(5) * sqrt(5)) with centered sums of squares 5 each
    CHECK(sample_correlation(x, y) == doctest::Approx(0.6));
}

TEST_CASE("degenerate correlation raises a typed error") {
    std::vector<double> c{2, 2, 2}, y{1, 2, 3};
    CHECK_THROWS_AS(sample_correlation(c, y), Error);
    try {
        sample_correlation(y, c);
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Degenerate);
    }
    std::vector<double> bad{1, 2};
    CHECK_THROWS_AS(sample_covariance(y, bad), Error);
}

TEST_CASE("covariance invariances on random inputs") {
    Rng rng(12345);
    for (int rep = 0; rep < 50; ++rep) {
        const int n = 2 + static_cast<int>(rng.below(500));
        std::vector<double> x(n), y(n), xs(n), ys(n);
        for (int i = 0; i < n; ++i) {
            x[i] = rng.normal();
            y[i] = rng.normal();
        }
        const double c = 10 * rng.normal(), d = 10 * rng.normal();
        const double a = std::exp(rng.normal());
        for (int i = 0; i < n; ++i) {
            xs[i] = x[i] + c;
            ys[i] = y[i] + d;
        }
        const double base = sample_covariance(x, y);
        CHECK(sample_covariance(xs, ys) == doctest::Approx(base).epsilon(1e-10));
        for (int i = 0; i < n; ++i) xs[i] = a * x[i];
        CHECK(sample_covariance(xs, y) == doctest::Approx(a * base).epsilon(1e-10));
        // |rho| <= 1 and symmetry
        const double r1 = sample_correlation(x, y);
        CHECK(std::abs(r1) <= 1.0);
        CHECK(sample_correlation(y, x) == doctest::Approx(r1).epsilon(1e-12));
        // affine invariance of the correlation, positive slope
        for (int i = 0; i < n; ++i) xs[i] = a * x[i] + c;
        CHECK(sample_correlation(xs, y) == doctest::Approx(r1).epsilon(1e-9));
    }
}

TEST_CASE("covariance equals the centering-matrix quadratic form") {
    Rng rng(777);
    for (int rep = 0; rep < 20; ++rep) {
        const int n = 2 + static_cast<int>(rng.below(499));
        std::vector<double> x(n), y(n);
        for (int i = 0; i < n; ++i) {
            x[i] = rng.normal();
            y[i] = rng.normal();
        }
        // (1/n) x'Jy with J = I - 11'/n
        double sx = 0, sy = 0, dot = 0;
        for (int i = 0; i < n; ++i) {
            sx += x[i];
            sy += y[i];
            dot += x[i] * y[i];
        }
        const double quad = (dot - sx * sy / n) / n;
        CHECK(sample_covariance(x, y) == doctest::Approx(quad).epsilon(1e-10));
    }
}

TEST_CASE("ols fit: pinned values") {
    std::vector<double> x{1, 0, -1}, y{1, 1, -1};
    auto f = ols_fit(x, y, 0.05);
    CHECK(f.beta_hat == doctest::Approx(1.0));
    CHECK(f.naive_var == doctest::Approx(1.0 / 6.0));
    CHECK(f.ci_low <= f.beta_hat);
    CHECK(f.beta_hat <= f.ci_high);

    std::vector<double> y2{2, 0, -2};  // exactly 2x
    auto g = ols_fit(x, y2, 0.05);
    CHECK(g.beta_hat == doctest::Approx(2.0));
    CHECK(g.naive_var == doctest::Approx(0.0));

    std::vector<double> zero{0, 0, 0};
    CHECK_THROWS_AS(ols_fit(zero, y, 0.05), Error);
}

TEST_CASE("ols residual orthogonality") {
    Rng rng(99);
    for (int rep = 0; rep < 30; ++rep) {
        const int n = 5 + static_cast<int>(rng.below(200));
        std::vector<double> x(n), y(n);
        for (int i = 0; i < n; ++i) {
            x[i] = rng.normal();
            y[i] = 0.7 * x[i] + rng.normal();
        }
        auto f = ols_fit(x, y, 0.05);
        double xe = 0, xx = 0;
        for (int i = 0; i < n; ++i) {
            xe += x[i] * (y[i] - f.beta_hat * x[i]);
            xx += x[i] * x[i];
        }
        CHECK(std::abs(xe) / xx <= 1e-8);
    }
}

TEST_CASE("ols true variance: pinned values") {
    std::vector<double> x{1, 1};
    std::vector<double> eye2{1, 0, 0, 1};
    CHECK(ols_true_variance(x, eye2) == doctest::Approx(0.5));  // 1/|x|^2
    std::vector<double> two_eye{2, 0, 0, 2};
    CHECK(ols_true_variance(x, two_eye) == doctest::Approx(1.0));
    std::vector<double> x2{1, 0};
    std::vector<double> s{1, 0.5, 0.5, 1};
    CHECK(ols_true_variance(x2, s) == doctest::Approx(1.0));
    std::vector<double> wrong_size{1.0};
    CHECK_THROWS_AS(ols_true_variance(x2, wrong_size), Error);
}

TEST_CASE("normal quantile inverts the cdf") {
    for (double p : {0.001, 0.025, 0.3, 0.5, 0.7, 0.975, 0.999}) {
        CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-10));
    }
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-9));
}

TEST_CASE("ols coverage at the classical i.i.d. baseline") {
    // x,eps i.i.d. standard normal, beta=0: the 95% CI covers 0 at the
    // nominal rate
    Rng rng(2024);
    const int reps = 2000, n = 400;
    int covered = 0;
    std::vector<double> x(n), y(n);
    for (int r = 0; r < reps; ++r) {
        for (int i = 0; i < n; ++i) {
            x[i] = rng.normal();
            y[i] = rng.normal();
        }
        if (ols_fit(x, y, 0.05).covers_zero) ++covered;
    }
    const double cov = static_cast<double>(covered) / reps;
    CHECK(cov > 0.93);
    CHECK(cov < 0.97);
}
