#include "assoclab/stats.hpp"

#include <cmath>

namespace assoclab {

namespace {

double mean_of(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

}  // namespace

double sample_covariance(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw Error(ErrorKind::Dimension, "length mismatch");
    if (x.size() < 2) throw Error(ErrorKind::Parameter, "need n >= 2");
    const double mx = mean_of(x), my = mean_of(y);
    double s = 0.0;
    for (size_t i = 0; i < x.size(); ++i) s += (x[i] - mx) * (y[i] - my);
    return s / static_cast<double>(x.size());
}

double sample_correlation(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw Error(ErrorKind::Dimension, "length mismatch");
    if (x.size() < 2) throw Error(ErrorKind::Parameter, "need n >= 2");
    const double mx = mean_of(x), my = mean_of(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0)
        throw Error(ErrorKind::Degenerate, "constant input vector in correlation");
    double r = sxy / (std::sqrt(sxx) * std::sqrt(syy));
    if (r > 1.0) r = 1.0;
    if (r < -1.0) r = -1.0;
    return r;
}

AssociationSample compute_association(std::span<const double> x,
                                      std::span<const double> y) {
    AssociationSample s;
    const double sqn = std::sqrt(static_cast<double>(x.size()));
    s.t_n = sample_covariance(x, y);
    s.rho_n = sample_correlation(x, y);
    s.scaled_t = sqn * s.t_n;
    s.scaled_rho = sqn * s.rho_n;
    return s;
}

OlsFit ols_fit(std::span<const double> x, std::span<const double> y, double alpha) {
    if (x.size() != y.size()) throw Error(ErrorKind::Dimension, "length mismatch");
    const size_t n = x.size();
    if (n < 2) throw Error(ErrorKind::Parameter, "need n >= 2");
    double xx = 0.0, xy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        xx += x[i] * x[i];
        xy += x[i] * y[i];
    }
    if (xx <= 0.0) throw Error(ErrorKind::Degenerate, "zero-norm regressor");
    OlsFit f;
    f.beta_hat = xy / xx;
    double ee = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double e = y[i] - x[i] * f.beta_hat;
        ee += e * e;
    }
    f.naive_var = ee / (static_cast<double>(n) * xx);
    const double z = normal_quantile(1.0 - alpha / 2.0);
    const double hw = z * std::sqrt(f.naive_var);
    f.ci_low = f.beta_hat - hw;
    f.ci_high = f.beta_hat + hw;
    f.covers_zero = f.ci_low <= 0.0 && 0.0 <= f.ci_high;
    return f;
}

double ols_true_variance(std::span<const double> x, std::span<const double> sigma_eps) {
    const size_t n = x.size();
    if (sigma_eps.size() != n * n)
        throw Error(ErrorKind::Dimension, "covariance size mismatch");
    double quad = 0.0, xx = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (size_t j = 0; j < n; ++j) row += sigma_eps[i * n + j] * x[j];
        quad += x[i] * row;
        xx += x[i] * x[i];
    }
    if (xx <= 0.0) throw Error(ErrorKind::Degenerate, "zero-norm regressor");
    return quad / (xx * xx);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / 1.4142135623730951); }

// Acklam's rational approximation refined with one Halley step.
double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw Error(ErrorKind::Parameter, "quantile needs p in (0,1)");
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425, phigh = 1 - plow;
    double x;
    if (p < plow) {
        double q = std::sqrt(-2 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    } else if (p <= phigh) {
        double q = p - 0.5, r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
    } else {
        double q = std::sqrt(-2 * std::log(1 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    }
    const double e = normal_cdf(x) - p;
    const double u = e * std::sqrt(2 * M_PI) * std::exp(x * x / 2);
    x = x - u / (1 + x * u / 2);
    return x;
}

}  // namespace assoclab
