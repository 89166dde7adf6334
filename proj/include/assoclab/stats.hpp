// Association statistics computed from one (x, y) pair, and the
// no-intercept least-squares fit with its i.i.d.-formula variance.
#pragma once

#include <span>
#include <vector>

#include "assoclab/error.hpp"

namespace assoclab {

struct AssociationSample {
    double t_n = 0.0;        // sample covariance, 1/n normalization
    double rho_n = 0.0;      // sample correlation
    double scaled_t = 0.0;   // sqrt(n) * t_n
    double scaled_rho = 0.0; // sqrt(n) * rho_n
};

struct OlsFit {
    double beta_hat = 0.0;
    double naive_var = 0.0;  // residual-based i.i.d. variance of beta_hat
    double ci_low = 0.0;
    double ci_high = 0.0;
    bool covers_zero = false;
};

// (1/n) sum (x_i - xbar)(y_i - ybar)
double sample_covariance(std::span<const double> x, std::span<const double> y);

// Throws Degenerate if either vector has zero centered sum of squares.
double sample_correlation(std::span<const double> x, std::span<const double> y);

AssociationSample compute_association(std::span<const double> x,
                                      std::span<const double> y);

// y = x*beta + e, no intercept. naive_var = |e|^2 / (n |x|^2);
// CI uses the normal critical value at level alpha.
OlsFit ols_fit(std::span<const double> x, std::span<const double> y, double alpha);

// Conditional-on-x sampling variance of beta_hat: x' Sigma x / |x|^4,
// Sigma given as a dense row-major n x n matrix.
double ols_true_variance(std::span<const double> x, std::span<const double> sigma_eps);

// Standard normal CDF, upper quantile helpers.
double normal_cdf(double x);
double normal_quantile(double p);  // inverse CDF, p in (0,1)

}  // namespace assoclab
