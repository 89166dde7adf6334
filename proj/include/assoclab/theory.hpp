// Closed-form limit predictions: magnetization fixed point, limiting
// variances and laws per model family, and the least-squares validity
// condition on eigenvalue profiles.
#pragma once

#include <functional>
#include <optional>
#include <string>

#include "assoclab/gaussian.hpp"

namespace assoclab {

enum class StatisticKind { ScaledCovariance, ScaledCorrelation, RawCorrelation, OlsValidity };
enum class LawKind { Normal, NormalTimesChi, Rademacher, Unknown };
enum class VarianceDirection { Inflated, Unchanged, Deflated };

struct LimitPrediction {
    StatisticKind statistic = StatisticKind::ScaledCovariance;
    LawKind law = LawKind::Unknown;
    double variance = 0.0;                         // Normal only
    VarianceDirection direction = VarianceDirection::Unchanged;  // Unknown only
    // Spike covariance limit applies to n T_n / top eigenvalue.
    std::optional<double> scale_top_eig;
    std::string source;
};

struct PredictionPair {
    LimitPrediction covariance;
    LimitPrediction correlation;
};

// Positive root of m = tanh(beta*m); 0 for beta <= 1. Bisection to 1e-12.
double solve_magnetization(double beta);

// Critical inverse temperature of the scaled lattice model; dim 1 -> +inf.
double lattice_critical_beta(int dim);

PredictionPair predict_curie_weiss(double beta1, double beta2);
PredictionPair predict_lattice(double beta1, double beta2, int dim);
PredictionPair predict_gaussian(const SpectralSummary& spectral, int n);

// Eigenvalue profile on [0,1]. The exponential family exp(s * x * n^(1-q))
// reproduces per-index values exp(s * i / n^q); for q != 1 the profile is
// pinned at the experiment's n.
struct OlsProfile {
    enum class Kind { Constant, Power, Exponential, Inline };
    Kind kind = Kind::Constant;
    double c = 1.0;      // Constant
    double p = 1.0;      // Power exponent
    double sign = 1.0;   // Exponential sign
    double q = 1.0;      // Exponential rate exponent
    std::vector<double> inline_values;

    double value(double x, int n) const;
    std::string describe() const;

    static OlsProfile constant(double c);
    static OlsProfile power(double p);
    static OlsProfile exponential(double sign, double q);
    static OlsProfile from_values(std::vector<double> v);
};

enum class OlsVerdict { Valid, Exact, Anticonservative };

struct OlsConditionReport {
    double int_fg = 0.0;  // fine-grid Simpson values
    double int_f = 0.0;
    double int_g = 0.0;
    double riemann_fg = 0.0;  // (1/n) sums at the experiment's n
    double riemann_f = 0.0;
    double riemann_g = 0.0;
    OlsVerdict verdict = OlsVerdict::Exact;
    double variance_ratio() const { return int_fg / (int_f * int_g); }
};

OlsConditionReport ols_condition(const OlsProfile& f, const OlsProfile& g, int n);

const char* to_string(OlsVerdict v);
const char* to_string(LawKind k);

}  // namespace assoclab
