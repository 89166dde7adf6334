#include "assoclab/theory.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace assoclab {

double solve_magnetization(double beta) {
    if (beta < 0.0) throw Error(ErrorKind::Parameter, "beta must be >= 0");
    if (beta <= 1.0) return 0.0;
    // f(m) = tanh(beta m) - m has a unique positive root for beta > 1;
    // f(1e-12) > 0, f(1) < 0.
    double lo = 1e-12, hi = 1.0;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (std::tanh(beta * mid) - mid > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double lattice_critical_beta(int dim) {
    if (dim == 1) return std::numeric_limits<double>::infinity();
    if (dim == 2) return 2.0 * std::log(1.0 + std::sqrt(2.0));
    throw Error(ErrorKind::Unsupported, "critical beta known here only for dim 1 and 2");
}

PredictionPair predict_curie_weiss(double beta1, double beta2) {
    if (beta1 < 0.0 || beta2 < 0.0)
        throw Error(ErrorKind::Parameter, "betas must be >= 0");
    const double m1 = solve_magnetization(beta1);
    const double m2 = solve_magnetization(beta2);
    PredictionPair p;
    p.covariance.statistic = StatisticKind::ScaledCovariance;
    p.covariance.law = LawKind::Normal;
    p.covariance.variance = (1.0 - m1 * m1) * (1.0 - m2 * m2);
    p.covariance.source = "mean-field limit";
    p.correlation.statistic = StatisticKind::ScaledCorrelation;
    p.correlation.law = LawKind::Normal;
    p.correlation.variance = 1.0;
    p.correlation.source = "mean-field limit";
    return p;
}

PredictionPair predict_lattice(double beta1, double beta2, int dim) {
    if (beta1 < 0.0 || beta2 < 0.0)
        throw Error(ErrorKind::Parameter, "betas must be >= 0");
    const double bc = lattice_critical_beta(dim);
    if (beta1 >= bc || beta2 >= bc)
        throw Error(ErrorKind::Regime, "beta at or above the critical value");
    PredictionPair p;
    p.covariance.statistic = StatisticKind::ScaledCovariance;
    p.correlation.statistic = StatisticKind::ScaledCorrelation;
    p.covariance.source = p.correlation.source = "lattice high-temperature limit";
    if (beta1 == 0.0 && beta2 == 0.0) {
        p.covariance.law = LawKind::Normal;
        p.covariance.variance = 1.0;
        p.correlation.law = LawKind::Normal;
        p.correlation.variance = 1.0;
    } else {
        // the limit is normal with variance strictly above 1, value open
        p.covariance.law = LawKind::Unknown;
        p.covariance.direction = VarianceDirection::Inflated;
        p.correlation.law = LawKind::Unknown;
        p.correlation.direction = VarianceDirection::Inflated;
    }
    return p;
}

PredictionPair predict_gaussian(const SpectralSummary& spectral, int n) {
    PredictionPair p;
    p.covariance.statistic = StatisticKind::ScaledCovariance;
    p.covariance.source = "centered-spectrum limit";
    p.correlation.source = "centered-spectrum limit";
    switch (spectral.regime) {
        case SpectralRegime::Bulk: {
            p.covariance.law = LawKind::Normal;
            p.covariance.variance = spectral.sum_sq() / static_cast<double>(n);
            p.correlation.statistic = StatisticKind::ScaledCorrelation;
            p.correlation.law = LawKind::Normal;
            const double a = spectral.deflation_factor;
            p.correlation.variance = 1.0 / (a * a);
            break;
        }
        case SpectralRegime::Spike: {
            p.covariance.law = LawKind::NormalTimesChi;
            p.covariance.scale_top_eig = spectral.top();
            p.correlation.statistic = StatisticKind::RawCorrelation;
            p.correlation.law = LawKind::Rademacher;
            break;
        }
        case SpectralRegime::Neither:
            throw Error(ErrorKind::Regime,
                        "spectrum between the bulk and spike regimes: no prediction");
    }
    return p;
}

double OlsProfile::value(double x, int n) const {
    switch (kind) {
        case Kind::Constant: return c;
        case Kind::Power: return std::pow(x, p);
        case Kind::Exponential: return std::exp(sign * x * std::pow(static_cast<double>(n), 1.0 - q));
        case Kind::Inline: {
            if (inline_values.empty()) return 0.0;
            auto idx = static_cast<size_t>(x * static_cast<double>(inline_values.size()));
            if (idx >= inline_values.size()) idx = inline_values.size() - 1;
            return inline_values[idx];
        }
    }
    return 0.0;
}

std::string OlsProfile::describe() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::Constant: os << "const:" << c; break;
        case Kind::Power: os << "power:" << p; break;
        case Kind::Exponential: os << "exp:" << (sign >= 0 ? "+" : "-") << ":q=" << q; break;
        case Kind::Inline: os << "inline[" << inline_values.size() << "]"; break;
    }
    return os.str();
}

OlsProfile OlsProfile::constant(double c) {
    if (c < 0.0) throw Error(ErrorKind::Parameter, "profile must be nonnegative");
    OlsProfile f;
    f.kind = Kind::Constant;
    f.c = c;
    return f;
}

OlsProfile OlsProfile::power(double p) {
    if (p < 0.0) throw Error(ErrorKind::Parameter, "power exponent must be >= 0");
    OlsProfile f;
    f.kind = Kind::Power;
    f.p = p;
    return f;
}

OlsProfile OlsProfile::exponential(double sign, double q) {
    OlsProfile f;
    f.kind = Kind::Exponential;
    f.sign = sign >= 0 ? 1.0 : -1.0;
    f.q = q;
    return f;
}

OlsProfile OlsProfile::from_values(std::vector<double> v) {
    for (double x : v)
        if (x < 0.0) throw Error(ErrorKind::Parameter, "profile must be nonnegative");
    OlsProfile f;
    f.kind = Kind::Inline;
    f.inline_values = std::move(v);
    return f;
}

namespace {

// composite Simpson on [0,1]; npts must be odd
double simpson01(const std::function<double(double)>& fn, int npts) {
    const int m = npts - 1;
    const double h = 1.0 / m;
    double s = fn(0.0) + fn(1.0);
    for (int i = 1; i < m; ++i) s += fn(i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return s * h / 3.0;
}

}  // namespace

OlsConditionReport ols_condition(const OlsProfile& f, const OlsProfile& g, int n) {
    if (n < 2) throw Error(ErrorKind::Parameter, "grid size must be >= 2");
    OlsConditionReport rep;
    for (int i = 1; i <= n; ++i) {
        const double x = static_cast<double>(i) / n;
        const double fv = f.value(x, n), gv = g.value(x, n);
        if (fv < 0.0 || gv < 0.0)
            throw Error(ErrorKind::Parameter, "profile negative on the grid");
        rep.riemann_f += fv;
        rep.riemann_g += gv;
        rep.riemann_fg += fv * gv;
    }
    rep.riemann_f /= n;
    rep.riemann_g /= n;
    rep.riemann_fg /= n;

    const int fine = 100001;
    rep.int_f = simpson01([&](double x) { return f.value(x, n); }, fine);
    rep.int_g = simpson01([&](double x) { return g.value(x, n); }, fine);
    rep.int_fg = simpson01([&](double x) { return f.value(x, n) * g.value(x, n); }, fine);

    const double prod = rep.int_f * rep.int_g;
    const double diff = rep.int_fg - prod;
    if (std::abs(diff) < 1e-9 * std::max(prod, 1e-300))
        rep.verdict = OlsVerdict::Exact;
    else if (diff > 0.0)
        rep.verdict = OlsVerdict::Anticonservative;
    else
        rep.verdict = OlsVerdict::Valid;
    return rep;
}

const char* to_string(OlsVerdict v) {
    switch (v) {
        case OlsVerdict::Valid: return "valid";
        case OlsVerdict::Exact: return "exact";
        case OlsVerdict::Anticonservative: return "anticonservative";
    }
    return "?";
}

const char* to_string(LawKind k) {
    switch (k) {
        case LawKind::Normal: return "normal";
        case LawKind::NormalTimesChi: return "normal_times_chi";
        case LawKind::Rademacher: return "rademacher";
        case LawKind::Unknown: return "unknown";
    }
    return "?";
}

}  // namespace assoclab
