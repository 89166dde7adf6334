#include "assoclab/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include <Eigen/Dense>

namespace assoclab {

namespace {
constexpr int kDenseCap = 4000;
constexpr double kClampFloor = -1e-8;
}  // namespace

CovarianceModel CovarianceModel::equicorrelation(int n, double rho) {
    if (n < 2) throw Error(ErrorKind::Parameter, "equicorrelation needs n >= 2");
    if (!(rho > 0.0 && rho < 1.0))
        throw Error(ErrorKind::Parameter, "equicorrelation needs rho in (0,1)");
    CovarianceModel m;
    m.kind = Kind::Equicorrelation;
    m.n = n;
    m.rho = rho;
    return m;
}

CovarianceModel CovarianceModel::identity_scaled(int n, double variance) {
    if (n < 1) throw Error(ErrorKind::Parameter, "identity needs n >= 1");
    if (variance < 0.0) throw Error(ErrorKind::Parameter, "variance must be >= 0");
    CovarianceModel m;
    m.kind = Kind::IdentityScaled;
    m.n = n;
    m.variance = variance;
    return m;
}

CovarianceModel CovarianceModel::from_eigen_spec(EigenSpec spec) {
    if (spec.n < 1 || spec.values.size() != static_cast<size_t>(spec.n))
        throw Error(ErrorKind::Dimension, "eigen spec needs n values");
    for (double v : spec.values)
        if (v < 0.0) throw Error(ErrorKind::Parameter, "negative eigenvalue in spec");
    CovarianceModel m;
    m.kind = Kind::FromEigenSpec;
    m.n = spec.n;
    m.spec = std::move(spec);
    return m;
}

double SpectralSummary::sum() const {
    double s = 0.0;
    for (double v : centered_eigs) s += v;
    return s;
}

double SpectralSummary::sum_sq() const {
    double s = 0.0;
    for (double v : centered_eigs) s += v * v;
    return s;
}

struct CovarianceHandle::Impl {
    // sampling strategy
    enum class Sampler { Identity, Equi, Householder, DenseFactor };
    Sampler sampler = Sampler::Identity;
    std::vector<double> sqrt_vals;   // sqrt of Sigma eigenvalues, spec order
    Eigen::MatrixXd factor;          // V diag(sqrt vals) for DenseFactor
    double equi_rho = 0.0;
    double id_sd = 1.0;

    mutable std::mutex mu;
    mutable std::vector<double> dense_cache;
    mutable bool have_spectrum = false;
    mutable SpectralSummary spectrum;
};

namespace {

// Reflection H with H e1 = 1/sqrt(n) * 1; applied as H v = v - 2 u (u'v)/(u'u).
struct HouseholderBasis {
    explicit HouseholderBasis(int n) : u(n) {
        const double q = 1.0 / std::sqrt(static_cast<double>(n));
        u[0] = 1.0 - q;
        for (int i = 1; i < n; ++i) u[i] = -q;
        uu = 0.0;
        for (double v : u) uu += v * v;
    }
    void apply(std::span<double> v) const {
        double dot = 0.0;
        for (size_t i = 0; i < v.size(); ++i) dot += u[i] * v[i];
        const double c = 2.0 * dot / uu;
        for (size_t i = 0; i < v.size(); ++i) v[i] -= c * u[i];
    }
    std::vector<double> u;
    double uu;
};

Eigen::MatrixXd random_orthogonal(int n, uint64_t seed) {
    Rng rng(derive_seed(seed, 0, 0x6261736973ULL));
    Eigen::MatrixXd g(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) g(i, j) = rng.normal();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j)
        if (r(j, j) < 0) q.col(j) *= -1.0;
    return q;
}

}  // namespace

CovarianceHandle::CovarianceHandle(const CovarianceModel& model)
    : model_(model), n_(model.n), impl_(std::make_shared<Impl>()) {
    switch (model.kind) {
        case CovarianceModel::Kind::IdentityScaled:
            impl_->sampler = Impl::Sampler::Identity;
            impl_->id_sd = std::sqrt(model.variance);
            break;
        case CovarianceModel::Kind::Equicorrelation:
            impl_->sampler = Impl::Sampler::Equi;
            impl_->equi_rho = model.rho;
            break;
        case CovarianceModel::Kind::FromEigenSpec: {
            impl_->sqrt_vals.resize(n_);
            for (int i = 0; i < n_; ++i) impl_->sqrt_vals[i] = std::sqrt(model.spec.values[i]);
            switch (model.spec.basis) {
                case BasisKind::Identity:
                    impl_->sampler = Impl::Sampler::Identity;  // diagonal Sigma
                    break;
                case BasisKind::CenteringAligned:
                    impl_->sampler = Impl::Sampler::Householder;
                    break;
                case BasisKind::RandomOrthogonal: {
                    if (n_ > kDenseCap)
                        throw Error(ErrorKind::Size, "random basis capped at n=4000");
                    impl_->sampler = Impl::Sampler::DenseFactor;
                    Eigen::MatrixXd v = random_orthogonal(n_, model.spec.basis_seed);
                    impl_->factor = v;
                    for (int j = 0; j < n_; ++j) impl_->factor.col(j) *= impl_->sqrt_vals[j];
                    break;
                }
            }
            break;
        }
    }
}

void CovarianceHandle::sample(Rng& rng, std::span<double> out) const {
    if (out.size() != static_cast<size_t>(n_))
        throw Error(ErrorKind::Dimension, "output size mismatch");
    switch (impl_->sampler) {
        case Impl::Sampler::Identity: {
            if (model_.kind == CovarianceModel::Kind::IdentityScaled) {
                for (auto& v : out) v = impl_->id_sd * rng.normal();
            } else {
                for (int i = 0; i < n_; ++i) out[i] = impl_->sqrt_vals[i] * rng.normal();
            }
            break;
        }
        case Impl::Sampler::Equi: {
            const double rho = impl_->equi_rho;
            const double lo = std::sqrt(1.0 - rho);
            const double hi = std::sqrt(1.0 - rho + n_ * rho);
            double zbar = 0.0;
            for (int i = 0; i < n_; ++i) {
                out[i] = rng.normal();
                zbar += out[i];
            }
            zbar /= n_;
            const double shift = (hi - lo) * zbar;
            for (int i = 0; i < n_; ++i) out[i] = lo * out[i] + shift;
            break;
        }
        case Impl::Sampler::Householder: {
            static thread_local std::unique_ptr<HouseholderBasis> basis;
            static thread_local int basis_n = -1;
            if (basis_n != n_) {
                basis = std::make_unique<HouseholderBasis>(n_);
                basis_n = n_;
            }
            for (int i = 0; i < n_; ++i) out[i] = impl_->sqrt_vals[i] * rng.normal();
            basis->apply(out);
            break;
        }
        case Impl::Sampler::DenseFactor: {
            Eigen::VectorXd z(n_);
            for (int i = 0; i < n_; ++i) z[i] = rng.normal();
            Eigen::Map<Eigen::VectorXd>(out.data(), n_) = impl_->factor * z;
            break;
        }
    }
}

const std::vector<double>& CovarianceHandle::dense() const {
    std::lock_guard<std::mutex> lock(impl_->mu);
    if (!impl_->dense_cache.empty()) return impl_->dense_cache;
    if (n_ > kDenseCap) throw Error(ErrorKind::Size, "dense covariance capped at n=4000");
    auto& s = impl_->dense_cache;
    s.assign(static_cast<size_t>(n_) * n_, 0.0);
    auto at = [&](int i, int j) -> double& { return s[static_cast<size_t>(i) * n_ + j]; };
    switch (model_.kind) {
        case CovarianceModel::Kind::IdentityScaled:
            for (int i = 0; i < n_; ++i) at(i, i) = model_.variance;
            break;
        case CovarianceModel::Kind::Equicorrelation:
            for (int i = 0; i < n_; ++i)
                for (int j = 0; j < n_; ++j) at(i, j) = (i == j) ? 1.0 : model_.rho;
            break;
        case CovarianceModel::Kind::FromEigenSpec: {
            switch (model_.spec.basis) {
                case BasisKind::Identity:
                    for (int i = 0; i < n_; ++i) at(i, i) = model_.spec.values[i];
                    break;
                case BasisKind::CenteringAligned: {
                    HouseholderBasis h(n_);
                    // Sigma = H diag(vals) H', assembled column by column
                    std::vector<double> col(n_);
                    for (int j = 0; j < n_; ++j) {
                        std::fill(col.begin(), col.end(), 0.0);
                        col[j] = 1.0;
                        h.apply(col);  // column j of H... H is symmetric
                        for (int i = 0; i < n_; ++i) col[i] *= model_.spec.values[i];
                        h.apply(col);
                        for (int i = 0; i < n_; ++i) at(i, j) = col[i];
                    }
                    break;
                }
                case BasisKind::RandomOrthogonal: {
                    Eigen::MatrixXd v = random_orthogonal(n_, model_.spec.basis_seed);
                    Eigen::MatrixXd sig =
                        v * Eigen::Map<const Eigen::VectorXd>(model_.spec.values.data(), n_)
                                .asDiagonal() *
                        v.transpose();
                    for (int i = 0; i < n_; ++i)
                        for (int j = 0; j < n_; ++j) at(i, j) = sig(i, j);
                    break;
                }
            }
            break;
        }
    }
    return impl_->dense_cache;
}

const SpectralSummary& CovarianceHandle::centered_spectrum() const {
    {
        std::lock_guard<std::mutex> lock(impl_->mu);
        if (impl_->have_spectrum) return impl_->spectrum;
    }
    const auto& sig = dense();  // takes the lock internally
    Eigen::Map<const Eigen::MatrixXd> s(sig.data(), n_, n_);
    // J Sigma J = Sigma - (1/n)(1 r' + r 1') + (sum(r)/n^2) 1 1', r = Sigma 1
    Eigen::VectorXd r = s.rowwise().sum();
    const double tot = r.sum();
    Eigen::MatrixXd centered = s;
    const double inv_n = 1.0 / n_;
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            centered(i, j) += -inv_n * (r(i) + r(j)) + tot * inv_n * inv_n;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(centered, Eigen::EigenvaluesOnly);

    SpectralSummary out;
    out.centered_eigs.resize(n_);
    bool warn = false;
    for (int i = 0; i < n_; ++i) {
        double v = es.eigenvalues()[n_ - 1 - i];  // descending
        if (v < 0.0) {
            if (v < kClampFloor) warn = true;
            v = 0.0;
        }
        out.centered_eigs[i] = v;
    }
    out.clamp_warning = warn;
    const double sl = out.sum(), sl2 = out.sum_sq();
    out.deflation_factor = sl2 > 0.0 ? sl / std::sqrt(static_cast<double>(n_) * sl2) : 0.0;
    if (sl2 > 0.0) {
        const double top = out.top(), second = out.second();
        const bool bulk = top * top <= 0.01 * sl2;
        const bool spike = top >= 100.0 * static_cast<double>(n_) * second && top > 0.0;
        if (bulk)
            out.regime = SpectralRegime::Bulk;
        else if (spike)
            out.regime = SpectralRegime::Spike;
        else
            out.regime = SpectralRegime::Neither;
    }

    std::lock_guard<std::mutex> lock(impl_->mu);
    if (!impl_->have_spectrum) {
        impl_->spectrum = std::move(out);
        impl_->have_spectrum = true;
    }
    return impl_->spectrum;
}

CovarianceHandle build_covariance(const CovarianceModel& model) {
    return CovarianceHandle(model);
}

QfConcentrationReport quadratic_form_concentration_check(
    std::span<const double> eigs, int reps, Rng& rng) {
    double sl = 0.0, sl2 = 0.0;
    for (double l : eigs) {
        if (l < 0.0) throw Error(ErrorKind::Parameter, "negative eigenvalue");
        sl += l;
        sl2 += l * l;
    }
    if (sl <= 0.0) throw Error(ErrorKind::Parameter, "all eigenvalues zero");
    QfConcentrationReport rep;
    rep.band_halfwidth = 5.0 * std::sqrt(2.0 * sl2) / sl;
    double acc = 0.0, acc2 = 0.0;
    int within = 0;
    for (int r = 0; r < reps; ++r) {
        double q = 0.0;
        for (double l : eigs) {
            const double z = rng.normal();
            q += l * z * z;
        }
        const double ratio = q / sl;
        acc += ratio;
        acc2 += ratio * ratio;
        if (std::abs(ratio - 1.0) < rep.band_halfwidth) ++within;
    }
    rep.mean_ratio = acc / reps;
    rep.ratio_sd = std::sqrt(std::max(0.0, acc2 / reps - rep.mean_ratio * rep.mean_ratio));
    rep.frac_within = static_cast<double>(within) / reps;
    rep.concentrates = rep.frac_within >= 0.99 && rep.band_halfwidth < 0.5;
    return rep;
}

}  // namespace assoclab
