#pragma once

// Interpolation with a function parameter on finite Hilbert-pair models.
// A model stores the spectrum of the positive operator J that generates the
// pair; interpolation norms weight spectral coefficients by psi(lambda).

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hlab/karamata.hpp"

namespace hlab {

struct HilbertPairModel {
    std::vector<double> lambda;  // spectrum of J, each >= 1

    void validate() const {
        if (lambda.empty())
            throw std::invalid_argument("HilbertPairModel: empty spectrum");
        for (double v : lambda)
            if (!(v >= 1.0) || !std::isfinite(v))
                throw std::invalid_argument("HilbertPairModel: spectrum must lie in [1, inf)");
    }
};

class InterpolationParameter {
  public:
    enum class Origin { Power, FromTriple, Composed };

    static InterpolationParameter power(double theta) {
        if (!std::isfinite(theta))
            throw std::invalid_argument("InterpolationParameter::power: non-finite exponent");
        InterpolationParameter p;
        p.origin_ = Origin::Power;
        p.theta_ = theta;
        p.fn_ = [theta](double r) { return std::pow(r, theta); };
        return p;
    }

    // psi(r) = r^{(s-s0)/(s1-s0)} phi(r^{1/(s1-s0)}) for r >= 1 and the pure
    // power continuation with phi(1) below 1.
    static InterpolationParameter from_triple(double s0, double s, double s1,
                                              KaramataFunction phi) {
        if (!(s0 < s && s < s1))
            throw std::invalid_argument("InterpolationParameter::from_triple: need s0 < s < s1");
        InterpolationParameter p;
        p.origin_ = Origin::FromTriple;
        double theta = (s - s0) / (s1 - s0);
        double inv_span = 1.0 / (s1 - s0);
        p.theta_ = theta;
        double phi1 = phi(1.0);
        p.fn_ = [theta, inv_span, phi1, phi = std::move(phi)](double r) {
            if (!(r > 0.0))
                throw std::domain_error("InterpolationParameter: argument must be positive");
            if (r >= 1.0) return std::pow(r, theta) * phi(std::pow(r, inv_span));
            return std::pow(r, theta) * phi1;
        };
        return p;
    }

    static InterpolationParameter composed(std::function<double(double)> fn, double theta) {
        if (!fn) throw std::invalid_argument("InterpolationParameter::composed: null callable");
        InterpolationParameter p;
        p.origin_ = Origin::Composed;
        p.theta_ = theta;
        p.fn_ = std::move(fn);
        return p;
    }

    double operator()(double r) const { return fn_(r); }
    double theta() const { return theta_; }
    Origin origin() const { return origin_; }

  private:
    InterpolationParameter() = default;
    Origin origin_ = Origin::Power;
    double theta_ = 0.0;
    std::function<double(double)> fn_;
};

// Norm of v in the interpolation space X_psi of the model: |psi(J) v|_{X0}.
inline double x_psi_norm(const HilbertPairModel& model,
                         const std::vector<double>& v,
                         const InterpolationParameter& psi) {
    model.validate();
    if (v.size() != model.lambda.size())
        throw std::invalid_argument("x_psi_norm: vector/spectrum size mismatch");
    double q = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        double w = psi(model.lambda[i]);
        q += w * w * v[i] * v[i];
    }
    return std::sqrt(q);
}

// Reiteration: intermediate spaces generated by chi and eta, then psi between
// them, collapse to the single parameter omega(r) = chi(r) psi(eta(r)/chi(r)).
inline InterpolationParameter reiterate(const InterpolationParameter& psi,
                                        const InterpolationParameter& chi,
                                        const InterpolationParameter& eta) {
    for (int j = 0; j <= 12; ++j) {
        double r = std::pow(10.0, j);
        double c = chi(r), e = eta(r);
        if (!(c > 0.0) || !(e > 0.0) || !std::isfinite(c) || !std::isfinite(e))
            throw std::invalid_argument("reiterate: chi and eta must be positive and finite on [1, 1e12]");
        if (!(e / c > 0.0) || !std::isfinite(e / c))
            throw std::invalid_argument("reiterate: eta/chi out of range");
    }
    double theta = chi.theta() + psi.theta() * (eta.theta() - chi.theta());
    auto fn = [psi, chi, eta](double r) { return chi(r) * psi(eta(r) / chi(r)); };
    return InterpolationParameter::composed(fn, theta);
}

// Norm of a direct sum against the norm of the concatenated model; the two
// agree identically and the pair is exposed for consistency checking.
struct DirectSumCheck {
    double summed = 0.0;
    double concatenated = 0.0;
    double gap = 0.0;
};

inline DirectSumCheck direct_sum_norm(const std::vector<HilbertPairModel>& models,
                                      const std::vector<std::vector<double>>& vs,
                                      const InterpolationParameter& psi) {
    if (models.size() != vs.size())
        throw std::invalid_argument("direct_sum_norm: component count mismatch");
    if (models.empty())
        throw std::invalid_argument("direct_sum_norm: empty direct sum");
    double q = 0.0;
    HilbertPairModel cat;
    std::vector<double> vcat;
    for (std::size_t k = 0; k < models.size(); ++k) {
        double nk = x_psi_norm(models[k], vs[k], psi);
        q += nk * nk;
        cat.lambda.insert(cat.lambda.end(), models[k].lambda.begin(), models[k].lambda.end());
        vcat.insert(vcat.end(), vs[k].begin(), vs[k].end());
    }
    DirectSumCheck out;
    out.summed = std::sqrt(q);
    out.concatenated = x_psi_norm(cat, vcat, psi);
    out.gap = std::fabs(out.summed - out.concatenated) / std::max(1.0, out.summed);
    return out;
}

struct MultiplierIdentityReport {
    double max_rel_error = 0.0;
    double worst_r = 1.0;
    std::size_t checked = 0;
};

// On weights r = r_gamma(xi) the triple parameter satisfies
// psi(r^{s1-s0}) r^{s0} = r^s phi(r); reports the worst pointwise deviation.
inline MultiplierIdentityReport multiplier_identity_check(
    const KaramataFunction& phi, double s0, double s, double s1,
    const std::vector<double>& r_values) {
    if (r_values.empty())
        throw std::invalid_argument("multiplier_identity_check: empty probe set");
    auto psi = InterpolationParameter::from_triple(s0, s, s1, phi);
    MultiplierIdentityReport rep;
    for (double r : r_values) {
        if (!(r >= 1.0))
            throw std::invalid_argument("multiplier_identity_check: probe below 1");
        double lhs = psi(std::pow(r, s1 - s0)) * std::pow(r, s0);
        double rhs = std::pow(r, s) * phi(r);
        double err = std::fabs(lhs - rhs) / std::fabs(rhs);
        if (err > rep.max_rel_error) {
            rep.max_rel_error = err;
            rep.worst_r = r;
        }
        rep.checked++;
    }
    return rep;
}

struct OperatorInterpolationReport {
    double norm0 = 0.0;   // X0 -> Y0
    double norm1 = 0.0;   // X1 -> Y1
    double norm_psi = 0.0;
    double constant = 0.0;  // norm_psi / max(norm0, norm1)
};

namespace detail {

inline Eigen::MatrixXd to_matrix(const std::vector<double>& rowmajor,
                                 std::size_t rows, std::size_t cols) {
    if (rowmajor.size() != rows * cols)
        throw std::invalid_argument("matrix data size mismatch");
    Eigen::MatrixXd M(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            M(i, j) = rowmajor[i * cols + j];
    return M;
}

inline double sigma_max(const Eigen::MatrixXd& M) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    return svd.singularValues()(0);
}

}  // namespace detail

// Operator norms of T between the endpoint spaces and the interpolated pair.
// T maps the X model to the Y model; entries are given row-major.
inline OperatorInterpolationReport operator_interpolation_check(
    const HilbertPairModel& mx, const HilbertPairModel& my,
    const std::vector<double>& T_rowmajor, const InterpolationParameter& psi) {
    mx.validate();
    my.validate();
    const std::size_t nx = mx.lambda.size(), ny = my.lambda.size();
    Eigen::MatrixXd T = detail::to_matrix(T_rowmajor, ny, nx);

    auto weighted = [&](auto&& wy, auto&& wx) {
        Eigen::MatrixXd M = T;
        for (std::size_t i = 0; i < ny; ++i) M.row(i) *= wy(my.lambda[i]);
        for (std::size_t j = 0; j < nx; ++j) M.col(j) /= wx(mx.lambda[j]);
        return detail::sigma_max(M);
    };

    OperatorInterpolationReport rep;
    rep.norm0 = detail::sigma_max(T);
    rep.norm1 = weighted([](double l) { return l; }, [](double l) { return l; });
    rep.norm_psi = weighted([&](double l) { return psi(l); }, [&](double l) { return psi(l); });
    double base = std::max(rep.norm0, rep.norm1);
    rep.constant = base > 0.0 ? rep.norm_psi / base : 0.0;
    return rep;
}

struct SubspaceInterpolationReport {
    std::size_t rank = 0;
    double sigma_min = 0.0;  // extremes of ambient/intrinsic norm ratio
    double sigma_max = 0.0;
    double const_lower = 1.0;
    double const_upper = 1.0;
};

// Compares the interpolation norm a projected subspace inherits from the
// ambient model with the intrinsic norm generated by the compressed operator.
// P must be idempotent; its range is taken with the X0 inner product.
inline SubspaceInterpolationReport subspace_interpolation_demo(
    const HilbertPairModel& model, const std::vector<double>& P_rowmajor,
    const InterpolationParameter& psi) {
    model.validate();
    const std::size_t n = model.lambda.size();
    Eigen::MatrixXd P = detail::to_matrix(P_rowmajor, n, n);
    double pnorm = P.norm();
    if ((P * P - P).norm() > 1e-10 * (1.0 + pnorm))
        throw std::invalid_argument("subspace_interpolation_demo: P is not idempotent");

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(P);
    qr.setThreshold(1e-10);
    const std::size_t rank = std::size_t(qr.rank());
    SubspaceInterpolationReport rep;
    rep.rank = rank;
    if (rank == 0) return rep;

    Eigen::MatrixXd Q = qr.householderQ();
    Eigen::MatrixXd B = Q.leftCols(rank);  // X0-orthonormal basis of range(P)

    Eigen::VectorXd lam(n);
    for (std::size_t i = 0; i < n; ++i) lam(i) = model.lambda[i];
    Eigen::MatrixXd G = B.transpose() * lam.array().square().matrix().asDiagonal() * B;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
    Eigen::VectorXd tau = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();  // spectrum of J_Y

    // Ratio map: coefficients in the J_Y eigenbasis -> ambient weighted vector.
    Eigen::VectorXd psi_tau(rank), psi_lam(n);
    for (std::size_t i = 0; i < rank; ++i) psi_tau(i) = psi(tau(i));
    for (std::size_t i = 0; i < n; ++i) psi_lam(i) = psi(lam(i));
    Eigen::MatrixXd M = psi_lam.asDiagonal() * (B * es.eigenvectors());
    for (std::size_t j = 0; j < rank; ++j) {
        if (!(psi_tau(j) > 0.0))
            throw std::invalid_argument("subspace_interpolation_demo: psi vanishes on the compressed spectrum");
        M.col(j) /= psi_tau(j);
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    rep.sigma_max = svd.singularValues()(0);
    rep.sigma_min = svd.singularValues()(svd.singularValues().size() - 1);
    rep.const_lower = std::max(1.0, 1.0 / rep.sigma_min);
    rep.const_upper = std::max(1.0, rep.sigma_max);
    return rep;
}

}  // namespace hlab
