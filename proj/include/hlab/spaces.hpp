#pragma once

// Weighted Sobolev norms on periodic model domains, box extensions, the
// half-line (vanishing past) norm, and the continuity threshold machinery.
// Fields on a torus live on FFT-natural grids x_j = -L/2 + j L/N; fields on a
// box use inclusive uniform nodes along every axis.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hlab/fft.hpp"
#include "hlab/symbols.hpp"
#include "hlab/util.hpp"

namespace hlab {

struct TorusField {
    std::vector<std::size_t> shape;
    std::vector<double> length;
    std::vector<std::complex<double>> data;  // row-major

    std::size_t size() const {
        std::size_t n = 1;
        for (auto s : shape) n *= s;
        return n;
    }
    void validate() const {
        if (shape.empty() || shape.size() != length.size())
            throw std::invalid_argument("TorusField: shape/length mismatch");
        std::size_t n = 1;
        for (auto s : shape) n *= s;
        if (data.size() != n)
            throw std::invalid_argument("TorusField: data size mismatch");
    }
    double coord(std::size_t axis, std::size_t idx) const {
        return -0.5 * length[axis] + length[axis] * double(idx) / double(shape[axis]);
    }
};

struct BoxField {
    std::vector<std::size_t> shape;  // inclusive node counts, N+1 per axis
    std::vector<double> lower, upper;
    std::vector<std::complex<double>> data;

    std::size_t size() const {
        std::size_t n = 1;
        for (auto s : shape) n *= s;
        return n;
    }
    void validate() const {
        if (shape.empty() || shape.size() != lower.size() || lower.size() != upper.size())
            throw std::invalid_argument("BoxField: shape/bounds mismatch");
        std::size_t n = 1;
        for (std::size_t a = 0; a < shape.size(); ++a) {
            if (shape[a] < 2)
                throw std::invalid_argument("BoxField: axis needs at least 2 nodes");
            if (!(upper[a] > lower[a]))
                throw std::invalid_argument("BoxField: empty axis extent");
            n *= shape[a];
        }
        if (data.size() != n)
            throw std::invalid_argument("BoxField: data size mismatch");
    }
    double coord(std::size_t axis, std::size_t idx) const {
        return lower[axis] + (upper[axis] - lower[axis]) * double(idx) / double(shape[axis] - 1);
    }
};

enum class ExtensionStrategy { EvenReflect, ZeroPadTaper };

// Smooth unit step: 1 at q <= 0, 0 at q >= 1, exp(-1/x) glue between.
inline double smooth_step(double q) {
    if (q <= 0.0) return 1.0;
    if (q >= 1.0) return 0.0;
    auto f = [](double x) { return std::exp(-1.0 / x); };
    return f(1.0 - q) / (f(1.0 - q) + f(q));
}

namespace detail {

template <class W>
double weighted_spectral_norm(const Spectrum& spec, W&& weight,
                              const WarningSink& sink) {
    const std::size_t d = spec.shape.size();
    const std::size_t total = spec.size();
    double dxi = spec.dxi();
    double sum = 0.0, shell = 0.0;
    std::vector<std::size_t> idx(d, 0);
    std::vector<double> xi(d);
    for (std::size_t flat = 0; flat < total; ++flat) {
        bool outer = false;
        for (std::size_t a = 0; a < d; ++a) {
            xi[a] = spec.xi(a, idx[a]);
            double frac = std::fabs(double(spec.mode(a, idx[a]))) / (0.5 * double(spec.shape[a]));
            if (frac >= 0.875) outer = true;
        }
        double w = weight(std::span<const double>(xi.data(), d));
        double term = w * w * std::norm(spec.data[flat]) * dxi;
        sum += term;
        if (outer) shell += term;
        for (std::size_t a = d; a-- > 0;) {
            if (++idx[a] < spec.shape[a]) break;
            idx[a] = 0;
        }
    }
    if (sum > 0.0 && shell > 0.01 * sum)
        emit_warning(sink, "spectral tail holds " + fmt_g(100.0 * shell / sum) +
                               "% of the weighted energy; the grid may be too coarse");
    return std::sqrt(sum);
}

}  // namespace detail

// Norm with an arbitrary frequency weight; the workhorse behind norm_full.
template <class W>
double norm_weighted(const TorusField& f, W&& weight, const WarningSink& sink = {}) {
    f.validate();
    auto spec = fft_forward(f.shape, f.length, f.data);
    return detail::weighted_spectral_norm(spec, weight, sink);
}

// Anisotropic weighted norm over the whole model torus. The last axis carries
// the anisotropy of the index.
inline double norm_full(const TorusField& f, const RegularityIndex& idx,
                        const WarningSink& sink = {}) {
    idx.validate();
    return norm_weighted(f, [&idx](std::span<const double> xi) {
        double r = r_gamma(xi, idx.gamma);
        return std::pow(r, idx.s) * idx.phi(r);
    }, sink);
}

// Even reflection across the upper face of every axis: a box with N+1
// inclusive nodes becomes a torus with 2N samples of period 2 (b - a).
inline TorusField even_reflect(const BoxField& f) {
    f.validate();
    const std::size_t d = f.shape.size();
    TorusField out;
    out.shape.resize(d);
    out.length.resize(d);
    for (std::size_t a = 0; a < d; ++a) {
        out.shape[a] = 2 * (f.shape[a] - 1);
        out.length[a] = 2.0 * (f.upper[a] - f.lower[a]);
    }
    out.data.resize(out.size());
    std::vector<std::size_t> idx(d, 0);
    for (std::size_t flat = 0; flat < out.data.size(); ++flat) {
        std::size_t src = 0;
        for (std::size_t a = 0; a < d; ++a) {
            std::size_t n = f.shape[a] - 1;
            std::size_t j = idx[a] <= n ? idx[a] : 2 * n - idx[a];
            src = src * f.shape[a] + j;
        }
        out.data[flat] = f.data[src];
        for (std::size_t a = d; a-- > 0;) {
            if (++idx[a] < out.shape[a]) break;
            idx[a] = 0;
        }
    }
    return out;
}

// Embeds the box in a larger torus, continuing each axis outward by a
// stretched-reflection formula and bringing the continuation to zero with a
// smooth ramp inside the margin. The value at distance delta outside a face
// is sum_j a_j f(face + j delta) with sum_j a_j j^k = (-1)^k, which matches
// derivatives up to edge_order across the face; a plain boundary-value
// continuation would leave a normal-derivative jump whose spectral tail
// stalls norm convergence already for s > 5/2. Unlike one-sided Taylor
// extrapolation this uses interior samples only, so oscillatory fields are
// continued with a mode-independent bound. Axes are continued one at a time,
// which fills the corners with the tensorized continuation.
inline TorusField zero_pad_taper(const BoxField& f, double margin_fraction = 0.375,
                                 int edge_order = 4) {
    f.validate();
    if (!(margin_fraction > 0.0 && margin_fraction <= 1.0))
        throw std::invalid_argument("zero_pad_taper: margin_fraction in (0, 1]");
    if (edge_order < 0) throw std::invalid_argument("zero_pad_taper: edge_order >= 0");
    const std::size_t d = f.shape.size();

    std::vector<std::size_t> shape = f.shape;
    std::vector<std::complex<double>> data = f.data;
    TorusField out;
    out.shape.resize(d);
    out.length.resize(d);

    for (std::size_t a = 0; a < d; ++a) {
        const std::size_t len = shape[a];
        const std::size_t n = len - 1;
        const std::size_t margin =
            std::max<std::size_t>(2, std::size_t(std::lround(margin_fraction * double(n))));
        const std::size_t M = n + 2 * margin + 2;
        const std::size_t offset = margin + 1;
        const double dx = (f.upper[a] - f.lower[a]) / double(n);
        out.shape[a] = M;
        out.length[a] = dx * double(M);

        // stencil nodes {1, .., P}; short axes fall back to lower matching
        const std::size_t P = std::min<std::size_t>(std::size_t(edge_order) + 1,
                                                    std::max<std::size_t>(n, 1));
        std::vector<double> coef(P);  // Lagrange basis on the nodes at -1
        for (std::size_t j = 1; j <= P; ++j) {
            double c = 1.0;
            for (std::size_t m = 1; m <= P; ++m)
                if (m != j) c *= (-1.0 - double(m)) / (double(j) - double(m));
            coef[j - 1] = c;
        }
        // the stencil must stay inside the box, which caps the ramp length
        const std::size_t reach = std::min(margin, n / P);

        std::size_t inner = 1;
        for (std::size_t q = a + 1; q < d; ++q) inner *= shape[q];
        std::size_t outer = 1;
        for (std::size_t q = 0; q < a; ++q) outer *= shape[q];

        std::vector<std::complex<double>> ndata(outer * M * inner, 0.0);
        std::vector<std::complex<double>> line(len);
        for (std::size_t o = 0; o < outer; ++o) {
            for (std::size_t q = 0; q < inner; ++q) {
                const std::size_t base = o * len * inner + q;
                for (std::size_t j = 0; j < len; ++j) line[j] = data[base + j * inner];
                const std::size_t nbase = o * M * inner + q;
                for (std::size_t j = 0; j < len; ++j)
                    ndata[nbase + (j + offset) * inner] = line[j];
                for (std::size_t slot = 1; slot <= reach; ++slot) {
                    const double ramp = smooth_step(double(slot) / double(reach + 1));
                    std::complex<double> vlo = 0.0, vhi = 0.0;
                    for (std::size_t j = 1; j <= P; ++j) {
                        vlo += coef[j - 1] * line[j * slot];
                        vhi += coef[j - 1] * line[n - j * slot];
                    }
                    ndata[nbase + (offset - slot) * inner] = ramp * vlo;
                    ndata[nbase + (offset + n + slot) * inner] = ramp * vhi;
                }
            }
        }
        shape[a] = M;
        data = std::move(ndata);
    }
    out.data = std::move(data);
    return out;
}

// Restriction-type norm on a box through an explicit extension. Reflection
// reproduces box L2 exactly at s = 0 (up to the trapezoid rule) and is the
// default; the taper keeps boundary values and gives an upper bound flavored
// estimate without the reflection symmetry.
inline double norm_box(const BoxField& f, const RegularityIndex& idx,
                       ExtensionStrategy strategy = ExtensionStrategy::EvenReflect,
                       const WarningSink& sink = {}) {
    idx.validate();
    if (strategy == ExtensionStrategy::EvenReflect) {
        TorusField ext = even_reflect(f);
        double scale = std::pow(2.0, -0.5 * double(f.shape.size()));
        return scale * norm_full(ext, idx, sink);
    }
    TorusField ext = zero_pad_taper(f);
    return norm_full(ext, idx, sink);
}

// Trapezoid-rule L2 norm of box samples, the s = 0 reference value.
inline double trapezoid_l2(const BoxField& f) {
    f.validate();
    const std::size_t d = f.shape.size();
    double cell = 1.0;
    for (std::size_t a = 0; a < d; ++a)
        cell *= (f.upper[a] - f.lower[a]) / double(f.shape[a] - 1);
    double sum = 0.0;
    std::vector<std::size_t> idx(d, 0);
    for (std::size_t flat = 0; flat < f.data.size(); ++flat) {
        double w = 1.0;
        for (std::size_t a = 0; a < d; ++a)
            if (idx[a] == 0 || idx[a] == f.shape[a] - 1) w *= 0.5;
        sum += w * std::norm(f.data[flat]);
        for (std::size_t a = d; a-- > 0;) {
            if (++idx[a] < f.shape[a]) break;
            idx[a] = 0;
        }
    }
    return std::sqrt(cell * sum);
}

// Places samples given on [0, T] (inclusive nodes) into a torus of period 2T
// whose negative-time half is zero. The node at t = T wraps onto t = -T and is
// dropped; t = 0 stays on-grid.
inline TorusField embed_halfline(const std::vector<std::complex<double>>& samples,
                                 double T) {
    if (samples.size() < 3)
        throw std::invalid_argument("embed_halfline: need at least 3 samples");
    if (!(T > 0.0)) throw std::invalid_argument("embed_halfline: T must be positive");
    std::size_t n = samples.size() - 1;  // box steps
    TorusField out;
    out.shape = {2 * n};
    out.length = {2.0 * T};
    out.data.assign(2 * n, 0.0);
    // torus index j holds t = -T + j dt, so t = k dt sits at j = n + k
    for (std::size_t k = 0; k < n; ++k) out.data[n + k] = samples[k];
    return out;
}

// Norm over the half-line model: the field must vanish on the negative-time
// half of the torus (last axis); the zero extension then is the field itself.
inline double norm_plus(const TorusField& f, const RegularityIndex& idx,
                        const WarningSink& sink = {}) {
    f.validate();
    idx.validate();
    const std::size_t d = f.shape.size();
    const std::size_t nt = f.shape[d - 1];
    double peak = 0.0;
    for (const auto& v : f.data) peak = std::max(peak, std::abs(v));
    std::size_t stride = 1;  // last axis is contiguous in row-major order
    for (std::size_t flat = 0; flat < f.data.size(); ++flat) {
        std::size_t jt = (flat / stride) % nt;
        if (jt < nt / 2 && std::abs(f.data[flat]) > 1e-12 * std::max(1.0, peak))
            throw std::invalid_argument(
                "norm_plus: field does not vanish for t < 0 (index " + std::to_string(flat) + ")");
    }
    return norm_full(f, idx, sink);
}

enum class ThresholdRelation { Above, Critical, Below };

struct ContinuityReport {
    ThresholdRelation relation = ThresholdRelation::Below;
    double threshold = 0.0;  // p + b + n/2
    bool continuous = false;
    IntegralConditionResult integral;  // populated in the critical case
};

// Decides continuity of derivatives up to anisotropic order p for indices
// (s, phi): strict inequality against p + b + n/2 settles it, the critical
// line defers to the integral condition on phi.
inline ContinuityReport continuity_threshold(const KaramataFunction& phi,
                                             double s, int p, int b, int n) {
    if (p < 0 || b < 1 || n < 1)
        throw std::invalid_argument("continuity_threshold: need p >= 0, b >= 1, n >= 1");
    ContinuityReport rep;
    rep.threshold = double(p) + double(b) + 0.5 * double(n);
    double gap = s - rep.threshold;
    if (gap > 1e-12) {
        rep.relation = ThresholdRelation::Above;
        rep.continuous = true;
    } else if (gap < -1e-12) {
        rep.relation = ThresholdRelation::Below;
        rep.continuous = false;
    } else {
        rep.relation = ThresholdRelation::Critical;
        rep.integral = integral_condition(phi);
        rep.continuous = rep.integral.status == IntegralStatus::Converges;
    }
    return rep;
}

namespace detail {

// int over the truncated region r <= R of xi^{2a} |eta|^{2beta} r^{-2s} phi^{-2}
// for n = 1 spatial coordinate and anisotropy 1/(2b); the eta integral runs
// through the substitution eta = w^b which removes the |eta|^{1/b} kink.
template <class Phi>
double truncated_pair_integral(Phi&& phi, double s, int a, int beta, int b, double R) {
    const double xi_max = std::sqrt(R * R - 1.0);
    auto outer = [&](double xi) {
        double wmax = R * R - 1.0 - xi * xi;
        if (wmax <= 0.0) return 0.0;
        auto inner = [&](double w) {
            double r2 = 1.0 + xi * xi + w;
            double r = std::sqrt(r2);
            double p = phi(r);
            return double(b) * std::pow(w, 2.0 * b * beta + b - 1.0) /
                   (std::pow(r2, s) * p * p);
        };
        double iv = integrate(inner, 0.0, wmax, 1e-13, 1e-8).value;
        return std::pow(xi, 2.0 * a) * iv;
    };
    // factor 4: even symmetry in both variables
    return 4.0 * integrate(outer, 0.0, xi_max, 1e-13, 1e-7).value;
}

template <class Phi>
double truncated_radial_integral(Phi&& phi, double s, double delta, double R) {
    auto f = [&](double r) {
        double p = phi(r);
        return std::pow(r * r - 1.0, s - 1.0 - delta) * std::pow(r, 1.0 - 2.0 * s) / (p * p);
    };
    return integrate(f, 1.0, R, 1e-13, 1e-9).value;
}

}  // namespace detail

struct EmbeddingIdentityReport {
    double lhs = 0.0;       // truncated frequency-pair integral
    double rhs = 0.0;       // truncated radial integral
    double ratio = 0.0;
    double expected = 0.0;  // Beta-function angular constant
    double rel_dev = 0.0;
};

// The pair integral with marginal weight collapses to a radial integral times
// an explicit constant; both sides are truncated at the same radius so the
// ratio is radius-independent even for slowly convergent weights.
inline EmbeddingIdentityReport embedding_identity_check(
    const KaramataFunction& phi, int p, int b, int alpha, int beta,
    double R = 1e3, int n = 1) {
    if (n != 1)
        throw std::invalid_argument("embedding_identity_check: only one spatial coordinate is modelled");
    if (b < 1 || p < 0 || alpha < 0 || beta < 0)
        throw std::invalid_argument("embedding_identity_check: negative order");
    if (alpha + 2 * b * beta > p)
        throw std::invalid_argument("embedding_identity_check: derivative order exceeds p");
    if (!(R > 1.0)) throw std::invalid_argument("embedding_identity_check: R must exceed 1");

    const double s = double(p) + double(b) + 0.5;  // n = 1
    const double delta = double(p - alpha - 2 * b * beta);

    EmbeddingIdentityReport rep;
    rep.lhs = detail::truncated_pair_integral(phi, s, alpha, beta, b, R);
    rep.rhs = detail::truncated_radial_integral(phi, s, delta, R);
    rep.ratio = rep.lhs / rep.rhs;
    // 2 A_alpha b B(alpha + n/2, 2 b beta + b) with A_alpha = 2 for n = 1
    double lg = std::lgamma(alpha + 0.5) + std::lgamma(2.0 * b * beta + b) -
                std::lgamma(alpha + 0.5 + 2.0 * b * beta + b);
    rep.expected = 4.0 * double(b) * std::exp(lg);
    rep.rel_dev = std::fabs(rep.ratio - rep.expected) / rep.expected;
    return rep;
}

struct WindowMassRow {
    double theta = 0.0;
    double K = 0.0;
    double mass = 0.0;
    double growth = 0.0;  // mass ratio against the previous K
};

struct SharpnessVerdict {
    double theta = 0.0;
    bool divergent = false;
    std::vector<WindowMassRow> rows;
};

// Squared weighted mass of the marginal spectral window truncated at radius K;
// its growth in K separates bounded embeddings from unbounded ones.
inline double window_mass(const KaramataFunction& phi, int p, int b, double K) {
    double s = double(p) + double(b) + 0.5;
    return detail::truncated_pair_integral(phi, s, p, 0, b, K);
}

// Sweeps the window mass across truncation radii for each log exponent.
// Divergent means the mass is increasing and every decade grows by at least
// 20 percent; anything flatter is reported as bounded.
inline std::vector<SharpnessVerdict> continuity_sharpness_sweep(
    const std::vector<double>& thetas, const std::vector<double>& Ks,
    int p = 0, int b = 1) {
    if (Ks.size() < 2)
        throw std::invalid_argument("continuity_sharpness_sweep: need at least 2 radii");
    std::vector<SharpnessVerdict> out;
    for (double th : thetas) {
        auto phi = KaramataFunction::multilog({th});
        SharpnessVerdict v;
        v.theta = th;
        bool monotone = true, all_fast = true;
        double prev = 0.0;
        for (std::size_t i = 0; i < Ks.size(); ++i) {
            WindowMassRow row;
            row.theta = th;
            row.K = Ks[i];
            row.mass = window_mass(phi, p, b, Ks[i]);
            if (i > 0) {
                row.growth = row.mass / prev;
                if (row.mass <= prev) monotone = false;
                if (row.growth < 1.20) all_fast = false;
            }
            prev = row.mass;
            v.rows.push_back(row);
        }
        v.divergent = monotone && all_fast;
        out.push_back(std::move(v));
    }
    return out;
}

}  // namespace hlab
