#pragma once

// Cauchy trace extraction and the explicit right inverse that rebuilds a
// space-time field from prescribed time derivatives at t = 0. The inverse
// damps each spatial frequency on its own parabolic time scale through a
// fixed smooth bump.

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "hlab/quadrature.hpp"
#include "hlab/spaces.hpp"

namespace hlab {

// Even bump: 1 on [-1/2, 1/2], 0 outside (-2, 2), smooth glue between.
inline double bump(double tau) {
    double a = std::fabs(tau);
    if (a <= 0.5) return 1.0;
    if (a >= 2.0) return 0.0;
    return smooth_step((a - 0.5) / 1.5);
}

// Extracts v_k = d_t^k w(., 0) for k < r from a field whose last axis is time.
// Works per spatial sample: one time FFT per column, then the spectral
// derivative summed at t = 0.
inline std::vector<TorusField> cauchy_data(const TorusField& w, int r,
                                           const WarningSink& sink = {}) {
    w.validate();
    if (r < 1) throw std::invalid_argument("cauchy_data: need r >= 1");
    const std::size_t d = w.shape.size();
    if (d < 2) throw std::invalid_argument("cauchy_data: field needs a time axis besides space");
    const std::size_t nt = w.shape[d - 1];
    const double Lt = w.length[d - 1];
    const std::size_t nx_total = w.size() / nt;

    std::vector<TorusField> out(r);
    for (int k = 0; k < r; ++k) {
        out[k].shape.assign(w.shape.begin(), w.shape.end() - 1);
        out[k].length.assign(w.length.begin(), w.length.end() - 1);
        out[k].data.assign(nx_total, 0.0);
    }

    double tail = 0.0, total = 0.0;
    const double inv_sqrt2pi = 1.0 / std::sqrt(2.0 * M_PI);
    std::vector<std::complex<double>> col(nt);
    for (std::size_t c = 0; c < nx_total; ++c) {
        for (std::size_t j = 0; j < nt; ++j) col[j] = w.data[c * nt + j];
        auto spec = fft_forward({nt}, {Lt}, col);
        double dxi = spec.dxi();
        for (std::size_t j = 0; j < nt; ++j) {
            double eta = spec.xi(0, j);
            std::complex<double> base = spec.data[j];
            std::complex<double> pw(1.0, 0.0);
            for (int k = 0; k < r; ++k) {
                out[k].data[c] += pw * base * dxi * inv_sqrt2pi;
                pw *= std::complex<double>(0.0, eta);
            }
            // resolution bookkeeping for the highest derivative actually taken
            double e = std::pow(std::fabs(eta), 2.0 * (r - 1)) * std::norm(base);
            total += e;
            long m = spec.mode(0, j);
            if (std::fabs(double(m)) >= 0.4375 * double(nt)) tail += e;
        }
    }
    if (total > 0.0 && tail > 0.01 * total)
        emit_warning(sink, "time spectrum keeps " + fmt_g(100.0 * tail / total) +
                               "% of the derivative-weighted energy in its top octave");
    return out;
}

// Builds w(x, t) = F^{-1}[ bump(<xi>^{2b} t) sum_k vhat_k(xi) t^k / k! ] on a
// time torus of period Lt with Nt samples. Throws when a populated spatial
// mode would squeeze the bump transition under four time steps.
inline TorusField extend_T0(const std::vector<TorusField>& v, int b,
                            std::size_t Nt, double Lt) {
    if (v.empty()) throw std::invalid_argument("extend_T0: no trace components");
    if (b < 1) throw std::invalid_argument("extend_T0: need b >= 1");
    if (Nt < 8) throw std::invalid_argument("extend_T0: need Nt >= 8");
    if (!(Lt > 4.5))
        throw std::invalid_argument("extend_T0: time period must exceed the bump support (need Lt > 4.5)");
    const std::size_t r = v.size();
    for (const auto& f : v) {
        f.validate();
        if (f.shape != v[0].shape || f.length != v[0].length)
            throw std::invalid_argument("extend_T0: trace components live on different grids");
    }

    // spatial spectra of the traces
    std::vector<Spectrum> vh;
    vh.reserve(r);
    for (const auto& f : v) vh.push_back(fft_forward(f.shape, f.length, f.data));

    const std::size_t nx_total = v[0].size();
    const std::size_t dx = v[0].shape.size();
    double vmax = 0.0;
    for (const auto& s : vh)
        for (const auto& c : s.data) vmax = std::max(vmax, std::abs(c));

    const double dt = Lt / double(Nt);
    std::vector<double> scale(nx_total);
    std::vector<std::size_t> idx(dx, 0);
    for (std::size_t flat = 0; flat < nx_total; ++flat) {
        double q = 1.0;
        for (std::size_t a = 0; a < dx; ++a) {
            double xi = vh[0].xi(a, idx[a]);
            q += xi * xi;
        }
        scale[flat] = std::pow(q, double(b));  // <xi>^{2b}
        double amp = 0.0;
        for (const auto& s : vh) amp = std::max(amp, std::abs(s.data[flat]));
        if (amp > 1e-12 * vmax && dt > 0.375 / scale[flat]) {
            double ximag = std::sqrt(q - 1.0);
            throw std::runtime_error(
                "extend_T0: time step " + fmt_g(dt) + " cannot resolve the bump at |xi| = " +
                fmt_g(ximag) + " (needs dt <= " + fmt_g(0.375 / scale[flat]) + ")");
        }
        for (std::size_t a = dx; a-- > 0;) {
            if (++idx[a] < v[0].shape[a]) break;
            idx[a] = 0;
        }
    }

    TorusField out;
    out.shape = v[0].shape;
    out.shape.push_back(Nt);
    out.length = v[0].length;
    out.length.push_back(Lt);
    out.data.assign(nx_total * Nt, 0.0);

    Spectrum row;  // spatial spectrum of one time slice
    row.shape = v[0].shape;
    row.length = v[0].length;
    row.data.resize(nx_total);
    for (std::size_t j = 0; j < Nt; ++j) {
        double t = -0.5 * Lt + dt * double(j);
        for (std::size_t flat = 0; flat < nx_total; ++flat) {
            std::complex<double> sum = 0.0;
            double tk = 1.0, fact = 1.0;
            for (std::size_t k = 0; k < r; ++k) {
                sum += vh[k].data[flat] * (tk / fact);
                tk *= t;
                fact *= double(k + 1);
            }
            row.data[flat] = bump(scale[flat] * t) * sum;
        }
        auto slice = fft_inverse(row);
        for (std::size_t flat = 0; flat < nx_total; ++flat)
            out.data[flat * Nt + j] = slice[flat];
    }
    return out;
}

struct RightInverseReport {
    double residual = 0.0;  // max_k |trace_k(w) - v_k|_inf / max(1, |v|_inf)
    int worst_k = 0;
};

inline RightInverseReport verify_right_inverse(const std::vector<TorusField>& v,
                                               const TorusField& w) {
    if (v.empty()) throw std::invalid_argument("verify_right_inverse: no trace components");
    auto back = cauchy_data(w, int(v.size()));
    double vmax = 0.0;
    for (const auto& f : v)
        for (const auto& c : f.data) vmax = std::max(vmax, std::abs(c));
    RightInverseReport rep;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (back[k].data.size() != v[k].data.size())
            throw std::invalid_argument("verify_right_inverse: grid mismatch");
        for (std::size_t i = 0; i < v[k].data.size(); ++i) {
            double e = std::abs(back[k].data[i] - v[k].data[i]);
            if (e > rep.residual) {
                rep.residual = e;
                rep.worst_k = int(k);
            }
        }
    }
    rep.residual /= std::max(1.0, vmax);
    return rep;
}

// Norm with weight (1 + sum_j xi_j^{4bm} + eta^{2m})^{1/2}, the natural
// anisotropic energy of order (2bm, m).
inline double norm_2bm_m(const TorusField& w, int b, int m,
                         const WarningSink& sink = {}) {
    if (b < 1 || m < 1) throw std::invalid_argument("norm_2bm_m: need b, m >= 1");
    if (w.shape.size() < 2)
        throw std::invalid_argument("norm_2bm_m: field needs a time axis besides space");
    return norm_weighted(w, [b, m](std::span<const double> xi) {
        double q = 1.0;
        for (std::size_t a = 0; a + 1 < xi.size(); ++a)
            q += std::pow(xi[a] * xi[a], 2.0 * double(b) * double(m));
        q += std::pow(xi.back() * xi.back(), double(m));
        return std::sqrt(q);
    }, sink);
}

struct T0BoundConstants {
    std::vector<double> c1;  // int |d_tau^m (bump tau^k)|^2, k = 0..r-1
    std::vector<double> c2;  // int |tau^k bump|^2
};

namespace detail {

inline double bump_poly_deriv(double tau, int k, int m) {
    auto g = [k](double t) { return bump(t) * std::pow(t, double(k)); };
    const double h = 1e-3;
    switch (m) {
        case 0:
            return g(tau);
        case 1:
            return (-g(tau + 2 * h) + 8 * g(tau + h) - 8 * g(tau - h) + g(tau - 2 * h)) / (12 * h);
        case 2:
            return (-g(tau + 2 * h) + 16 * g(tau + h) - 30 * g(tau) + 16 * g(tau - h) -
                    g(tau - 2 * h)) / (12 * h * h);
        default:
            throw std::invalid_argument("bump_poly_deriv: m <= 2 supported");
    }
}

}  // namespace detail

inline T0BoundConstants t0_bound_constants(int m, int r) {
    if (m < 1 || m > 2) throw std::invalid_argument("t0_bound_constants: m in {1, 2}");
    if (r < 1) throw std::invalid_argument("t0_bound_constants: need r >= 1");
    T0BoundConstants out;
    for (int k = 0; k < r; ++k) {
        auto f1 = [k, m](double tau) {
            double v = detail::bump_poly_deriv(tau, k, m);
            return v * v;
        };
        auto f2 = [k](double tau) {
            double v = bump(tau) * std::pow(tau, double(k));
            return v * v;
        };
        out.c1.push_back(integrate(f1, -2.0, 2.0, 1e-10, 1e-7).value);
        out.c2.push_back(integrate(f2, -2.0, 2.0, 1e-12, 1e-9).value);
    }
    return out;
}

struct T0BoundReport {
    double lhs = 0.0;  // |w|_{2bm, m}
    double rhs = 0.0;  // sqrt(sum_k |v_k|^2 in the matching trace orders)
    double C = 0.0;
    std::vector<double> component_norms;
    bool passed = false;
};

// Checks |T0 v|_{2bm,m} <= C (sum_k |v_k|^2_{H^{2b(m-k)-b}})^{1/2} with C
// assembled from the bump constants: per mode the time integrals scale as
// <xi>^{-2b(2k+1)} after tau = <xi>^{2b} t, and Cauchy-Schwarz over the r
// summands gives C^2 = r max_k ((1+n) c2_k + c1_k) / (k!)^2.
inline T0BoundReport t0_bound_check(const std::vector<TorusField>& v,
                                    const TorusField& w, int b, int m) {
    if (v.empty()) throw std::invalid_argument("t0_bound_check: no trace components");
    const int r = int(v.size());
    const int n = int(v[0].shape.size());
    auto consts = t0_bound_constants(m, r);

    T0BoundReport rep;
    rep.lhs = norm_2bm_m(w, b, m);
    double q = 0.0, cmax = 0.0;
    double fact = 1.0;
    for (int k = 0; k < r; ++k) {
        if (k > 0) fact *= double(k);
        RegularityIndex idx{2.0 * b * (m - k) - double(b), 1.0,
                            KaramataFunction::constant(1.0), {}};
        double nk = norm_full(v[k], idx);
        rep.component_norms.push_back(nk);
        q += nk * nk;
        cmax = std::max(cmax, ((1.0 + n) * consts.c2[k] + consts.c1[k]) / (fact * fact));
    }
    rep.rhs = std::sqrt(q);
    rep.C = std::sqrt(double(r) * cmax);
    rep.passed = rep.lhs <= rep.C * rep.rhs * (1.0 + 1e-9);
    return rep;
}

}  // namespace hlab
