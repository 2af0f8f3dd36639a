#pragma once

// One-sided derivative estimation at t = 0 from uniform samples on [0, T].
// A least-squares polynomial in the Chebyshev basis is fitted over a short
// window of leading samples and differentiated in coefficient space. The fit
// reproduces polynomials up to its degree exactly, so estimates degrade only
// through genuine truncation error of the data, not through the method.

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

namespace hlab {

namespace detail {

// Derivative of a Chebyshev series on [-1, 1] in coefficient space.
inline std::vector<double> cheb_series_derivative(const std::vector<double>& c) {
    int d = int(c.size()) - 1;
    if (d <= 0) return {0.0};
    std::vector<double> b(d, 0.0);  // degree d-1
    double next2 = 0.0, next1 = 0.0;  // b[q+2], b[q+1] during downward sweep
    for (int q = d - 1; q >= 0; --q) {
        double bq = next2 + 2.0 * double(q + 1) * c[q + 1];
        next2 = next1;
        next1 = bq;
        b[q] = bq;
    }
    b[0] *= 0.5;
    return b;
}

inline double cheb_series_at_minus1(const std::vector<double>& c) {
    double s = 0.0, sgn = 1.0;
    for (double v : c) {
        s += sgn * v;
        sgn = -sgn;
    }
    return s;
}

}  // namespace detail

// Derivatives d^k/dt^k at t = 0 for k = 0..kmax. Samples are f(j * dt),
// j = 0, 1, .... Degree defaults to kmax + 6; the window defaults to a span
// of about 0.35 time units, but never fewer than 2 (degree + 1) samples.
inline std::vector<std::complex<double>> one_sided_derivatives(
    std::span<const std::complex<double>> samples, double dt, int kmax,
    int degree = -1, int window = -1) {
    if (kmax < 0) throw std::invalid_argument("one_sided_derivatives: kmax < 0");
    if (!(dt > 0.0)) throw std::invalid_argument("one_sided_derivatives: dt <= 0");
    if (degree < 0) degree = kmax + 6;
    if (degree < kmax) throw std::invalid_argument("one_sided_derivatives: degree < kmax");
    if (window < 0) {
        // Target a fit span of about a third of a time unit. Tying the window
        // to the sample count instead would shrink the span on fine grids and
        // amplify roundoff in the higher derivatives by (1/span)^k.
        double total = dt * double(samples.size() - 1);
        double span_target = 0.35 * std::min(total, 1.0);
        window = std::max(int(std::lround(span_target / dt)) + 1, 2 * (degree + 1));
    }
    if (window < degree + 1) throw std::invalid_argument("one_sided_derivatives: window too short");
    if (std::size_t(window) > samples.size()) window = int(samples.size());
    if (window < degree + 1)
        throw std::invalid_argument("one_sided_derivatives: not enough samples for requested degree");

    const double span = dt * double(window - 1);
    // Vandermonde in T_q(2 t / span - 1)
    Eigen::MatrixXd A(window, degree + 1);
    for (int j = 0; j < window; ++j) {
        double u = 2.0 * (double(j) * dt) / span - 1.0;
        double prev = 1.0, cur = u;
        A(j, 0) = 1.0;
        if (degree >= 1) A(j, 1) = u;
        for (int q = 2; q <= degree; ++q) {
            double nxt = 2.0 * u * cur - prev;
            A(j, q) = nxt;
            prev = cur;
            cur = nxt;
        }
    }
    auto qr = A.colPivHouseholderQr();
    Eigen::VectorXd re(window), im(window);
    for (int j = 0; j < window; ++j) {
        re(j) = samples[j].real();
        im(j) = samples[j].imag();
    }
    Eigen::VectorXd cre = qr.solve(re), cim = qr.solve(im);

    std::vector<double> sre(cre.data(), cre.data() + degree + 1);
    std::vector<double> sim(cim.data(), cim.data() + degree + 1);
    std::vector<std::complex<double>> out(kmax + 1);
    const double scale = 2.0 / span;  // du/dt
    double pw = 1.0;
    for (int k = 0; k <= kmax; ++k) {
        out[k] = pw * std::complex<double>(detail::cheb_series_at_minus1(sre),
                                           detail::cheb_series_at_minus1(sim));
        sre = detail::cheb_series_derivative(sre);
        sim = detail::cheb_series_derivative(sim);
        pw *= scale;
    }
    return out;
}

inline std::vector<double> one_sided_derivatives_real(std::span<const double> samples,
                                                      double dt, int kmax,
                                                      int degree = -1, int window = -1) {
    std::vector<std::complex<double>> tmp(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) tmp[i] = samples[i];
    auto c = one_sided_derivatives(tmp, dt, kmax, degree, window);
    std::vector<double> out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) out[i] = c[i].real();
    return out;
}

}  // namespace hlab
