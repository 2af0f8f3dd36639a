#pragma once

// Chebyshev-Gauss-Lobatto collocation on an interval: nodes, the spectral
// differentiation matrix, and barycentric evaluation.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace hlab {

struct ChebGrid {
    double a = 0.0, b = 1.0;
    std::vector<double> x;  // N+1 nodes, increasing, endpoints included
    Eigen::MatrixXd D;      // d/dx on node values

    int order() const { return int(x.size()) - 1; }
};

inline ChebGrid cheb_grid(double a, double b, int N) {
    if (!(b > a)) throw std::invalid_argument("cheb_grid: empty interval");
    if (N < 2) throw std::invalid_argument("cheb_grid: need N >= 2");
    ChebGrid g;
    g.a = a;
    g.b = b;
    g.x.resize(N + 1);
    std::vector<double> t(N + 1);  // standard nodes cos(j pi / N), decreasing
    for (int j = 0; j <= N; ++j) {
        t[j] = std::cos(M_PI * double(j) / double(N));
        g.x[j] = a + 0.5 * (b - a) * (1.0 - t[j]);
    }
    g.x[0] = a;
    g.x[N] = b;

    Eigen::MatrixXd D(N + 1, N + 1);
    auto c = [N](int i) { return (i == 0 || i == N) ? 2.0 : 1.0; };
    for (int i = 0; i <= N; ++i) {
        for (int j = 0; j <= N; ++j) {
            if (i == j) continue;
            double sgn = ((i + j) % 2 == 0) ? 1.0 : -1.0;
            D(i, j) = (c(i) / c(j)) * sgn / (t[i] - t[j]);
        }
    }
    // negative sum trick keeps the rows exact on constants
    for (int i = 0; i <= N; ++i) {
        double s = 0.0;
        for (int j = 0; j <= N; ++j)
            if (j != i) s += D(i, j);
        D(i, i) = -s;
    }
    // chain rule for x = a + (b - a)(1 - t)/2
    g.D = D * (-2.0 / (b - a));
    return g;
}

// p-th derivative of the interpolant through the node values, computed in
// Chebyshev coefficient space. The series is truncated where it reaches its
// roundoff plateau before differentiating; repeated application of the
// differentiation matrix would amplify that plateau by the matrix norm
// (roughly (0.4 N^2)^p), which already ruins fourth derivatives at N = 32.
inline Eigen::VectorXcd cheb_derivative(const ChebGrid& g, const Eigen::VectorXcd& vals, int p) {
    using C = std::complex<double>;
    const int N = g.order();
    if (int(vals.size()) != N + 1)
        throw std::invalid_argument("cheb_derivative: value count does not match the grid");
    if (p < 0) throw std::invalid_argument("cheb_derivative: negative order");
    if (p == 0) return vals;

    std::vector<C> c(N + 1);
    for (int k = 0; k <= N; ++k) {
        C acc(0.0);
        for (int j = 0; j <= N; ++j) {
            double w = (j == 0 || j == N) ? 0.5 : 1.0;
            acc += w * vals(j) * std::cos(M_PI * double(j) * double(k) / double(N));
        }
        double ck = (k == 0 || k == N) ? 2.0 : 1.0;
        c[k] = acc * (2.0 / (double(N) * ck));
    }
    double amax = 0.0;
    for (const C& v : c) amax = std::max(amax, std::abs(v));
    int K = 0;
    for (int k = 0; k <= N; ++k)
        if (std::abs(c[k]) > 1e-14 * amax) K = k;
    c.resize(K + 1);

    const double chain = -2.0 / (g.b - g.a);  // dt/dx for the standard variable
    for (int it = 0; it < p; ++it) {
        int d = int(c.size()) - 1;
        std::vector<C> der(std::size_t(std::max(d, 1)), C(0.0));
        C next2(0.0), next1(0.0);
        for (int q = d - 1; q >= 0; --q) {
            C bq = next2 + 2.0 * double(q + 1) * c[q + 1];
            next2 = next1;
            next1 = bq;
            der[q] = bq;
        }
        der[0] *= 0.5;
        for (C& v : der) v *= chain;
        c = std::move(der);
    }
    Eigen::VectorXcd out(N + 1);
    for (int j = 0; j <= N; ++j) {
        C acc(0.0);
        for (int k = 0; k < int(c.size()); ++k)
            acc += c[k] * std::cos(M_PI * double(j) * double(k) / double(N));
        out(j) = acc;
    }
    return out;
}

}  // namespace hlab
