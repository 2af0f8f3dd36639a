#pragma once

// Compatibility analysis for one-dimensional initial-boundary value problems
//
//   A u = f        on (0, l) x (0, tau),
//   B_{j} u = g_j  on the lateral edges x = 0 and x = l,
//   d_t^mu u = h_mu at t = 0,   mu = 0 .. kappa-1,
//
// where A = sum a^{alpha,beta}(x,t) D_x^alpha d_t^beta over alpha + 2b beta
// <= 2m with D_x = i d_x, kappa = m / b is integral, and each boundary
// operator is a sum of b^{alpha,beta}(t) D_x^alpha d_t^beta over
// alpha + 2b beta <= order.
//
// Smooth solutions force relations between the data: the Taylor coefficients
// v_mu of the solution in time are determined by h, f and the interior
// coefficients, and time derivatives of the boundary data at t = 0 must match
// the boundary operators applied to those coefficients. The number of forced
// relations grows with the regularity s of the ambient space and jumps at a
// discrete exceptional set of s values where a relation changes character.

#include <hlab/cheb.hpp>
#include <hlab/polyfit.hpp>
#include <hlab/spaces.hpp>

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace hlab {

using Coef2 = std::function<std::complex<double>(double x, double t)>;
using Coef1 = std::function<std::complex<double>(double t)>;
using SpaceFn = std::function<std::complex<double>(double x)>;

inline double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
    return r;
}

struct BoundaryOperator {
    int order = 0;                                 // m_j
    std::map<std::pair<int, int>, Coef1> terms;    // (alpha, beta) -> coefficient of D_x^alpha d_t^beta
};

struct ParabolicProblem1D {
    int m = 1;
    int b = 1;
    double l = 1.0;
    double tau = 1.0;
    std::map<std::pair<int, int>, Coef2> a;        // (alpha, beta) -> a^{alpha,beta}(x, t)
    std::array<std::vector<BoundaryOperator>, 2> bc;  // [0]: x = 0, [1]: x = l

    int kappa() const {
        if (b <= 0 || m <= 0 || m % b != 0)
            throw std::invalid_argument("parabolic problem: m must be a positive multiple of b");
        return m / b;
    }

    void validate() const {
        int k = kappa();
        if (!(l > 0.0) || !(tau > 0.0))
            throw std::invalid_argument("parabolic problem: l and tau must be positive");
        if (a.find({0, k}) == a.end())
            throw std::invalid_argument("parabolic problem: leading coefficient a^{0,kappa} missing");
        for (const auto& [key, fn] : a) {
            auto [alpha, beta] = key;
            if (alpha < 0 || beta < 0 || alpha + 2 * b * beta > 2 * m)
                throw std::invalid_argument("parabolic problem: coefficient index outside alpha + 2b beta <= 2m");
            if (!fn) throw std::invalid_argument("parabolic problem: null interior coefficient");
        }
        for (int side = 0; side < 2; ++side) {
            if (int(bc[side].size()) != m)
                throw std::invalid_argument("parabolic problem: expected m boundary operators per edge");
            for (const auto& op : bc[side]) {
                if (op.terms.empty())
                    throw std::invalid_argument("parabolic problem: boundary operator with no terms");
                for (const auto& [key, fn] : op.terms) {
                    auto [alpha, beta] = key;
                    if (alpha < 0 || beta < 0 || alpha + 2 * b * beta > op.order)
                        throw std::invalid_argument(
                            "parabolic problem: boundary term exceeds the operator order");
                    if (!fn) throw std::invalid_argument("parabolic problem: null boundary coefficient");
                }
            }
        }
    }
};

struct ParabolicRHS {
    Coef2 f = [](double, double) { return std::complex<double>(0.0); };
    // boundary data sampled on the uniform inclusive grid t_i = i tau / (nt - 1)
    std::array<std::vector<std::vector<std::complex<double>>>, 2> g;
    std::vector<SpaceFn> h;  // kappa initial conditions
};

inline std::vector<std::complex<double>> sample_uniform(const Coef1& fn, std::size_t nt,
                                                        double tau) {
    if (nt < 2) throw std::invalid_argument("sample_uniform: need at least two samples");
    std::vector<std::complex<double>> out(nt);
    double dt = tau / double(nt - 1);
    for (std::size_t i = 0; i < nt; ++i) out[i] = fn(double(i) * dt);
    return out;
}

inline int sigma0(const ParabolicProblem1D& P) {
    int s = 2 * P.m;
    for (int side = 0; side < 2; ++side)
        for (const auto& op : P.bc[side]) s = std::max(s, op.order + 1);
    return s;
}

// Regularities where the set of forced relations changes character. Values
// (2r + 1) b + m_j + 1/2 for r = 0, 1, ... and every boundary order m_j,
// restricted to (sigma0, s_max].
inline std::vector<double> exceptional_set(const ParabolicProblem1D& P, double s_max) {
    double s0 = double(sigma0(P));
    std::vector<double> out;
    for (int side = 0; side < 2; ++side) {
        for (const auto& op : P.bc[side]) {
            for (int r = 0;; ++r) {
                double e = double((2 * r + 1) * P.b + op.order) + 0.5;
                if (e > s_max) break;
                if (e > s0) out.push_back(e);
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-12; }),
              out.end());
    return out;
}

struct ConditionIndex {
    int side;  // 0: x = 0, 1: x = l
    int j;     // boundary operator index within the edge
    int k;     // order of the time derivative of the boundary data
};

// Forced relations for regularity s: k >= 0 with k < (s - m_j - 1/2 - b) / (2b).
inline std::vector<ConditionIndex> condition_indices(const ParabolicProblem1D& P, double s) {
    std::vector<ConditionIndex> out;
    for (int side = 0; side < 2; ++side) {
        for (int j = 0; j < int(P.bc[side].size()); ++j) {
            double thr = (s - double(P.bc[side][j].order) - 0.5 - double(P.b)) / double(2 * P.b);
            for (int k = 0; double(k) < thr; ++k) out.push_back({side, j, k});
        }
    }
    return out;
}

namespace detail {

// Time derivatives at t = 0 of a callable, via the one-sided polynomial fit.
// Exact for polynomial dependence on t; spectrally accurate otherwise.
inline std::vector<std::complex<double>> t_derivatives_at_zero(
    const std::function<std::complex<double>(double)>& fn, int pmax, double tau) {
    int degree = pmax + 6;
    int window = 2 * (degree + 1);
    double span = 0.4 * std::min(tau, 1.0);
    double dt = span / double(window - 1);
    std::vector<std::complex<double>> samples(window);
    for (int i = 0; i < window; ++i) samples[i] = fn(double(i) * dt);
    return one_sided_derivatives(samples, dt, pmax, degree, window);
}

}  // namespace detail

struct TaylorCoefficients {
    ChebGrid grid;
    std::vector<Eigen::VectorXcd> v;  // v[mu] on the grid nodes
};

// Taylor coefficients v_mu of a smooth solution at t = 0. The first kappa are
// the initial data; the rest follow by solving A u = f for the leading time
// derivative and differentiating in t:
//   v_mu = sum_{alpha,beta: beta <= kappa-1} sum_{q <= mu-kappa}
//          C(mu-kappa, q) d_t^{mu-kappa-q} a0^{alpha,beta}(x, 0) D_x^alpha v_{beta+q}
//        + d_t^{mu-kappa} [ f / a^{0,kappa} ](x, 0),
// with a0^{alpha,beta} = -a^{alpha,beta} / a^{0,kappa}.
inline TaylorCoefficients initial_taylor_coefficients(const ParabolicProblem1D& P,
                                                      const ParabolicRHS& rhs, int count,
                                                      int Ncheb = 32) {
    P.validate();
    int kap = P.kappa();
    if (int(rhs.h.size()) != kap)
        throw std::invalid_argument("initial_taylor_coefficients: expected kappa initial conditions");
    if (count < 0) throw std::invalid_argument("initial_taylor_coefficients: count < 0");

    TaylorCoefficients tc;
    tc.grid = cheb_grid(0.0, P.l, Ncheb);
    const int n = Ncheb + 1;

    tc.v.reserve(count);
    for (int mu = 0; mu < std::min(count, kap); ++mu) {
        Eigen::VectorXcd vm(n);
        for (int i = 0; i < n; ++i) vm(i) = rhs.h[mu](tc.grid.x[i]);
        tc.v.push_back(std::move(vm));
    }
    if (count <= kap) return tc;

    const int pmax = count - 1 - kap;
    const auto& lead = P.a.at({0, kap});

    // d_t^p at 0 of -a^{alpha,beta}/a^{0,kappa} and of f/a^{0,kappa}, per node
    std::map<std::pair<int, int>, std::vector<Eigen::VectorXcd>> da0;
    for (const auto& [key, fn] : P.a) {
        if (key == std::make_pair(0, kap)) continue;
        if (key.second > kap - 1) continue;
        std::vector<Eigen::VectorXcd> der(pmax + 1, Eigen::VectorXcd(n));
        for (int i = 0; i < n; ++i) {
            double xi = tc.grid.x[i];
            auto probe = [&](double t) {
                std::complex<double> denom = lead(xi, t);
                if (std::abs(denom) < 1e-14)
                    throw std::invalid_argument(
                        "initial_taylor_coefficients: leading coefficient vanishes");
                return -fn(xi, t) / denom;
            };
            auto d = detail::t_derivatives_at_zero(probe, pmax, P.tau);
            for (int p = 0; p <= pmax; ++p) der[p](i) = d[p];
        }
        da0.emplace(key, std::move(der));
    }
    std::vector<Eigen::VectorXcd> df(pmax + 1, Eigen::VectorXcd(n));
    for (int i = 0; i < n; ++i) {
        double xi = tc.grid.x[i];
        auto probe = [&](double t) {
            std::complex<double> denom = lead(xi, t);
            if (std::abs(denom) < 1e-14)
                throw std::invalid_argument("initial_taylor_coefficients: leading coefficient vanishes");
            return rhs.f(xi, t) / denom;
        };
        auto d = detail::t_derivatives_at_zero(probe, pmax, P.tau);
        for (int p = 0; p <= pmax; ++p) df[p](i) = d[p];
    }

    const std::complex<double> ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (int mu = kap; mu < count; ++mu) {
        int p = mu - kap;
        Eigen::VectorXcd vm = df[p];
        for (const auto& [key, der] : da0) {
            auto [alpha, beta] = key;
            for (int q = 0; q <= p; ++q) {
                Eigen::VectorXcd dv =
                    ipow[alpha % 4] * cheb_derivative(tc.grid, tc.v[beta + q], alpha);
                vm += binom(p, q) * der[p - q].cwiseProduct(dv);
            }
        }
        tc.v.push_back(std::move(vm));
    }
    return tc;
}

// B_{j,k} applied to the Taylor coefficients, evaluated at the edge:
//   sum_{alpha,beta} sum_{q <= k} C(k, q) d_t^{k-q} b^{alpha,beta}(0)
//                    (D_x^alpha v_{beta+q}) (edge).
inline std::complex<double> boundary_relation_value(const ParabolicProblem1D& P,
                                                    const TaylorCoefficients& tc, int side,
                                                    int j, int k) {
    const auto& op = P.bc[side].at(j);
    const int n = int(tc.grid.x.size());
    const int edge = (side == 0) ? 0 : n - 1;
    const std::complex<double> ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    std::complex<double> out = 0.0;
    for (const auto& [key, coef] : op.terms) {
        auto [alpha, beta] = key;
        auto db = detail::t_derivatives_at_zero([&](double t) { return coef(t); }, k, P.tau);
        for (int q = 0; q <= k; ++q) {
            if (beta + q >= int(tc.v.size()))
                throw std::logic_error("boundary_relation_value: recurrence too short");
            std::complex<double> dv =
                ipow[alpha % 4] * cheb_derivative(tc.grid, tc.v[beta + q], alpha)(edge);
            out += binom(k, q) * db[k - q] * dv;
        }
    }
    return out;
}

struct CompatibilityRow {
    int side;
    int j;
    int k;
    std::complex<double> lhs;  // d_t^k of the boundary data at t = 0
    std::complex<double> rhs;  // boundary operator applied to the Taylor coefficients
    double residual;
    bool satisfied;
};

struct CompatibilityReport {
    double s = 0.0;
    int sigma0 = 0;
    double tol = 1e-8;
    bool exceptional = false;
    double nearest_exceptional = std::numeric_limits<double>::quiet_NaN();
    std::vector<CompatibilityRow> rows;
    bool all_satisfied = true;
};

namespace detail {

inline int recurrence_length(const ParabolicProblem1D& P,
                             const std::vector<ConditionIndex>& idx) {
    int count = P.kappa();
    for (const auto& ci : idx) {
        for (const auto& [key, fn] : P.bc[ci.side].at(ci.j).terms)
            count = std::max(count, key.second + ci.k + 1);
    }
    return count;
}

inline void validate_rhs_shapes(const ParabolicProblem1D& P, const ParabolicRHS& rhs) {
    for (int side = 0; side < 2; ++side) {
        if (rhs.g[side].size() != P.bc[side].size())
            throw std::invalid_argument("compatibility: boundary data count does not match operators");
        for (const auto& gs : rhs.g[side])
            if (gs.size() < 2)
                throw std::invalid_argument("compatibility: boundary data needs at least two samples");
    }
    if (int(rhs.h.size()) != P.kappa())
        throw std::invalid_argument("compatibility: expected kappa initial conditions");
}

}  // namespace detail

inline CompatibilityReport check_compat(const ParabolicProblem1D& P, const ParabolicRHS& rhs,
                                        double s, double tol = 1e-8, int Ncheb = 32) {
    P.validate();
    detail::validate_rhs_shapes(P, rhs);
    CompatibilityReport rep;
    rep.s = s;
    rep.sigma0 = sigma0(P);
    rep.tol = tol;
    if (!(s > double(rep.sigma0)))
        throw std::invalid_argument("check_compat: regularity must exceed " +
                                    std::to_string(rep.sigma0));

    auto E = exceptional_set(P, s + double(4 * P.b) + 1.0);
    rep.nearest_exceptional = std::numeric_limits<double>::infinity();
    for (double e : E)
        rep.nearest_exceptional =
            std::min(rep.nearest_exceptional, std::abs(s - e));
    if (rep.nearest_exceptional < 1e-9) {
        rep.exceptional = true;
        rep.all_satisfied = false;
        return rep;
    }

    auto idx = condition_indices(P, s);
    if (idx.empty()) return rep;

    auto tc = initial_taylor_coefficients(P, rhs, detail::recurrence_length(P, idx), Ncheb);

    // one time-derivative extraction per (side, j), up to the largest k used
    std::array<std::vector<std::vector<std::complex<double>>>, 2> gder;
    for (int side = 0; side < 2; ++side)
        gder[side].resize(P.bc[side].size());
    std::array<std::vector<int>, 2> kmax;
    for (int side = 0; side < 2; ++side) kmax[side].assign(P.bc[side].size(), -1);
    for (const auto& ci : idx)
        kmax[ci.side][ci.j] = std::max(kmax[ci.side][ci.j], ci.k);
    for (int side = 0; side < 2; ++side) {
        for (int j = 0; j < int(P.bc[side].size()); ++j) {
            if (kmax[side][j] < 0) continue;
            const auto& gs = rhs.g[side][j];
            double dt = P.tau / double(gs.size() - 1);
            gder[side][j] = one_sided_derivatives(gs, dt, kmax[side][j]);
        }
    }

    for (const auto& ci : idx) {
        CompatibilityRow row;
        row.side = ci.side;
        row.j = ci.j;
        row.k = ci.k;
        row.lhs = gder[ci.side][ci.j][ci.k];
        row.rhs = boundary_relation_value(P, tc, ci.side, ci.j, ci.k);
        row.residual = std::abs(row.lhs - row.rhs);
        double scale = std::max(1.0, std::max(std::abs(row.lhs), std::abs(row.rhs)));
        row.satisfied = row.residual <= tol * scale;
        rep.all_satisfied = rep.all_satisfied && row.satisfied;
        rep.rows.push_back(row);
    }
    return rep;
}

struct ProjectionResult {
    ParabolicRHS corrected;
    std::vector<CompatibilityRow> corrections;  // the rows before correction
    double max_correction = 0.0;                // largest |rhs - lhs| applied
};

// Minimal modification of the boundary data that makes the problem
// compatible: adds the Taylor polynomial of the defect,
//   g*(t) = g(t) + sum_k (rhs_k - lhs_k) t^k / k!,
// per boundary operator. Applying the projection twice changes nothing
// beyond roundoff because the derivative extraction is linear and exact on
// polynomials.
inline ProjectionResult project_compatible(const ParabolicProblem1D& P, const ParabolicRHS& rhs,
                                           double s, int Ncheb = 32) {
    auto rep = check_compat(P, rhs, s, 1e-8, Ncheb);
    if (rep.exceptional)
        throw std::invalid_argument("project_compatible: regularity lies in the exceptional set");
    ProjectionResult out;
    out.corrected = rhs;
    out.corrections = rep.rows;
    for (const auto& row : rep.rows) {
        std::complex<double> z = row.rhs - row.lhs;
        out.max_correction = std::max(out.max_correction, std::abs(z));
        auto& gs = out.corrected.g[row.side][row.j];
        double dt = P.tau / double(gs.size() - 1);
        double kfact = 1.0;
        for (int i = 2; i <= row.k; ++i) kfact *= double(i);
        for (std::size_t i = 0; i < gs.size(); ++i) {
            double t = double(i) * dt;
            gs[i] += z * std::pow(t, row.k) / kfact;
        }
    }
    return out;
}

struct VanishingOrderRow {
    int k;
    double residual;  // L2 norm in x of the k-th time derivative at t = 0
    bool ok;
};

struct VanishingOrderReport {
    double s = 0.0, gamma = 0.0;
    int orders = 0;  // number of required vanishing orders
    std::vector<VanishingOrderRow> rows;
    bool passed = true;
};

// Functions in the regularity-s space with gamma-anisotropic time direction
// have traces d_t^k u(., 0) defined for k < s gamma - 1/2; membership in the
// subspace of functions flat at t = 0 requires those traces to vanish. The
// field is a box field with time as the last axis starting at t = 0.
inline VanishingOrderReport trace_vanishing_order(const BoxField& w, double s, double gamma,
                                                  double tol = 1e-8) {
    w.validate();
    if (w.shape.size() != 2)
        throw std::invalid_argument("trace_vanishing_order: expected a 2-d space x time field");
    if (std::abs(w.lower[1]) > 1e-12)
        throw std::invalid_argument("trace_vanishing_order: time axis must start at 0");
    VanishingOrderReport rep;
    rep.s = s;
    rep.gamma = gamma;
    double thr = s * gamma - 0.5;
    for (int k = 0; double(k) < thr; ++k) ++rep.orders;
    if (rep.orders == 0) return rep;

    const std::size_t nx = w.shape[0], nt = w.shape[1];
    double dt = (w.upper[1] - w.lower[1]) / double(nt - 1);
    double dx = (w.upper[0] - w.lower[0]) / double(nx - 1);
    int kmax = rep.orders - 1;
    std::vector<std::vector<std::complex<double>>> ders(nx);
    for (std::size_t ix = 0; ix < nx; ++ix) {
        std::span<const std::complex<double>> col(w.data.data() + ix * nt, nt);
        ders[ix] = one_sided_derivatives(col, dt, kmax);
    }
    double field_scale = std::max(1.0, trapezoid_l2(w));
    for (int k = 0; k <= kmax; ++k) {
        double acc = 0.0;
        for (std::size_t ix = 0; ix < nx; ++ix) {
            double wgt = (ix == 0 || ix == nx - 1) ? 0.5 : 1.0;
            acc += wgt * std::norm(ders[ix][k]) * dx;
        }
        VanishingOrderRow row;
        row.k = k;
        row.residual = std::sqrt(acc);
        row.ok = row.residual <= tol * field_scale;
        rep.passed = rep.passed && row.ok;
        rep.rows.push_back(row);
    }
    return rep;
}

// The heat operator d_t - d_xx with Dirichlet or Neumann edges, as a
// one-dimensional parabolic problem (m = b = 1).
inline ParabolicProblem1D heat_problem(double l, double tau, bool neumann = false) {
    ParabolicProblem1D P;
    P.m = 1;
    P.b = 1;
    P.l = l;
    P.tau = tau;
    P.a[{0, 1}] = [](double, double) { return std::complex<double>(1.0); };
    P.a[{2, 0}] = [](double, double) { return std::complex<double>(1.0); };  // D_x^2 = -d_xx
    BoundaryOperator op;
    if (neumann) {
        op.order = 1;
        op.terms[{1, 0}] = [](double) { return std::complex<double>(0.0, -1.0); };  // -i D_x = d_x
    } else {
        op.order = 0;
        op.terms[{0, 0}] = [](double) { return std::complex<double>(1.0); };
    }
    P.bc[0] = {op};
    P.bc[1] = {op};
    return P;
}

}  // namespace hlab
