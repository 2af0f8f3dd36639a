#pragma once

// Slowly varying weight functions on [1, inf) and the checks built on them:
// slow-variation probes, regular-variation order, the Dini-type integral
// condition, and two-sided power envelopes.

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hlab/quadrature.hpp"
#include "hlab/util.hpp"

namespace hlab {

enum class KaramataKind { Constant, MultiLog, IntegralRep, Tabulated };

class KaramataFunction {
  public:
    static KaramataFunction constant(double c) {
        if (!(c > 0.0) || !std::isfinite(c))
            throw std::invalid_argument("KaramataFunction::constant: need finite c > 0");
        KaramataFunction k(KaramataKind::Constant);
        k.const_ = c;
        return k;
    }

    // Product of iterated-log factors: (1+ln r)^t0 * (1+ln(1+ln r))^t1 * ...
    static KaramataFunction multilog(std::vector<double> thetas) {
        if (thetas.empty())
            throw std::invalid_argument("KaramataFunction::multilog: empty exponent list");
        for (double t : thetas)
            if (!std::isfinite(t))
                throw std::invalid_argument("KaramataFunction::multilog: non-finite exponent");
        KaramataFunction k(KaramataKind::MultiLog);
        k.thetas_ = std::move(thetas);
        return k;
    }

    // phi(r) = exp(delta(r) + int_1^r eps(t)/t dt) with bounded delta, eps -> 0.
    static KaramataFunction integral_rep(std::function<double(double)> delta,
                                         std::function<double(double)> eps) {
        if (!delta || !eps)
            throw std::invalid_argument("KaramataFunction::integral_rep: null callable");
        KaramataFunction k(KaramataKind::IntegralRep);
        k.delta_ = std::move(delta);
        k.eps_ = std::move(eps);
        return k;
    }

    // Log-log interpolation through sample points (r_i, phi_i), r_i >= 1 strictly
    // increasing. Evaluation outside the table throws unless extrapolation was
    // requested, in which case the end segments continue with their slopes.
    static KaramataFunction tabulated(std::vector<std::pair<double, double>> pts,
                                      bool extrapolate = false) {
        if (pts.size() < 2)
            throw std::invalid_argument("KaramataFunction::tabulated: need at least 2 points");
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (!(pts[i].first >= 1.0) || !std::isfinite(pts[i].first))
                throw std::invalid_argument("KaramataFunction::tabulated: abscissae must lie in [1, inf)");
            if (!(pts[i].second > 0.0) || !std::isfinite(pts[i].second))
                throw std::invalid_argument("KaramataFunction::tabulated: values must be finite and positive");
            if (i > 0 && !(pts[i].first > pts[i - 1].first))
                throw std::invalid_argument("KaramataFunction::tabulated: abscissae must be strictly increasing");
        }
        KaramataFunction k(KaramataKind::Tabulated);
        k.table_ = std::move(pts);
        k.extrapolate_ = extrapolate;
        return k;
    }

    KaramataKind kind() const { return kind_; }
    const std::vector<double>& thetas() const { return thetas_; }
    double constant_value() const { return const_; }

    double operator()(double r) const {
        if (!(r >= 1.0))
            throw std::domain_error("KaramataFunction: argument below 1");
        switch (kind_) {
            case KaramataKind::Constant:
                return const_;
            case KaramataKind::MultiLog: {
                double level = std::log(r);  // L_0 - 1 with L_1 = 1 + ln r
                double out = 1.0;
                for (double t : thetas_) {
                    double L = 1.0 + level;
                    if (t != 0.0) out *= std::pow(L, t);
                    level = std::log(L);
                }
                return out;
            }
            case KaramataKind::IntegralRep: {
                // int_1^r eps(t)/t dt = int_0^{ln r} eps(e^u) du
                double lr = std::log(r);
                double iv = 0.0;
                if (lr > 0.0)
                    iv = integrate([this](double u) { return eps_(std::exp(u)); },
                                   0.0, lr, 1e-13, 1e-11).value;
                return std::exp(delta_(r) + iv);
            }
            case KaramataKind::Tabulated: {
                const auto& T = table_;
                if (r < T.front().first || r > T.back().first) {
                    if (!extrapolate_)
                        throw std::out_of_range("KaramataFunction: argument outside tabulated range");
                }
                std::size_t hi = 1;
                while (hi + 1 < T.size() && T[hi].first < r) ++hi;
                const auto& p0 = T[hi - 1];
                const auto& p1 = T[hi];
                double x0 = std::log(p0.first), x1 = std::log(p1.first);
                double y0 = std::log(p0.second), y1 = std::log(p1.second);
                double x = std::log(std::max(r, 1.0));
                double y = y0 + (y1 - y0) * (x - x0) / (x1 - x0);
                return std::exp(y);
            }
        }
        throw std::logic_error("KaramataFunction: bad kind");
    }

  private:
    explicit KaramataFunction(KaramataKind k) : kind_(k) {}

    KaramataKind kind_;
    double const_ = 1.0;
    std::vector<double> thetas_;
    std::function<double(double)> delta_, eps_;
    std::vector<std::pair<double, double>> table_;
    bool extrapolate_ = false;
};

struct SlowVariationReport {
    double max_deviation = 0.0;  // max |phi(lambda r)/phi(r) - 1|
    double worst_r = 0.0;
    double worst_lambda = 0.0;
    double tol = 0.0;
    bool passed = false;
};

// Probes the defining limit phi(lambda r)/phi(r) -> 1 over the top decade of
// r_grid. The property is asymptotic, so small r values only feed the grid's
// upper range.
template <class Phi>
SlowVariationReport check_slowly_varying(Phi&& phi,
                                         const std::vector<double>& r_grid,
                                         const std::vector<double>& lambdas,
                                         double tol = 0.1) {
    if (r_grid.empty() || lambdas.empty())
        throw std::invalid_argument("check_slowly_varying: empty probe set");
    bool have_nontrivial = false;
    for (double lam : lambdas) {
        if (!(lam > 0.0)) throw std::invalid_argument("check_slowly_varying: lambda must be positive");
        if (lam != 1.0) have_nontrivial = true;
    }
    if (!have_nontrivial)
        throw std::invalid_argument("check_slowly_varying: all probe ratios are 1");
    double rmax = *std::max_element(r_grid.begin(), r_grid.end());
    SlowVariationReport rep;
    rep.tol = tol;
    for (double r : r_grid) {
        if (!(r >= 1.0)) throw std::invalid_argument("check_slowly_varying: grid point below 1");
        if (r < rmax / 10.0) continue;
        for (double lam : lambdas) {
            if (lam * r < 1.0) continue;
            double dev = std::fabs(phi(lam * r) / phi(r) - 1.0);
            if (dev > rep.max_deviation) {
                rep.max_deviation = dev;
                rep.worst_r = r;
                rep.worst_lambda = lam;
            }
        }
    }
    rep.passed = rep.max_deviation <= tol;
    return rep;
}

// Least-squares slope of ln phi against ln r over the top decades of the grid;
// zero for slowly varying functions, rho for regularly varying ones.
template <class Phi>
double estimate_rv_order(Phi&& phi, const std::vector<double>& r_grid) {
    if (r_grid.size() < 2)
        throw std::invalid_argument("estimate_rv_order: need at least 2 grid points");
    double rmax = *std::max_element(r_grid.begin(), r_grid.end());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    for (double r : r_grid) {
        if (!(r >= 1.0)) throw std::invalid_argument("estimate_rv_order: grid point below 1");
        if (r < rmax / 100.0) continue;
        double x = std::log(r), y = std::log(phi(r));
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++n;
    }
    if (n < 2) throw std::invalid_argument("estimate_rv_order: top decades hold fewer than 2 points");
    double denom = double(n) * sxx - sx * sx;
    if (!(std::fabs(denom) > 0.0))
        throw std::invalid_argument("estimate_rv_order: degenerate abscissae");
    return (double(n) * sxy - sx * sy) / denom;
}

enum class IntegralStatus { Converges, Diverges, Indeterminate };

struct IntegralConditionResult {
    IntegralStatus status = IntegralStatus::Indeterminate;
    double value = 0.0;            // when convergent: int_1^inf dr/(r phi^2)
    double divergence_rate = 0.0;  // when divergent: slope vs ln R at the far end
    double tail_exponent = 0.0;    // fitted alpha of F(u) ~ C (u+a)^-alpha, u = ln r
    std::vector<std::pair<double, double>> partials;  // (R, int_1^R)
    std::string detail;
};

namespace detail {

// Fits F(u) = C (u+a)^-alpha through three samples; returns false if the data
// is inconsistent with a shifted power (non-monotone or non-log-convex).
inline bool fit_shifted_power(double u1, double F1, double u2, double F2,
                              double u3, double F3,
                              double& C, double& a, double& alpha) {
    if (!(F1 > 0 && F2 > 0 && F3 > 0)) return false;
    if (!(F1 >= F2 && F2 >= F3)) return false;
    double l12 = std::log(F1 / F2), l23 = std::log(F2 / F3);
    if (l12 == 0.0 && l23 == 0.0) {  // constant F
        C = F2; a = 0.0; alpha = 0.0;
        return true;
    }
    if (!(l23 > 0.0)) return false;
    double target = l12 / l23;
    auto g = [&](double aa) {
        return std::log((u2 + aa) / (u1 + aa)) / std::log((u3 + aa) / (u2 + aa)) - target;
    };
    double lo = -u1 + 1e-9, hi = 1e9;
    double glo = g(lo), ghi = g(hi);
    if (!(glo * ghi <= 0.0)) return false;
    for (int it = 0; it < 200; ++it) {
        double mid = (lo <= 0.0 || hi <= 0.0) ? 0.5 * (lo + hi)
                                              : std::sqrt(std::max(lo, 1e-12) * hi);
        if (!(mid > lo && mid < hi)) mid = 0.5 * (lo + hi);
        double gm = g(mid);
        if (glo * gm <= 0.0) { hi = mid; ghi = gm; }
        else { lo = mid; glo = gm; }
        if (hi - lo < 1e-12 * (1.0 + std::fabs(hi))) break;
    }
    a = 0.5 * (lo + hi);
    alpha = l12 / std::log((u2 + a) / (u1 + a));
    C = F2 * std::pow(u2 + a, alpha);
    return std::isfinite(a) && std::isfinite(alpha) && std::isfinite(C);
}

}  // namespace detail

// Decides int_1^inf dr/(r phi^2(r)) by substituting u = ln r, integrating the
// transformed density F(u) = phi(e^u)^-2 out to u = 600 and modelling the tail
// as a shifted power in u. Partial integrals at R = 10^j are kept for rate
// reporting.
template <class Phi>
IntegralConditionResult integral_condition(Phi&& phi) {
    IntegralConditionResult res;
    auto F = [&phi](double u) {
        double p = phi(std::exp(u));
        return 1.0 / (p * p);
    };

    const double u_end = 600.0;  // e^600 is still representable in double
    try {
        // Partial integrals at decade marks, then the remainder out to u_end.
        const double LN10 = std::log(10.0);
        double acc = 0.0, prev = 0.0;
        res.partials.push_back({1.0, 0.0});
        for (int j = 1; j <= 12; ++j) {
            acc += integrate(F, prev, j * LN10, 1e-14, 1e-11).value;
            prev = j * LN10;
            res.partials.push_back({std::pow(10.0, j), acc});
        }
        double total_to_end = acc + integrate(F, prev, u_end, 1e-14, 1e-11).value;

        const double u1 = 150.0, u2 = 300.0, u3 = u_end;
        double F1 = F(u1), F2 = F(u2), F3 = F(u3);

        if (F1 < 1e-300) {
            // phi grows so fast the density has already underflowed; the tail
            // beyond u_end is negligible at any tolerance we report.
            res.status = IntegralStatus::Converges;
            res.value = total_to_end;
            res.tail_exponent = std::numeric_limits<double>::infinity();
            res.detail = "density underflow beyond u = 150";
            return res;
        }

        double C, a, alpha;
        bool ok = detail::fit_shifted_power(u1, F1, u2, F2, u3, F3, C, a, alpha);
        if (ok) {
            // Guard against a model that does not actually describe F.
            double pred = C * std::pow(100.0 + a, -alpha);
            double seen = F(100.0);
            if (!(std::fabs(pred - seen) <= 0.05 * std::fabs(seen) + 1e-300)) ok = false;
        }

        if (ok) {
            res.tail_exponent = alpha;
            if (alpha > 1.0 + 1e-3) {
                res.status = IntegralStatus::Converges;
                res.value = total_to_end + C * std::pow(u3 + a, 1.0 - alpha) / (alpha - 1.0);
                res.detail = "tail modelled as shifted power";
            } else {
                res.status = IntegralStatus::Diverges;
                // Slope of the partial integral against ln R over the last decades.
                const auto& P = res.partials;
                double x0 = std::log(P[9].first), y0 = P[9].second;
                double x1 = std::log(P[12].first), y1 = P[12].second;
                res.divergence_rate = (y1 - y0) / (x1 - x0);
                res.detail = "tail exponent at or below 1";
            }
            return res;
        }

        // Fall back to comparing the two closed-form growth models on the
        // partial integrals: a + b ln R (divergent) vs a - b R^-e (convergent).
        const auto& P = res.partials;
        double d1 = P[10].second - P[9].second;
        double d2 = P[11].second - P[10].second;
        double d3 = P[12].second - P[11].second;
        if (d1 <= 0 && d2 <= 0 && d3 <= 0) {
            res.status = IntegralStatus::Converges;
            res.value = total_to_end;
            res.detail = "flat partials, residual tail ignored";
        } else if (d3 > 0.5 * d1) {
            res.status = IntegralStatus::Diverges;
            res.divergence_rate = d3 / std::log(10.0);
            res.detail = "near-linear growth in ln R";
        } else {
            res.status = IntegralStatus::Indeterminate;
            res.detail = "tail fit failed and decade increments are ambiguous";
        }
        return res;
    } catch (const std::out_of_range& e) {
        res.status = IntegralStatus::Indeterminate;
        res.detail = std::string("evaluation range exhausted: ") + e.what();
        return res;
    }
}

struct PowerBounds {
    double c0 = 0.0;  // c0 r^{s0-s} <= phi(r)
    double c1 = 0.0;  // phi(r) <= c1 r^{s1-s}
    double s0 = 0.0, s = 0.0, s1 = 0.0;
    double witness_r0 = 1.0, witness_r1 = 1.0;
};

// Tight grid constants for the two-sided envelope c0 r^{s0-s} <= phi <= c1 r^{s1-s}.
template <class Phi>
PowerBounds power_bounds(Phi&& phi, double s0, double s, double s1,
                         const std::vector<double>& r_grid) {
    if (!(s0 < s && s < s1))
        throw std::invalid_argument("power_bounds: need s0 < s < s1");
    if (r_grid.empty())
        throw std::invalid_argument("power_bounds: empty grid");
    PowerBounds pb;
    pb.s0 = s0; pb.s = s; pb.s1 = s1;
    double c0 = std::numeric_limits<double>::infinity();
    double c1 = 0.0;
    for (double r : r_grid) {
        if (!(r >= 1.0)) throw std::invalid_argument("power_bounds: grid point below 1");
        double p = phi(r);
        double lo = p * std::pow(r, s - s0);
        double hi = p * std::pow(r, s - s1);
        if (lo < c0) { c0 = lo; pb.witness_r0 = r; }
        if (hi > c1) { c1 = hi; pb.witness_r1 = r; }
    }
    pb.c0 = c0;
    pb.c1 = c1;
    return pb;
}

}  // namespace hlab
