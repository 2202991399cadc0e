#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "qnet/errors.hpp"

namespace qnet {

// Round to nearest integer, ties to even (0.5 -> 0, 1.5 -> 2, 612.5 -> 612).
inline long long round_half_even(double x) {
    const double f = std::floor(x);
    const double frac = x - f;
    if (frac > 0.5) return static_cast<long long>(f) + 1;
    if (frac < 0.5) return static_cast<long long>(f);
    const long long lo = static_cast<long long>(f);
    return (lo % 2 == 0) ? lo : lo + 1;
}

inline double mean(std::span<const double> xs) {
    if (xs.empty()) return 0.0;
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

inline double sample_sd(std::span<const double> xs) {
    const std::size_t n = xs.size();
    if (n < 2) return 0.0;
    const double m = mean(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(n - 1));
}

// Standard error of the mean of xs.
inline double standard_error(std::span<const double> xs) {
    if (xs.size() < 2) return 0.0;
    return sample_sd(xs) / std::sqrt(static_cast<double>(xs.size()));
}

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r = 0.0; // Pearson correlation
};

inline LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 2) throw data_error("linear_fit: need >= 2 paired points");
    const double mx = mean(x);
    const double my = mean(y);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0) throw data_error("linear_fit: degenerate abscissa");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r = (syy == 0.0) ? 0.0 : sxy / std::sqrt(sxx * syy);
    return fit;
}

namespace detail {

// Regularized lower incomplete gamma P(a, x) by series expansion, valid
// for x < a + 1.
inline double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma Q(a, x) by continued fraction
// (modified Lentz), valid for x >= a + 1.
inline double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

} // namespace detail

// Regularized upper incomplete gamma Q(a, x).
inline double gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw data_error("gamma_q: domain");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
    return detail::gamma_q_cf(a, x);
}

// Survival function of the chi-squared distribution with df degrees of
// freedom: P(X > x).
inline double chi_squared_sf(double x, double df) {
    if (x <= 0.0) return 1.0;
    return gamma_q(0.5 * df, 0.5 * x);
}

struct ChiSquareResult {
    double statistic = 0.0;
    int df = 0;
    double p_value = 1.0;
};

// Two-sample chi-squared homogeneity test on integer-keyed count
// histograms. Cells are pooled left to right until the smaller sample's
// expected count reaches min_expected; the remainder joins the last cell.
inline ChiSquareResult two_sample_histogram_chi2(const std::map<int, long long>& a,
                                                 const std::map<int, long long>& b,
                                                 double min_expected = 5.0) {
    double na = 0.0, nb = 0.0;
    for (const auto& [k, c] : a) na += static_cast<double>(c);
    for (const auto& [k, c] : b) nb += static_cast<double>(c);
    if (na <= 0.0 || nb <= 0.0) throw data_error("chi2: empty histogram");

    std::map<int, std::pair<double, double>> cells;
    for (const auto& [k, c] : a) cells[k].first += static_cast<double>(c);
    for (const auto& [k, c] : b) cells[k].second += static_cast<double>(c);

    const double frac_min = std::min(na, nb) / (na + nb);
    std::vector<std::pair<double, double>> pooled;
    double ca = 0.0, cb = 0.0;
    for (const auto& [k, ab] : cells) {
        ca += ab.first;
        cb += ab.second;
        if ((ca + cb) * frac_min >= min_expected) {
            pooled.emplace_back(ca, cb);
            ca = cb = 0.0;
        }
    }
    if (ca + cb > 0.0) {
        if (pooled.empty()) pooled.emplace_back(ca, cb);
        else {
            pooled.back().first += ca;
            pooled.back().second += cb;
        }
    }
    if (pooled.size() < 2) throw data_error("chi2: fewer than 2 cells after pooling");

    const double ra = std::sqrt(nb / na);
    const double rb = std::sqrt(na / nb);
    ChiSquareResult res;
    for (const auto& [x, y] : pooled) {
        const double num = ra * x - rb * y;
        res.statistic += num * num / (x + y);
    }
    res.df = static_cast<int>(pooled.size()) - 1;
    res.p_value = chi_squared_sf(res.statistic, res.df);
    return res;
}

} // namespace qnet
