#include "causal/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>

namespace causal {

namespace {

double chi2_sf(double stat, double df) {
    if (df <= 0) return 1.0;
    boost::math::chi_squared dist(df);
    return boost::math::cdf(boost::math::complement(dist, stat));
}

}  // namespace

TestResult chi2_gof(const std::vector<long>& observed, const std::vector<double>& probs, double min_expected) {
    long n = 0;
    for (long o : observed) n += o;
    std::vector<double> e, o;
    double acc_e = 0.0, acc_o = 0.0;
    const std::size_t k = std::max(observed.size(), probs.size());
    for (std::size_t i = 0; i < k; ++i) {
        acc_e += (i < probs.size() ? probs[i] : 0.0) * static_cast<double>(n);
        acc_o += i < observed.size() ? static_cast<double>(observed[i]) : 0.0;
        if (acc_e >= min_expected) {
            e.push_back(acc_e);
            o.push_back(acc_o);
            acc_e = acc_o = 0.0;
        }
    }
    if (acc_e > 0.0 || acc_o > 0.0) {
        if (e.empty()) {
            e.push_back(acc_e);
            o.push_back(acc_o);
        } else {
            e.back() += acc_e;
            o.back() += acc_o;
        }
    }
    TestResult r;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] > 0.0) {
            r.statistic += (o[i] - e[i]) * (o[i] - e[i]) / e[i];
        } else if (o[i] > 0.0) {
            r.statistic = INFINITY;
        }
    }
    r.df = static_cast<double>(e.size()) - 1.0;
    r.p_value = std::isinf(r.statistic) ? 0.0 : chi2_sf(r.statistic, r.df);
    return r;
}

TestResult chi2_homogeneity(const std::vector<long>& a, const std::vector<long>& b, double min_expected) {
    long na = 0, nb = 0;
    for (long x : a) na += x;
    for (long x : b) nb += x;
    const std::size_t k = std::max(a.size(), b.size());
    auto at = [](const std::vector<long>& v, std::size_t i) { return i < v.size() ? static_cast<double>(v[i]) : 0.0; };
    const double fa = static_cast<double>(na) / static_cast<double>(na + nb);
    const double fb = 1.0 - fa;
    std::vector<double> ca, cb;
    double sa = 0.0, sb = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        sa += at(a, i);
        sb += at(b, i);
        double tot = sa + sb;
        if (tot * std::min(fa, fb) >= min_expected) {
            ca.push_back(sa);
            cb.push_back(sb);
            sa = sb = 0.0;
        }
    }
    if (sa + sb > 0.0) {
        if (ca.empty()) {
            ca.push_back(sa);
            cb.push_back(sb);
        } else {
            ca.back() += sa;
            cb.back() += sb;
        }
    }
    TestResult r;
    for (std::size_t i = 0; i < ca.size(); ++i) {
        double tot = ca[i] + cb[i];
        double ea = tot * fa, eb = tot * fb;
        if (ea > 0) r.statistic += (ca[i] - ea) * (ca[i] - ea) / ea;
        if (eb > 0) r.statistic += (cb[i] - eb) * (cb[i] - eb) / eb;
    }
    r.df = static_cast<double>(ca.size()) - 1.0;
    r.p_value = chi2_sf(r.statistic, r.df);
    return r;
}

double kolmogorov_q(double lambda) {
    if (lambda < 0.2) return 1.0;
    double s = 0.0;
    for (int k = 1; k <= 100; ++k) {
        double term = std::exp(-2.0 * k * k * lambda * lambda);
        s += (k % 2 ? 1.0 : -1.0) * term;
        if (term < 1e-16) break;
    }
    return std::clamp(2.0 * s, 0.0, 1.0);
}

TestResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    while (i < a.size() && j < b.size()) {
        double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    TestResult r;
    r.statistic = d;
    double ne = na * nb / (na + nb);
    double sq = std::sqrt(ne);
    r.p_value = kolmogorov_q((sq + 0.12 + 0.11 / sq) * d);
    return r;
}

Interval wilson(long successes, long n, double z) {
    if (n <= 0) return {0.0, 1.0};
    double p = static_cast<double>(successes) / static_cast<double>(n);
    double nn = static_cast<double>(n);
    double denom = 1.0 + z * z / nn;
    double centre = (p + z * z / (2.0 * nn)) / denom;
    double half = z * std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn)) / denom;
    return {successes <= 0 ? 0.0 : std::max(0.0, centre - half), successes >= n ? 1.0 : std::min(1.0, centre + half)};
}

MeanCI mean_ci(const std::vector<double>& x, double z) {
    MeanCI r;
    r.n = static_cast<long>(x.size());
    if (x.empty()) return r;
    double s = 0.0;
    for (double v : x) s += v;
    r.mean = s / static_cast<double>(x.size());
    double ss = 0.0;
    for (double v : x) ss += (v - r.mean) * (v - r.mean);
    r.sd = x.size() > 1 ? std::sqrt(ss / static_cast<double>(x.size() - 1)) : 0.0;
    double half = z * r.sd / std::sqrt(static_cast<double>(x.size()));
    r.lo = r.mean - half;
    r.hi = r.mean + half;
    return r;
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = std::min(x.size(), y.size());
    if (n < 2) return 0.0;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxx > 0.0 ? sxy / sxx : 0.0;
}

}  // namespace causal
