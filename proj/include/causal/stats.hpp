#pragma once

#include <cstdint>
#include <vector>

namespace causal {

struct TestResult {
    double statistic = 0.0;
    double df = 0.0;
    double p_value = 1.0;
};

// Goodness of fit; bins with expected count < min_expected are pooled.
TestResult chi2_gof(const std::vector<long>& observed, const std::vector<double>& probs, double min_expected = 5.0);
// Two-sample homogeneity on count vectors over the same categories.
TestResult chi2_homogeneity(const std::vector<long>& a, const std::vector<long>& b, double min_expected = 5.0);
// Two-sample Kolmogorov-Smirnov with the asymptotic Kolmogorov law.
TestResult ks_two_sample(std::vector<double> a, std::vector<double> b);
double kolmogorov_q(double lambda);

struct Interval {
    double lo = 0.0, hi = 0.0;
};
Interval wilson(long successes, long n, double z = 1.959963984540054);

struct MeanCI {
    double mean = 0.0, sd = 0.0, lo = 0.0, hi = 0.0;
    long n = 0;
};
MeanCI mean_ci(const std::vector<double>& x, double z = 1.959963984540054);

double ls_slope(const std::vector<double>& x, const std::vector<double>& y);

template <class T>
std::vector<long> histogram(const std::vector<T>& values, int bins) {
    std::vector<long> h(bins, 0);
    for (T v : values) {
        long i = static_cast<long>(v);
        if (i < 0) i = 0;
        if (i >= bins) i = bins - 1;
        ++h[i];
    }
    return h;
}

}  // namespace causal
