#include "causal/offspring.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "causal/error.hpp"

namespace causal {

namespace {

constexpr double kInputTol = 1e-9;

double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

void OffspringDistribution::finalize() {
    while (w_.size() > 1 && w_.back() == 0.0) w_.pop_back();
    if (w_.empty()) w_.push_back(1.0);
    double total = 0.0;
    for (double x : w_) total += x;
    for (double& x : w_) x /= total;
    mean_ = 0.0;
    for (std::size_t i = 0; i < w_.size(); ++i) mean_ += static_cast<double>(i) * w_[i];
    cdf_.assign(w_.size(), 0.0);
    double acc = 0.0;
    for (std::size_t i = 0; i < w_.size(); ++i) {
        acc += w_[i];
        cdf_[i] = acc;
    }
    cdf_.back() = 1.0;
}

int OffspringDistribution::sample(Rng& rng) const {
    if (w_.size() == 1) return 0;
    double u = rng.uniform();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    int k = static_cast<int>(it - cdf_.begin());
    if (k >= static_cast<int>(w_.size())) k = static_cast<int>(w_.size()) - 1;
    // skip zero-weight atoms that upper_bound can land on through rounding
    while (w_[k] == 0.0 && k + 1 < static_cast<int>(w_.size())) ++k;
    return k;
}

std::string OffspringDistribution::to_string() const {
    std::ostringstream os;
    os.precision(17);
    bool first = true;
    for (std::size_t i = 0; i < w_.size(); ++i) {
        if (w_[i] == 0.0) continue;
        if (!first) os << ',';
        os << i << ':' << w_[i];
        first = false;
    }
    return os.str();
}

OffspringDistribution mk_offspring(const std::vector<std::pair<int, double>>& weights) {
    int top = 0;
    double total = 0.0;
    for (auto [c, p] : weights) {
        if (c < 0) throw Error(Errc::OutOfDomain, "negative child count");
        if (p < 0.0) throw Error(Errc::NegativeWeight, "weight " + std::to_string(p));
        top = std::max(top, c);
        total += p;
    }
    if (weights.empty() || std::abs(total - 1.0) > kInputTol)
        throw Error(Errc::NonNormalized, "weights sum to " + std::to_string(total));
    OffspringDistribution d;
    d.w_.assign(top + 1, 0.0);
    std::vector<bool> seen(top + 1, false);
    for (auto [c, p] : weights) {
        if (seen[c]) throw Error(Errc::ParseError, "duplicate child count " + std::to_string(c));
        seen[c] = true;
        d.w_[c] = p;
    }
    d.finalize();
    return d;
}

OffspringDistribution from_weights(std::vector<double> w) {
    OffspringDistribution d;
    for (double& x : w)
        if (x < 0.0) x = 0.0;
    d.w_ = std::move(w);
    d.finalize();
    return d;
}

OffspringDistribution parse_offspring(const std::string& text) {
    std::vector<std::pair<int, double>> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto colon = item.find(':');
        if (colon == std::string::npos) throw Error(Errc::ParseError, "expected count:prob, got '" + item + "'");
        try {
            std::size_t used = 0;
            int c = std::stoi(item.substr(0, colon), &used);
            std::string ps = item.substr(colon + 1);
            double p;
            auto slash = ps.find('/');
            if (slash != std::string::npos)
                p = std::stod(ps.substr(0, slash)) / std::stod(ps.substr(slash + 1));
            else
                p = std::stod(ps);
            out.emplace_back(c, p);
        } catch (const std::logic_error&) {
            throw Error(Errc::ParseError, "bad pair '" + item + "'");
        }
    }
    return mk_offspring(out);
}

double pgf_eval(const OffspringDistribution& d, double s) {
    if (!(s >= 0.0 && s <= 1.0)) throw Error(Errc::OutOfDomain, "pgf argument " + std::to_string(s));
    const auto& w = d.weights();
    double r = 0.0;
    for (std::size_t i = w.size(); i-- > 0;) r = r * s + w[i];
    return r;
}

double pgf_derivative(const OffspringDistribution& d, double s) {
    if (!(s >= 0.0 && s <= 1.0)) throw Error(Errc::OutOfDomain, "pgf argument " + std::to_string(s));
    const auto& w = d.weights();
    double r = 0.0;
    for (std::size_t i = w.size(); i-- > 1;) r = r * s + static_cast<double>(i) * w[i];
    return r;
}

double extinction_prob(const OffspringDistribution& d, double tol) {
    if (d.mean() <= 1.0 && d.weight(1) < 1.0) return 1.0;
    double q = 0.0;
    for (int it = 0; it < 1000000; ++it) {
        double nq = pgf_eval(d, q);
        if (std::abs(nq - q) <= tol * 1e-3 || nq <= q) {
            q = std::max(q, nq);
            break;
        }
        q = nq;
    }
    // Iterating from 0 converges only linearly near a critical point; close
    // the remaining gap with Newton steps on f(s) - s, which stay below the
    // smallest fixed point because f - s is convex and decreasing there.
    for (int it = 0; it < 100 && std::abs(pgf_eval(d, q) - q) > tol; ++it) {
        double g = pgf_eval(d, q) - q;
        double dg = pgf_derivative(d, q) - 1.0;
        if (dg >= 0.0) break;
        double nq = std::min(1.0, q - g / dg);
        if (nq <= q) break;
        q = nq;
    }
    return q;
}

OffspringDistribution backbone_offspring(const OffspringDistribution& d) {
    if (!(d.mean() > 1.0)) throw Error(Errc::NotSupercritical, "mean " + std::to_string(d.mean()));
    double q = extinction_prob(d);
    int top = d.max_support();
    std::vector<double> w(top + 1, 0.0);
    for (int k = 1; k <= top; ++k) {
        double s = 0.0;
        for (int j = k; j <= top; ++j) s += d.weight(j) * binom(j, k) * std::pow(q, j - k);
        w[k] = std::pow(1.0 - q, k - 1) * s;
    }
    return from_weights(std::move(w));
}

OffspringDistribution subcritical_offspring(const OffspringDistribution& d) {
    if (!(d.mean() > 1.0)) throw Error(Errc::NotSupercritical, "mean " + std::to_string(d.mean()));
    double q = extinction_prob(d);
    if (q <= 0.0) throw Error(Errc::DegenerateQ, "q = 0, no finite bushes");
    int top = d.max_support();
    std::vector<double> w(top + 1, 0.0);
    for (int k = 0; k <= top; ++k) w[k] = d.weight(k) * std::pow(q, k - 1);
    return from_weights(std::move(w));
}

OffspringDistribution truncated_offspring(const OffspringDistribution& d, int c_max) {
    if (c_max < 1) throw Error(Errc::OutOfDomain, "c_max must be >= 1");
    int top = std::min(c_max, d.max_support());
    std::vector<double> w(top + 1, 0.0);
    double tail = 0.0;
    for (int i = c_max + 1; i <= d.max_support(); ++i) tail += d.weight(i);
    w[0] = d.weight(0) + tail;
    for (int i = 1; i <= top; ++i) w[i] = d.weight(i);
    return from_weights(std::move(w));
}

DerivedLaws derive_laws(const OffspringDistribution& d) {
    DerivedLaws L;
    L.mu = d;
    L.q = extinction_prob(d);
    L.backbone = backbone_offspring(d);
    if (L.q > 0.0) L.bush = subcritical_offspring(d);
    int top = d.max_support();
    L.extra.resize(top + 1);
    for (int b = 1; b <= top; ++b) {
        std::vector<double> w(top - b + 1, 0.0);
        double total = 0.0;
        for (int j = 0; b + j <= top; ++j) {
            w[j] = d.weight(b + j) * binom(b + j, b) * std::pow(L.q, j);
            total += w[j];
        }
        if (total > 0.0) L.extra[b] = from_weights(std::move(w));
    }
    return L;
}

}  // namespace causal
