#pragma once

#include <string>
#include <utility>
#include <vector>

#include "causal/rng.hpp"

namespace causal {

// Finite-support offspring law. weights()[i] is the probability of i children.
class OffspringDistribution {
public:
    OffspringDistribution() = default;

    const std::vector<double>& weights() const { return w_; }
    double weight(int i) const { return (i >= 0 && i < static_cast<int>(w_.size())) ? w_[i] : 0.0; }
    double mean() const { return mean_; }
    int max_support() const { return static_cast<int>(w_.size()) - 1; }

    int sample(Rng& rng) const;

    // "0:0.25,2:0.75"; zero weights are omitted
    std::string to_string() const;

    friend OffspringDistribution mk_offspring(const std::vector<std::pair<int, double>>&);
    friend OffspringDistribution from_weights(std::vector<double>);

private:
    void finalize();

    std::vector<double> w_;
    std::vector<double> cdf_;
    double mean_ = 0.0;
};

OffspringDistribution mk_offspring(const std::vector<std::pair<int, double>>& weights);
OffspringDistribution parse_offspring(const std::string& text);
// Builds from a dense weight vector already known to be a law (renormalizes).
OffspringDistribution from_weights(std::vector<double> w);

double pgf_eval(const OffspringDistribution& d, double s);
double pgf_derivative(const OffspringDistribution& d, double s);
double extinction_prob(const OffspringDistribution& d, double tol = 1e-12);

OffspringDistribution backbone_offspring(const OffspringDistribution& d);
OffspringDistribution subcritical_offspring(const OffspringDistribution& d);
OffspringDistribution truncated_offspring(const OffspringDistribution& d, int c_max);

// All laws needed to sample a tree conditioned to survive.
struct DerivedLaws {
    OffspringDistribution mu;
    double q = 0.0;
    OffspringDistribution backbone;   // bold mu
    OffspringDistribution bush;       // mu tilde; empty when q == 0
    // extra[b]: law of the number of non-backbone children of a backbone
    // vertex with b backbone children
    std::vector<OffspringDistribution> extra;
};

DerivedLaws derive_laws(const OffspringDistribution& d);

}  // namespace causal
