#include "collapse/effects.hpp"

#include <cmath>
#include <stdexcept>

namespace collapse {

namespace {

void check_effect_args(int i, int j, double p) {
    if (i < 1) throw std::domain_error("colony size must be >= 1");
    if (j < 0 || j > i) throw std::domain_error("survivor count must lie in [0, colony size]");
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("p must lie in (0,1)");
}

// Direct products stay away from under/overflow up to moderate sizes;
// past that the binomial coefficient and powers go through log space.
constexpr int kDirectProductLimit = 50;

}  // namespace

double binomial_collapse_pmf(int colony_size, int survivors, double p) {
    check_effect_args(colony_size, survivors, p);
    const int i = colony_size, j = survivors;
    const double q = 1.0 - p;
    if (i <= kDirectProductLimit) {
        double binom = 1.0;
        for (int t = 0; t < j; ++t) binom *= static_cast<double>(i - t) / (t + 1);
        return binom * std::pow(p, j) * std::pow(q, i - j);
    }
    const double log_binom = std::lgamma(i + 1.0) - std::lgamma(j + 1.0) - std::lgamma(i - j + 1.0);
    return std::exp(log_binom + j * std::log(p) + (i - j) * std::log(q));
}

double geometric_collapse_pmf(int colony_size, int survivors, double p) {
    check_effect_args(colony_size, survivors, p);
    const int i = colony_size, j = survivors;
    const double q = 1.0 - p;
    if (j == 0) {
        return i <= kDirectProductLimit ? std::pow(q, i) : std::exp(i * std::log(q));
    }
    const int dead = i - j;
    return dead <= kDirectProductLimit ? p * std::pow(q, dead)
                                       : p * std::exp(dead * std::log(q));
}

double mixed_collapse_pmf(int colony_size, int survivors, const ModelParams& params) {
    params.validate();
    const double g = geometric_collapse_pmf(colony_size, survivors, params.p);
    const double b = binomial_collapse_pmf(colony_size, survivors, params.p);
    return params.r * g + (1.0 - params.r) * b;
}

}  // namespace collapse
