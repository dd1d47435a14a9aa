#pragma once

#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "collapse/params.hpp"

namespace collapse {

using BigInt = boost::multiprecision::cpp_int;

// Closed-form offspring (new-colony) distributions for the auxiliary
// Galton-Watson processes of the dispersion models.
//
// Z_B / Z_G: number of colonies founded after one collapse under a pure
// binomial / geometric effect when every survivor founds its own colony.
// Both are zero-inflated geometric laws.

double pmf_Z_B(int k, const ModelParams& params);
double pmf_Z_G(int k, const ModelParams& params);

// Offspring PGF of the unrestricted dispersion model and its closed-form mean.
double pgf_C2(double s, const ModelParams& params);
double pgf_C2_derivative(double s, const ModelParams& params);
double mean_C2(const ModelParams& params);

// Number of surjections from a j-element set onto a k-element set,
// by inclusion-exclusion, exact.
BigInt surjection_count(int j, int k);

// Offspring pmf of the m-regular-graph model: survivors disperse into m
// slots and merge per slot, so the support is [0, m].
//
// The production route sums the nonnegative pre-resummation series
// sum_j x^j T(j,k) term by term (no cancellation). The alternating route
// evaluates the closed inclusion-exclusion forms and exists as an
// independent cross-check.
std::vector<double> c3_offspring_pmf(const ModelParams& params);
std::vector<double> c3_offspring_pmf_alternating(const ModelParams& params);
double pmf_offspring_C3(int k, const ModelParams& params);

// Degree-m polynomial PGF of the graph model. The alternating-sum evaluator
// uses the double-sum displays verbatim; it must agree with the
// coefficient route.
double pgf_C3(double s, const ModelParams& params);
double pgf_C3_derivative(double s, const ModelParams& params);
double pgf_C3_alternating_form(double s, const ModelParams& params);
double mean_C3(const ModelParams& params);

// Mean offspring of whichever dispersion model the params select
// (C3 when m is present, C2 otherwise).
double mean_offspring(Model model, const ModelParams& params);

// PGF of the colony offspring law for C2 or C3, with analytic derivative.
class PgfEvaluator {
public:
    PgfEvaluator(Model model, const ModelParams& params);

    double operator()(double s) const;
    double derivative(double s) const;
    double mean() const;

    Model model() const { return model_; }
    const ModelParams& params() const { return params_; }

private:
    Model model_;
    ModelParams params_;
    std::vector<double> coeffs_;  // C3 only
};

}  // namespace collapse
