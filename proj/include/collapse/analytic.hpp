#pragma once

#include <optional>

#include "collapse/offspring.hpp"
#include "collapse/params.hpp"

namespace collapse {

enum class EstimateMethod { ClosedForm, FixedPoint, MonteCarlo };

inline const char* method_name(EstimateMethod m) {
    switch (m) {
        case EstimateMethod::ClosedForm: return "closed_form";
        case EstimateMethod::FixedPoint: return "fixed_point";
        case EstimateMethod::MonteCarlo: return "monte_carlo";
    }
    return "?";
}

struct ExtinctionEstimate {
    double probability = 1.0;
    EstimateMethod method = EstimateMethod::ClosedForm;
    long long iterations = 0;      // fixed-point iterations or MC replicates
    double ci_half_width = 0.0;    // MC only
    double censored_fraction = 0.0;  // MC only
};

enum class RateSolver { ClosedForm, Bisection };

// Critical birth rate; infinite rates are an explicit marker, never a
// float sentinel, and serialize as the literal string "inf".
struct CriticalRate {
    double value = 0.0;
    bool is_infinite = false;
    Model model = Model::C1;
    RateSolver solver = RateSolver::ClosedForm;

    static CriticalRate infinite(Model model, RateSolver solver) {
        return {0.0, true, model, solver};
    }
    static CriticalRate finite(double value, Model model, RateSolver solver) {
        return {value, false, model, solver};
    }
};

// Extinction probability of the no-dispersion process: certain for r < 1,
// min{(1-p)/(lambda p), 1} under a pure geometric effect.
ExtinctionEstimate extinction_C1(const ModelParams& params);

// Supercriticality of the dispersion models, decided from the exact
// closed-form offspring means.
bool survives_C2(const ModelParams& params);
bool survives_C3(const ModelParams& params);

// Least fixed point of an offspring PGF on [0,1]: functional iteration from
// 0, bisection when the iteration stalls near criticality, then a Newton
// polish. Returns 1 whenever the mean is <= 1.
double smallest_fixed_point(const PgfEvaluator& pgf, double tol = 1e-12);

ExtinctionEstimate extinction_C2(const ModelParams& params);
ExtinctionEstimate extinction_C3(const ModelParams& params);
ExtinctionEstimate extinction(Model model, const ModelParams& params);

// Critical birth-rate curves lambda^i(p, r). For C2/C3 the root of the
// mean-offspring equation f(lambda) = 1, bracketed by doubling and solved
// by bisection; C1 and the m=1 graph give the infinite marker except at
// the closed-form points.
CriticalRate critical_lambda(Model model, double p, double r, std::optional<int> m = {});

// Closed forms at r = 1; used as the oracle for the bisection solver.
CriticalRate critical_lambda_closed_form_r1(Model model, double p, std::optional<int> m = {});

// One-step expected change of f(i) = i + 1 for the embedded chain of C1
// (the Foster drift diagnostic).
double drift_C1(int state, const ModelParams& params);

}  // namespace collapse
