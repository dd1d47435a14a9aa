#include "collapse/analytic.hpp"

#include <cmath>
#include <stdexcept>

namespace collapse {

namespace {

double bisect_fixed_point(const PgfEvaluator& pgf, double lo, double hi, double tol) {
    // g(s) = pgf(s) - s changes sign on [lo, hi]
    double glo = pgf(lo) - lo;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double gmid = pgf(mid) - mid;
        if ((glo > 0.0) == (gmid > 0.0)) {
            lo = mid;
            glo = gmid;
        } else {
            hi = mid;
        }
        if (hi - lo < tol) break;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

ExtinctionEstimate extinction_C1(const ModelParams& params) {
    params.validate();
    ExtinctionEstimate est;
    est.method = EstimateMethod::ClosedForm;
    if (params.r < 1.0) {
        est.probability = 1.0;
    } else {
        est.probability = std::min(params.q() / (params.lambda * params.p), 1.0);
    }
    return est;
}

bool survives_C2(const ModelParams& params) { return mean_C2(params) > 1.0; }

bool survives_C3(const ModelParams& params) { return mean_C3(params) > 1.0; }

double smallest_fixed_point(const PgfEvaluator& pgf, double tol) {
    if (std::abs(pgf(1.0) - 1.0) > 1e-10)
        throw std::runtime_error("malformed PGF: value at 1 is not 1");
    // Criticality is decided from the exact closed-form mean, not the
    // iteration, to avoid boundary misclassification.
    const double mean = pgf.mean();
    if (mean <= 1.0) return 1.0;

    const double iter_tol = std::min(tol, 1e-14);
    double s = 0.0;
    bool converged = false;
    for (long long n = 0; n < 1000000; ++n) {
        const double next = pgf(s);
        if (std::abs(next - s) < iter_tol) {
            s = next;
            converged = true;
            break;
        }
        s = next;
    }
    if (!converged) {
        // near-critical stall: bisect if pgf(s) - s still changes sign on
        // [0, 1 - 1e-9]; when the root is within roundoff of that endpoint
        // no bracket survives in floating point, and the Newton polish
        // below finishes from the stalled iterate instead.
        const double hi = 1.0 - 1e-9;
        if (pgf(hi) - hi < 0.0) s = bisect_fixed_point(pgf, 0.0, hi, tol);
    }
    // Newton polish on g(s) = pgf(s) - s; from any point between the
    // previous fixed point and the root, g > 0 and g' < 0, so the
    // iteration increases monotonically to the root
    for (int it = 0; it < 100; ++it) {
        const double g = pgf(s) - s;
        const double gp = pgf.derivative(s) - 1.0;
        if (gp == 0.0) break;
        const double next = s - g / gp;
        if (next < 0.0 || next > 1.0) break;
        if (std::abs(next - s) < 1e-16) {
            s = next;
            break;
        }
        s = next;
    }
    return std::min(std::max(s, 0.0), 1.0);
}

ExtinctionEstimate extinction_C2(const ModelParams& params) {
    PgfEvaluator pgf(Model::C2, params);
    ExtinctionEstimate est;
    est.method = EstimateMethod::FixedPoint;
    est.probability = smallest_fixed_point(pgf);
    return est;
}

ExtinctionEstimate extinction_C3(const ModelParams& params) {
    PgfEvaluator pgf(Model::C3, params);
    ExtinctionEstimate est;
    est.method = EstimateMethod::FixedPoint;
    est.probability = smallest_fixed_point(pgf);
    return est;
}

ExtinctionEstimate extinction(Model model, const ModelParams& params) {
    switch (model) {
        case Model::C1: return extinction_C1(params);
        case Model::C2: return extinction_C2(params);
        case Model::C3: return extinction_C3(params);
    }
    throw std::domain_error("unknown model");
}

CriticalRate critical_lambda(Model model, double p, double r, std::optional<int> m) {
    // Only the closed-form mean is evaluated here, so m is not subject to the
    // combinatorial cap that applies to the full pmf/pgf machinery.
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("p must lie in (0,1)");
    if (!(r >= 0.0 && r <= 1.0)) throw std::domain_error("r must lie in [0,1]");
    if (m && *m < 1) throw std::domain_error("m must be >= 1");
    if (model == Model::C1) {
        if (r < 1.0) return CriticalRate::infinite(Model::C1, RateSolver::ClosedForm);
        return CriticalRate::finite((1.0 - p) / p, Model::C1, RateSolver::ClosedForm);
    }
    if (model == Model::C3 && !m)
        throw std::domain_error("critical_lambda for c3 requires m");
    if (model == Model::C3 && *m == 1)
        return CriticalRate::infinite(Model::C3, RateSolver::ClosedForm);

    // closed-form means, evaluable at lambda = 0 where they equal p
    const auto mean_at = [&](double lambda) {
        if (model == Model::C3) {
            const double mm = *m;
            return mm * p * (lambda + 1.0) * (lambda + 1.0) * r /
                       ((mm + lambda) * (lambda * p + 1.0)) +
                   mm * p * (lambda + 1.0) * (1.0 - r) / (mm + lambda * p);
        }
        return p * (lambda + 1.0) * (lambda + 1.0) * r / (lambda * p + 1.0) +
               p * (lambda + 1.0) * (1.0 - r);
    };
    // f(0) = p < 1 and f is strictly increasing; double until the mean
    // exceeds 1, then bisect.
    double hi = 1.0;
    int doublings = 0;
    while (mean_at(hi) <= 1.0) {
        hi *= 2.0;
        if (++doublings > 60)
            throw std::runtime_error("critical_lambda: bracketing failed (invalid params)");
    }
    double lo = hi > 1.0 ? hi / 2.0 : 0.0;
    if (mean_at(lo) > 1.0) lo = 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        (mean_at(mid) > 1.0 ? hi : lo) = mid;
    }
    return CriticalRate::finite(0.5 * (lo + hi), model, RateSolver::Bisection);
}

CriticalRate critical_lambda_closed_form_r1(Model model, double p, std::optional<int> m) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("p must lie in (0,1)");
    switch (model) {
        case Model::C1:
            return CriticalRate::finite((1.0 - p) / p, Model::C1, RateSolver::ClosedForm);
        case Model::C2:
            return CriticalRate::finite(std::sqrt(0.25 + (1.0 - p) / p) - 0.5, Model::C2,
                                        RateSolver::ClosedForm);
        case Model::C3: {
            if (!m) throw std::domain_error("c3 closed form requires m");
            const int mm = *m;
            if (mm == 1) return CriticalRate::infinite(Model::C3, RateSolver::ClosedForm);
            const double a = 1.0 - mm * p;
            const double value =
                (a + std::sqrt(a * a + 4.0 * mm * (mm - 1) * p * (1.0 - p))) /
                (2.0 * p * (mm - 1));
            return CriticalRate::finite(value, Model::C3, RateSolver::ClosedForm);
        }
    }
    throw std::domain_error("unknown model");
}

double drift_C1(int state, const ModelParams& params) {
    params.validate();
    if (state < 1) throw std::domain_error("drift is defined for states >= 1");
    const double i = state, lam = params.lambda, p = params.p, q = params.q(), r = params.r;
    return (lam - i * (1.0 - r) * q) / (1.0 + lam) -
           r * q * (1.0 - std::pow(q, i)) / (p * (1.0 + lam));
}

}  // namespace collapse
