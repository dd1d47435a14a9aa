#include "collapse/validate.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "collapse/analytic.hpp"
#include "collapse/effects.hpp"
#include "collapse/offspring.hpp"
#include "collapse/simulate.hpp"
#include "collapse/sweep.hpp"

namespace collapse {

namespace {

// Worked golden values for C2(2/5, r, 1)
double example_c2_rho(double r) {
    if (r <= 7.0 / 12.0) return 1.0;
    return (12.0 * r + 49.0 - std::sqrt(144.0 * r * r + 1176.0 * r + 49.0)) / 28.0;
}

// Worked golden values for C3(2/3, r, 1, 3)
double example_c3_rho(double r) {
    return (-440.0 - 132.0 * r + std::sqrt(22.0 * (14000.0 + 9375.0 * r + 792.0 * r * r))) /
           (2.0 * (80.0 + 63.0 * r));
}

struct Suite {
    std::vector<CheckResult> results;
    double tol_scale;

    void check(const std::string& name, double err, double tol) {
        std::ostringstream ss;
        ss << "max_err=" << err << " tol=" << tol * tol_scale;
        results.push_back({name, err <= tol * tol_scale, ss.str()});
    }
    void check_bool(const std::string& name, bool ok, const std::string& detail) {
        results.push_back({name, ok, detail});
    }
};

}  // namespace

std::vector<CheckResult> run_validation(double tol_scale) {
    Suite s{{}, tol_scale};

    {
        double err = 0.0;
        for (int i = 0; i <= 10; ++i) {
            const double r = i / 10.0;
            const ModelParams params{0.4, r, 1.0, {}};
            err = std::max(err, std::abs(extinction_C2(params).probability - example_c2_rho(r)));
        }
        s.check("c2-mixture-golden", err, 1e-10);
    }
    {
        double err = 0.0;
        for (int i = 0; i <= 4; ++i) {
            const double r = i / 4.0;
            const ModelParams params{2.0 / 3.0, r, 1.0, 3};
            err = std::max(err, std::abs(extinction_C3(params).probability - example_c3_rho(r)));
        }
        s.check("c3-three-site-golden", err, 1e-10);
    }
    {
        double err = 0.0;
        for (double p = 0.1; p < 0.95; p += 0.1) {
            for (double lam : {0.25, 1.0, 4.0}) {
                const double q = 1.0 - p;
                const ModelParams p0{p, 0.0, lam, {}};
                const ModelParams p1{p, 1.0, lam, {}};
                err = std::max(err, std::abs(extinction_C2(p0).probability -
                                             std::min(q / (lam * p), 1.0)));
                err = std::max(err, std::abs(extinction_C2(p1).probability -
                                             std::min(q * (lam + 1.0) / (lam * (1.0 + lam * p)),
                                                      1.0)));
            }
        }
        s.check("rho2-endpoint-closed-forms", err, 1e-10);
    }
    {
        bool ok = true;
        for (double p = 0.15; p < 0.95; p += 0.2) {
            for (double lam : {0.5, 1.0, 2.0}) {
                for (double r : {0.0, 0.5, 1.0}) {
                    const ModelParams c2{p, r, lam, {}};
                    ok = ok && (survives_C2(c2) ==
                                (extinction_C2(c2).probability < 1.0 - 1e-9));
                    for (int m : {1, 3, 6}) {
                        const ModelParams c3{p, r, lam, m};
                        ok = ok && (survives_C3(c3) ==
                                    (extinction_C3(c3).probability < 1.0 - 1e-9));
                    }
                }
            }
        }
        s.check_bool("survival-iff-fixed-point", ok, "grid consistency");
    }
    {
        double err = 0.0;
        for (double p = 0.1; p < 0.95; p += 0.1) {
            err = std::max(err, std::abs(critical_lambda(Model::C1, p, 1.0).value -
                                         critical_lambda_closed_form_r1(Model::C1, p).value));
            err = std::max(err, std::abs(critical_lambda(Model::C2, p, 1.0).value -
                                         critical_lambda_closed_form_r1(Model::C2, p).value));
        }
        s.check("critical-closed-form-c1-c2", err, 1e-9);
    }
    {
        double err = 0.0;
        for (double p = 0.1; p < 0.95; p += 0.2) {
            for (int m = 2; m <= 8; ++m) {
                err = std::max(err,
                               std::abs(critical_lambda(Model::C3, p, 1.0, m).value -
                                        critical_lambda_closed_form_r1(Model::C3, p, m).value));
            }
        }
        s.check("critical-closed-form-c3", err, 1e-9);
    }
    {
        bool ok = true;
        for (double p : {0.2, 0.5, 0.8}) {
            for (double r : {0.0, 0.5, 1.0}) {
                const double l2 = critical_lambda(Model::C2, p, r).value;
                double prev = std::numeric_limits<double>::infinity();
                for (int m = 2; m <= 10; ++m) {
                    const double l3 = critical_lambda(Model::C3, p, r, m).value;
                    ok = ok && l2 > 0.0 && l2 < l3 && l3 < prev;
                    prev = l3;
                }
                ok = ok && critical_lambda(Model::C3, p, r, 1).is_infinite;
                ok = ok && (critical_lambda(Model::C3, p, r, 1000).value - l2 < 1e-2);
            }
        }
        s.check_bool("critical-curve-ordering-and-limit", ok, "lambda2 < lambda3(m+1) < lambda3(m), m=1 infinite, m=1000 near lambda2");
    }
    {
        bool ok = true;
        const Axis p_axis{"p", 0.01, 0.99, 99};
        for (int m : {3, 5, 8}) {
            const double boundary = 1.0 - 1.0 / (m - 1);
            const auto ps = p_axis.values();
            double switch_p = 1.0;
            for (double p : ps) {
                const double l3 = critical_lambda(Model::C3, p, 1.0, m).value;
                const double l1 = critical_lambda(Model::C1, p, 1.0).value;
                if (l3 > l1) {
                    switch_p = p;
                    break;
                }
            }
            ok = ok && std::abs(switch_p - boundary) <= 0.011;
        }
        s.check_bool("strategy-boundary", ok, "sign change near p = 1 - 1/(m-1)");
    }
    {
        double err = 0.0;
        for (double p : {0.2, 0.5, 0.8}) {
            for (double lam : {0.5, 1.0, 3.0}) {
                for (double r : {0.0, 0.5, 1.0}) {
                    const ModelParams c2{p, r, lam, {}};
                    err = std::max(err, std::abs(pgf_C2(1.0, c2) - 1.0));
                    for (int m : {2, 5}) {
                        const ModelParams c3{p, r, lam, m};
                        err = std::max(err, std::abs(pgf_C3(1.0, c3) - 1.0));
                    }
                }
            }
        }
        s.check("pgf-normalization", err, 1e-12);
    }
    {
        double err = 0.0;
        for (double p : {0.3, 0.7}) {
            for (double lam : {0.5, 2.0}) {
                for (double r : {0.0, 0.5, 1.0}) {
                    for (int m = 1; m <= 8; ++m) {
                        const ModelParams c3{p, r, lam, m};
                        const auto alt = c3_offspring_pmf_alternating(c3);
                        const auto series = c3_offspring_pmf(c3);
                        for (double sv : {0.0, 0.3, 0.7, 1.0}) {
                            err = std::max(err, std::abs(pgf_C3(sv, c3) -
                                                         pgf_C3_alternating_form(sv, c3)));
                        }
                        for (int k = 0; k <= m; ++k)
                            err = std::max(err, std::abs(alt[k] - series[k]));
                    }
                }
            }
        }
        s.check("pgf-route-agreement", err, 1e-10);
    }
    {
        double err = 0.0;
        for (double p : {0.3, 0.6}) {
            for (double lam : {0.5, 2.0}) {
                for (double r : {0.0, 0.5, 1.0}) {
                    const ModelParams params{p, r, lam, {}};
                    for (int i = 1; i <= 60; ++i) {
                        double brute = lam / (1.0 + lam);
                        for (int j = 0; j <= i; ++j)
                            brute += (j - i) * mixed_collapse_pmf(i, j, params) / (1.0 + lam);
                        err = std::max(err, std::abs(brute - drift_C1(i, params)));
                    }
                }
            }
        }
        s.check("drift-brute-force", err, 1e-10);
    }
    {
        SimConfig cfg;
        cfg.replicates = 20000;
        cfg.population_cap = 2000;
        cfg.base_seed = 20240817;
        const ModelParams c2{0.4, 1.0, 1.0, {}};
        const auto est = estimate_extinction(Model::C2, c2, cfg);
        const double se = std::sqrt((6.0 / 7.0) * (1.0 / 7.0) / cfg.replicates);
        s.check("mc-c2-golden", std::abs(est.probability - 6.0 / 7.0), 4.0 * se);
        const ModelParams c3{2.0 / 3.0, 0.0, 1.0, 3};
        const auto est3 = estimate_extinction(Model::C3, c3, cfg);
        const double rho3 = example_c3_rho(0.0);
        const double se3 = std::sqrt(rho3 * (1.0 - rho3) / cfg.replicates);
        s.check("mc-c3-golden", std::abs(est3.probability - rho3), 4.0 * se3);
    }
    {
        SimConfig cfg;
        cfg.replicates = 5000;
        cfg.population_cap = 2000;
        cfg.base_seed = 7;
        const ModelParams c2{0.4, 1.0, 1.0, {}};
        const auto a = estimate_extinction(Model::C2, c2, cfg, 1);
        const auto b = estimate_extinction(Model::C2, c2, cfg, 4);
        s.check_bool("determinism-across-threads", a.probability == b.probability &&
                                                       a.censored_fraction == b.censored_fraction,
                     "thread counts 1 vs 4 agree bit-for-bit");
    }

    return s.results;
}

}  // namespace collapse
