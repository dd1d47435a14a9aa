// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are fixed here, not configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "collapse/analytic.hpp"
#include "collapse/effects.hpp"
#include "collapse/offspring.hpp"
#include "collapse/simulate.hpp"
#include "collapse/sweep.hpp"

using namespace collapse;

namespace {

int g_failures = 0;

void report(const std::string& name, bool passed, const std::string& detail) {
    std::printf("%s %s  (%s)\n", passed ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    if (!passed) ++g_failures;
}

double example_c2_rho(double r) {
    if (r <= 7.0 / 12.0) return 1.0;
    return (12.0 * r + 49.0 - std::sqrt(144.0 * r * r + 1176.0 * r + 49.0)) / 28.0;
}

double example_c3_rho(double r) {
    return (-440.0 - 132.0 * r + std::sqrt(22.0 * (14000.0 + 9375.0 * r + 792.0 * r * r))) /
           (2.0 * (80.0 + 63.0 * r));
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double s() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

const std::vector<double> kPGrid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
const std::vector<double> kLambdaGrid = {0.25, 1.0, 4.0};
const std::vector<double> kRGrid = {0.0, 0.5, 1.0};

int sim_threads() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(std::min(hw, 8u));
}

void criterion_1() {
    Timer t;
    double err = 0.0;
    for (int i = 0; i <= 10; ++i) {
        const double r = i / 10.0;
        err = std::max(err, std::abs(extinction_C2(ModelParams{0.4, r, 1.0, {}}).probability -
                                     example_c2_rho(r)));
    }
    std::ostringstream d;
    d << "max_err=" << err << " time=" << t.s() << "s";
    report("criterion-1 c2-mixture-golden", err < 1e-10 && t.s() < 1.0, d.str());
}

void criterion_2() {
    Timer t;
    double err = 0.0;
    for (int i = 0; i <= 4; ++i) {
        const double r = i / 4.0;
        err = std::max(err,
                       std::abs(extinction_C3(ModelParams{2.0 / 3.0, r, 1.0, 3}).probability -
                                example_c3_rho(r)));
    }
    std::ostringstream d;
    d << "max_err=" << err << " time=" << t.s() << "s";
    report("criterion-2 c3-three-site-golden", err < 1e-10 && t.s() < 1.0, d.str());
}

void criterion_3() {
    double err = 0.0;
    for (double p : kPGrid) {
        for (double lam : kLambdaGrid) {
            const double q = 1.0 - p;
            err = std::max(err, std::abs(extinction_C2(ModelParams{p, 0.0, lam, {}}).probability -
                                         std::min(q / (lam * p), 1.0)));
            err = std::max(err,
                           std::abs(extinction_C2(ModelParams{p, 1.0, lam, {}}).probability -
                                    std::min(q * (lam + 1.0) / (lam * (1.0 + lam * p)), 1.0)));
        }
    }
    std::ostringstream d;
    d << "max_err=" << err;
    report("criterion-3 endpoint-closed-forms", err < 1e-10, d.str());
}

void criterion_4() {
    bool ok = true;
    for (double p : kPGrid) {
        for (double lam : kLambdaGrid) {
            for (double r : kRGrid) {
                const ModelParams c2{p, r, lam, {}};
                ok = ok && (survives_C2(c2) == (extinction_C2(c2).probability < 1.0 - 1e-9));
                for (int m = 1; m <= 8; ++m) {
                    const ModelParams c3{p, r, lam, m};
                    ok = ok &&
                         (survives_C3(c3) == (extinction_C3(c3).probability < 1.0 - 1e-9));
                }
            }
        }
    }
    report("criterion-4 survival-iff-fixed-point", ok, "full (p,lambda,r,m) grid");
}

void criterion_5() {
    double err = 0.0;
    for (double p : kPGrid) {
        err = std::max(err, std::abs(critical_lambda(Model::C1, p, 1.0).value -
                                     critical_lambda_closed_form_r1(Model::C1, p).value));
        err = std::max(err, std::abs(critical_lambda(Model::C2, p, 1.0).value -
                                     critical_lambda_closed_form_r1(Model::C2, p).value));
        for (int m = 2; m <= 8; ++m)
            err = std::max(err, std::abs(critical_lambda(Model::C3, p, 1.0, m).value -
                                         critical_lambda_closed_form_r1(Model::C3, p, m).value));
    }
    std::ostringstream d;
    d << "max_err=" << err;
    report("criterion-5 critical-closed-forms-r1", err < 1e-9, d.str());
}

void criterion_6() {
    bool ok = true;
    double max_gap = 0.0;
    for (double p : kPGrid) {
        for (double r : kRGrid) {
            const double l2 = critical_lambda(Model::C2, p, r).value;
            ok = ok && l2 > 0.0;
            double prev = std::numeric_limits<double>::infinity();
            for (int m = 2; m <= 10; ++m) {
                const double l3 = critical_lambda(Model::C3, p, r, m).value;
                ok = ok && l2 < l3 && l3 < prev && std::isfinite(l3);
                prev = l3;
            }
            ok = ok && critical_lambda(Model::C3, p, r, 1).is_infinite;
            const double gap = critical_lambda(Model::C3, p, r, 1000).value - l2;
            ok = ok && gap > 0.0 && gap < 1e-2;
            max_gap = std::max(max_gap, gap);
        }
    }
    std::ostringstream d;
    d << "max gap at m=1000: " << max_gap;
    report("criterion-6 critical-curve-properties", ok, d.str());
}

void criterion_7() {
    bool ok = true;
    const int n = 999;
    const double step = 1.0 / (n + 1);
    for (int m = 3; m <= 10; ++m) {
        const double boundary = 1.0 - 1.0 / (m - 1);
        double switch_p = 1.0;
        double prev_diff = -1.0;
        for (int i = 1; i <= n; ++i) {
            const double p = i * step;
            const double diff = critical_lambda(Model::C3, p, 1.0, m).value -
                                critical_lambda(Model::C1, p, 1.0).value;
            if (prev_diff < 0.0 && diff > 0.0) {
                switch_p = p;
                break;
            }
            prev_diff = diff;
        }
        ok = ok && std::abs(switch_p - boundary) <= step + 1e-12;
    }
    report("criterion-7 strategy-boundary", ok, "sign change within one step of 1-1/(m-1)");
}

void criterion_8() {
    Timer t;
    bool ok = true;
    std::ostringstream d;
    const int threads = sim_threads();

    auto one_case = [&](Model model, const ModelParams& params, double rho,
                        long long pop_cap, const char* tag) {
        SimConfig cfg;
        cfg.replicates = 100000;
        cfg.population_cap = pop_cap;
        cfg.base_seed = 424242;
        const ExtinctionEstimate est = estimate_extinction(model, params, cfg, threads);
        const double se = std::sqrt(rho * (1.0 - rho) / cfg.replicates);
        const bool pass = std::abs(est.probability - rho) < 4.0 * se &&
                          est.censored_fraction < 0.02;
        ok = ok && pass;
        d << tag << "=" << est.probability << " ";
    };

    one_case(Model::C2, ModelParams{0.4, 1.0, 1.0, {}}, 6.0 / 7.0, 2000, "c2");
    one_case(Model::C3, ModelParams{2.0 / 3.0, 0.0, 1.0, 3}, example_c3_rho(0.0), 1000, "c3");
    one_case(Model::C1, ModelParams{0.5, 1.0, 3.0, {}}, 1.0 / 3.0, 5000, "c1");

    d << "time=" << t.s() << "s";
    report("criterion-8 monte-carlo-vs-analytic", ok && t.s() < 60.0, d.str());
}

void criterion_9() {
    const long long n = 100000;
    bool ok = true;
    double worst = 0.0;

    struct Point {
        Model model;
        ModelParams params;
    };
    const std::vector<Point> points = {
        {Model::C2, ModelParams{0.5, 0.0, 1.0, {}}},
        {Model::C2, ModelParams{0.4, 0.5, 2.0, {}}},
        {Model::C2, ModelParams{0.6, 1.0, 0.5, {}}},
        {Model::C3, ModelParams{2.0 / 3.0, 0.0, 1.0, 3}},
        {Model::C3, ModelParams{0.5, 0.5, 2.0, 5}},
        {Model::C3, ModelParams{0.7, 1.0, 1.0, 2}},
    };
    std::uint64_t seed = 900;
    for (const Point& pt : points) {
        RngStream rng = RngStream::for_replicate(seed++, 0);
        std::map<long long, double> emp;
        for (long long i = 0; i < n; ++i)
            emp[sample_offspring_event_level(pt.model, pt.params, rng)] += 1.0 / n;
        double tv = 0.0;
        if (pt.model == Model::C2) {
            long long kmax = 300;
            for (const auto& [k, f] : emp) kmax = std::max(kmax, k);
            for (long long k = 0; k <= kmax; ++k) {
                const double exact =
                    pt.params.r * pmf_Z_G(static_cast<int>(k), pt.params) +
                    (1.0 - pt.params.r) * pmf_Z_B(static_cast<int>(k), pt.params);
                const auto it = emp.find(k);
                tv += std::abs((it == emp.end() ? 0.0 : it->second) - exact);
            }
        } else {
            const auto exact = c3_offspring_pmf(pt.params);
            for (int k = 0; k <= pt.params.degree(); ++k) {
                const auto it = emp.find(k);
                tv += std::abs((it == emp.end() ? 0.0 : it->second) - exact[k]);
            }
        }
        tv *= 0.5;
        worst = std::max(worst, tv);
        ok = ok && tv < 0.01;
    }
    std::ostringstream d;
    d << "worst TV=" << worst;
    report("criterion-9 oracle-equivalence", ok, d.str());
}

void criterion_10() {
    double err = 0.0;
    bool ok = true;
    for (double p : kPGrid) {
        for (double lam : kLambdaGrid) {
            for (double r : kRGrid) {
                const ModelParams params{p, r, lam, {}};
                for (int i = 1; i <= 100; ++i) {
                    double brute = lam / (1.0 + lam);
                    for (int j = 0; j <= i; ++j)
                        brute += (j - i) * mixed_collapse_pmf(i, j, params) / (1.0 + lam);
                    err = std::max(err, std::abs(brute - drift_C1(i, params)));
                }
                if (r < 1.0) {
                    // drift eventually negative and stays negative
                    int threshold = -1;
                    for (int i = 1; i <= 100000; ++i) {
                        if (drift_C1(i, params) < 0.0) {
                            threshold = i;
                            break;
                        }
                    }
                    ok = ok && threshold > 0;
                    for (int i = threshold; i <= threshold + 100; ++i)
                        ok = ok && drift_C1(i, params) < 0.0;
                }
            }
        }
    }
    std::ostringstream d;
    d << "max_err=" << err;
    report("criterion-10 drift-brute-force", ok && err < 1e-10, d.str());
}

void criterion_11() {
    double norm_err = 0.0, route_err = 0.0;
    bool nonneg = true;
    for (double p : kPGrid) {
        for (double lam : kLambdaGrid) {
            for (double r : kRGrid) {
                const ModelParams c2{p, r, lam, {}};
                norm_err = std::max(norm_err, std::abs(pgf_C2(1.0, c2) - 1.0));
                for (int m = 1; m <= 8; ++m) {
                    const ModelParams c3{p, r, lam, m};
                    norm_err = std::max(norm_err, std::abs(pgf_C3(1.0, c3) - 1.0));
                    const auto coeffs = c3_offspring_pmf(c3);
                    for (double c : coeffs) nonneg = nonneg && c >= 0.0;
                    for (double s : {0.0, 0.3, 0.7, 1.0})
                        route_err = std::max(route_err, std::abs(pgf_C3(s, c3) -
                                                                 pgf_C3_alternating_form(s, c3)));
                }
            }
        }
    }
    std::ostringstream d;
    d << "norm_err=" << norm_err << " route_err=" << route_err;
    report("criterion-11 pgf-validity", norm_err < 1e-12 && nonneg && route_err < 1e-10,
           d.str());
}

void criterion_12() {
    bool ok = true;
    const ModelParams c2{0.4, 1.0, 1.0, {}};
    SimConfig cfg;
    cfg.replicates = 20000;
    cfg.population_cap = 2000;
    cfg.base_seed = 1234;
    const auto a = estimate_extinction(Model::C2, c2, cfg, 1);
    const auto b = estimate_extinction(Model::C2, c2, cfg, 4);
    ok = ok && a.probability == b.probability && a.censored_fraction == b.censored_fraction;

    const ModelParams fixed{0.5, 1.0, 1.0, {}};
    std::ostringstream csv1, csv4;
    write_csv(phase_grid(Model::C2, fixed, Axis{"p", 0.3, 0.7, 5}, Axis{"lambda", 0.2, 1.8, 9},
                         true, 1),
              csv1);
    write_csv(phase_grid(Model::C2, fixed, Axis{"p", 0.3, 0.7, 5}, Axis{"lambda", 0.2, 1.8, 9},
                         true, 4),
              csv4);
    ok = ok && csv1.str() == csv4.str();
    report("criterion-12 determinism", ok, "thread counts 1 and 4 agree bit-for-bit");
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    criterion_12();
    if (g_failures > 0) {
        std::printf("%d criterion(s) FAILED\n", g_failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
