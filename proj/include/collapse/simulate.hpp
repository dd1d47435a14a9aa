#pragma once

#include <cstdint>
#include <random>

#include "collapse/analytic.hpp"
#include "collapse/params.hpp"

namespace collapse {

// Replicate streams are derived from (base_seed, replicate_index) by a
// splittable counter construction, so replicates are reproducible and
// independent of execution order or thread count.
class RngStream {
public:
    static RngStream for_replicate(std::uint64_t base_seed, std::uint64_t replicate_index);

    double uniform();                       // U(0,1)
    double exponential(double mean);
    long long poisson(double mean);
    bool bernoulli(double prob);
    long long binomial(long long trials, double prob);
    long long geometric_failures(double success_prob);  // failures before first success
    int uniform_int(int upper);             // uniform on [0, upper)

    std::mt19937_64& engine() { return engine_; }

private:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}
    std::mt19937_64 engine_;
};

struct SimConfig {
    long long replicates = 10000;
    long long generation_cap = 10000;     // GW generations
    long long population_cap = 10000000;  // colonies alive (C1: individuals)
    long long step_cap = 10000000;        // embedded-chain steps
    std::uint64_t base_seed = 0;

    void validate() const {
        if (replicates < 1 || generation_cap < 1 || population_cap < 1 || step_cap < 1)
            throw std::domain_error("simulation caps and replicate count must be >= 1");
    }
};

struct RunOutcome {
    bool extinct = false;
    bool censored = false;  // hit a generation/step cap without resolving
    long long generations_or_steps = 0;
    long long max_population = 0;
};

// One collapse applied to a colony of the given size under the r-mixture.
long long sample_mixed_collapse(long long colony_size, const ModelParams& params,
                                RngStream& rng);

// Event-level survivor sampler: draws the colony lifetime T ~ Exp(1) and the
// births N ~ Poisson(lambda T), then applies the mixed collapse to N+1
// individuals. Exists solely as a distributional oracle for the closed-form
// offspring laws.
long long sample_survivors_event_level(const ModelParams& params, RngStream& rng);

// Production offspring samplers via the closed-form zero-inflated geometric
// laws; C3 additionally throws the survivors into m slots and counts the
// occupied ones.
long long sample_offspring(Model model, const ModelParams& params, RngStream& rng);
long long sample_offspring_event_level(Model model, const ModelParams& params, RngStream& rng);

// Embedded-chain run of the no-dispersion process from state 1. Reaching
// population_cap counts as confident survival (return to 0 from there has
// vanishing probability); exhausting step_cap censors the replicate.
RunOutcome run_C1(const ModelParams& params, const SimConfig& config,
                  long long replicate_index);

// Galton-Watson run of the colony process of C2/C3 from one colony.
RunOutcome run_branching(Model model, const ModelParams& params, const SimConfig& config,
                         long long replicate_index);

// Aggregates replicates (optionally across threads; the result is identical
// for any thread count). Censored replicates count as surviving; the bias
// is downward on the extinction estimate and bounded by censored_fraction.
ExtinctionEstimate estimate_extinction(Model model, const ModelParams& params,
                                       const SimConfig& config, int threads = 1);

}  // namespace collapse
