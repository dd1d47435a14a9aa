#include "collapse/simulate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <thread>
#include <vector>

namespace collapse {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

RngStream RngStream::for_replicate(std::uint64_t base_seed, std::uint64_t replicate_index) {
    const std::uint64_t seed = splitmix64(splitmix64(base_seed) ^ splitmix64(~replicate_index));
    return RngStream(seed);
}

double RngStream::uniform() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
}

double RngStream::exponential(double mean) {
    return -mean * std::log1p(-uniform());
}

long long RngStream::poisson(double mean) {
    return std::poisson_distribution<long long>(mean)(engine_);
}

bool RngStream::bernoulli(double prob) { return uniform() < prob; }

long long RngStream::binomial(long long trials, double prob) {
    return std::binomial_distribution<long long>(trials, prob)(engine_);
}

long long RngStream::geometric_failures(double success_prob) {
    return std::geometric_distribution<long long>(success_prob)(engine_);
}

int RngStream::uniform_int(int upper) {
    return std::uniform_int_distribution<int>(0, upper - 1)(engine_);
}

long long sample_mixed_collapse(long long colony_size, const ModelParams& params,
                                RngStream& rng) {
    if (colony_size < 1) throw std::domain_error("collapse applies to nonempty colonies only");
    if (rng.bernoulli(params.r)) {
        // geometric effect: strike until the first survivor
        const long long failures = rng.geometric_failures(params.p);
        return failures >= colony_size ? 0 : colony_size - failures;
    }
    return rng.binomial(colony_size, params.p);
}

long long sample_survivors_event_level(const ModelParams& params, RngStream& rng) {
    params.validate();
    const double lifetime = rng.exponential(1.0);
    const long long births = rng.poisson(params.lambda * lifetime);
    return sample_mixed_collapse(births + 1, params, rng);
}

namespace {

// Z_B and Z_G are zero-inflated geometric laws; sampling them directly is
// the production path, cross-validated against the event-level oracle.
long long sample_colony_survivors_closed_form(const ModelParams& params, RngStream& rng) {
    const double lam = params.lambda, p = params.p;
    const double zero_mass = params.q() / (1.0 + lam * p);
    if (rng.bernoulli(zero_mass)) return 0;
    if (rng.bernoulli(params.r)) {
        // Z_G | Z_G >= 1: 1 + Geom with tail ratio lambda/(1+lambda)
        return 1 + rng.geometric_failures(1.0 / (1.0 + lam));
    }
    // Z_B | Z_B >= 1: 1 + Geom with tail ratio lambda p/(1+lambda p)
    return 1 + rng.geometric_failures(1.0 / (1.0 + lam * p));
}

long long occupied_slots(long long survivors, int m, RngStream& rng) {
    if (survivors == 0) return 0;
    std::uint64_t mask = 0;  // m <= 64 by validation
    for (long long t = 0; t < survivors; ++t) mask |= 1ULL << rng.uniform_int(m);
    return std::popcount(mask);
}

}  // namespace

long long sample_offspring(Model model, const ModelParams& params, RngStream& rng) {
    params.validate();
    const long long survivors = sample_colony_survivors_closed_form(params, rng);
    if (model == Model::C2) return survivors;
    if (model == Model::C3) return occupied_slots(survivors, params.degree(), rng);
    throw std::domain_error("offspring sampling covers the dispersion models only");
}

long long sample_offspring_event_level(Model model, const ModelParams& params, RngStream& rng) {
    const long long survivors = sample_survivors_event_level(params, rng);
    if (model == Model::C2) return survivors;
    if (model == Model::C3) return occupied_slots(survivors, params.degree(), rng);
    throw std::domain_error("offspring sampling covers the dispersion models only");
}

RunOutcome run_C1(const ModelParams& params, const SimConfig& config,
                  long long replicate_index) {
    params.validate();
    config.validate();
    RngStream rng = RngStream::for_replicate(config.base_seed, replicate_index);
    const double grow_prob = params.lambda / (params.lambda + 1.0);
    long long state = 1;
    RunOutcome out;
    out.max_population = 1;
    for (long long step = 1; step <= config.step_cap; ++step) {
        if (rng.bernoulli(grow_prob)) {
            ++state;
        } else {
            state = sample_mixed_collapse(state, params, rng);
        }
        out.max_population = std::max(out.max_population, state);
        out.generations_or_steps = step;
        if (state == 0) {
            out.extinct = true;
            return out;
        }
        if (state >= config.population_cap) return out;  // escaped: surviving
    }
    out.censored = true;
    return out;
}

RunOutcome run_branching(Model model, const ModelParams& params, const SimConfig& config,
                         long long replicate_index) {
    params.validate();
    config.validate();
    RngStream rng = RngStream::for_replicate(config.base_seed, replicate_index);
    long long colonies = 1;
    RunOutcome out;
    out.max_population = 1;
    for (long long gen = 1; gen <= config.generation_cap; ++gen) {
        long long next = 0;
        for (long long c = 0; c < colonies; ++c)
            next += sample_offspring(model, params, rng);
        colonies = next;
        out.max_population = std::max(out.max_population, colonies);
        out.generations_or_steps = gen;
        if (colonies == 0) {
            out.extinct = true;
            return out;
        }
        if (colonies >= config.population_cap) return out;  // escaped: surviving
    }
    out.censored = true;
    return out;
}

ExtinctionEstimate estimate_extinction(Model model, const ModelParams& params,
                                       const SimConfig& config, int threads) {
    params.validate();
    config.validate();
    threads = std::max(1, threads);

    struct Tally {
        long long extinct = 0;
        long long censored = 0;
    };
    std::vector<Tally> tallies(threads);

    auto worker = [&](int t) {
        Tally local;
        for (long long i = t; i < config.replicates; i += threads) {
            const RunOutcome out = model == Model::C1
                                       ? run_C1(params, config, i)
                                       : run_branching(model, params, config, i);
            if (out.extinct) ++local.extinct;
            if (out.censored) ++local.censored;
        }
        tallies[t] = local;
    };

    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }

    long long extinct = 0, censored = 0;
    for (const Tally& t : tallies) {
        extinct += t.extinct;
        censored += t.censored;
    }

    ExtinctionEstimate est;
    est.method = EstimateMethod::MonteCarlo;
    est.iterations = config.replicates;
    est.probability = static_cast<double>(extinct) / config.replicates;
    est.ci_half_width =
        1.96 * std::sqrt(est.probability * (1.0 - est.probability) / config.replicates);
    est.censored_fraction = static_cast<double>(censored) / config.replicates;
    return est;
}

}  // namespace collapse
