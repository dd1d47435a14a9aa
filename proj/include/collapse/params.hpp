#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace collapse {

enum class Model { C1, C2, C3 };

inline const char* model_name(Model m) {
    switch (m) {
        case Model::C1: return "c1";
        case Model::C2: return "c2";
        case Model::C3: return "c3";
    }
    return "?";
}

// Parameter tuple (p, r, lambda) plus the graph degree m for C3.
// The collapse rate is fixed at 1 throughout; it is not a parameter.
struct ModelParams {
    double p = 0.5;        // per-exposure survival probability, in (0,1)
    double r = 0.0;        // geometric-effect mixing weight, in [0,1]
    double lambda = 1.0;   // birth rate, > 0
    std::optional<int> m;  // graph degree, >= 1, present only for C3

    double q() const { return 1.0 - p; }

    void validate() const {
        if (!(p > 0.0 && p < 1.0))
            throw std::domain_error("p must lie in (0,1), got " + std::to_string(p));
        if (!(r >= 0.0 && r <= 1.0))
            throw std::domain_error("r must lie in [0,1], got " + std::to_string(r));
        if (!(lambda > 0.0))
            throw std::domain_error("lambda must be > 0, got " + std::to_string(lambda));
        if (m) {
            if (*m < 1) throw std::domain_error("m must be >= 1, got " + std::to_string(*m));
            if (*m > 64) throw std::domain_error("m capped at 64, got " + std::to_string(*m));
        }
    }

    ModelParams with_m(int degree) const {
        ModelParams out = *this;
        out.m = degree;
        return out;
    }

    int degree() const {
        if (!m) throw std::domain_error("model requires the graph degree m");
        return *m;
    }
};

}  // namespace collapse
