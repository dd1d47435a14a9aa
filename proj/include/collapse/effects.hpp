#pragma once

#include "collapse/params.hpp"

namespace collapse {

// Exact collapse-effect distributions acting on a colony of size i.
// All three are probability masses for the survivor count j after one
// collapse; j ranges over [0, i].

// Binomial effect: every individual survives independently with probability p.
double binomial_collapse_pmf(int colony_size, int survivors, double p);

// Geometric effect: individuals are struck sequentially, the disaster halts
// at the first survivor. Mass q^i at j=0 and p*q^(i-j) for 1 <= j <= i.
double geometric_collapse_pmf(int colony_size, int survivors, double p);

// r-mixture of the two effects.
double mixed_collapse_pmf(int colony_size, int survivors, const ModelParams& params);

}  // namespace collapse
