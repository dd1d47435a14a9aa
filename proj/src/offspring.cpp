#include "collapse/offspring.hpp"

#include <cmath>
#include <stdexcept>

namespace collapse {

namespace {

double binom_coeff(int n, int k) {
    double c = 1.0;
    for (int t = 0; t < k; ++t) c *= static_cast<double>(n - t) / (t + 1);
    return c;
}

BigInt big_binom(int n, int k) {
    BigInt c = 1;
    for (int t = 0; t < k; ++t) {
        c *= n - t;
        c /= t + 1;
    }
    return c;
}

// Sum of the nonnegative series sum_{j>=k} x^j T(j,k) where T is the
// surjection count. Carried as scaled terms u_j[c] = x^j T(j,c) via the
// recurrence T(j,c) = c (T(j-1,c) + T(j-1,c-1)); every term is >= 0 so the
// accumulation is cancellation-free. Requires k*x < 1 (holds for all valid
// params since x <= lambda p / (m (1+lambda p)) and c <= m).
double surjection_series(double x, int k) {
    if (k == 0) return 1.0;  // T(0,0)=1 only
    std::vector<double> u(k + 1, 0.0);
    u[0] = 1.0;  // j = 0
    double sum = 0.0;
    const double ratio = k * x;
    for (int j = 1; j <= 2000000; ++j) {
        for (int c = k; c >= 1; --c) u[c] = x * c * (u[c] + u[c - 1]);
        u[0] = 0.0;
        sum += u[k];
        if (j >= k) {
            // remaining mass enters u[k] only through u[k] and u[k-1]
            const double feed = u[k] + u[k - 1];
            if (feed * ratio <= (1.0 - ratio) * 1e-18 * (sum + 1e-300)) break;
        }
    }
    return sum;
}

}  // namespace

double pmf_Z_B(int k, const ModelParams& params) {
    params.validate();
    if (k < 0) throw std::domain_error("offspring count must be >= 0");
    const double lam = params.lambda, p = params.p;
    const double denom = 1.0 + lam * p;
    if (k == 0) return params.q() / denom;
    return (1.0 + lam) / (lam * denom) * std::pow(lam * p / denom, k);
}

double pmf_Z_G(int k, const ModelParams& params) {
    params.validate();
    if (k < 0) throw std::domain_error("offspring count must be >= 0");
    const double lam = params.lambda, p = params.p;
    if (k == 0) return params.q() / (1.0 + lam * p);
    return p / (1.0 + lam * p) * std::pow(lam / (1.0 + lam), k - 1);
}

double pgf_C2(double s, const ModelParams& params) {
    params.validate();
    if (s < 0.0 || s > 1.0) throw std::domain_error("PGF argument must lie in [0,1]");
    const double lam = params.lambda, p = params.p, r = params.r, q = params.q();
    const double geo = r * (lam + 1.0) * p * s / (1.0 + lam - lam * s);
    const double bin = (1.0 - r) * (lam + 1.0) * p * s / (1.0 + lam * p - lam * p * s);
    return (q + geo + bin) / (1.0 + lam * p);
}

double pgf_C2_derivative(double s, const ModelParams& params) {
    params.validate();
    const double lam = params.lambda, p = params.p, r = params.r;
    // d/ds [a s / (b - c s)] = a b / (b - c s)^2
    const double bg = 1.0 + lam, cg = lam;
    const double bb = 1.0 + lam * p, cb = lam * p;
    const double geo = r * (lam + 1.0) * p * bg / ((bg - cg * s) * (bg - cg * s));
    const double bin = (1.0 - r) * (lam + 1.0) * p * bb / ((bb - cb * s) * (bb - cb * s));
    return (geo + bin) / (1.0 + lam * p);
}

double mean_C2(const ModelParams& params) {
    params.validate();
    const double lam = params.lambda, p = params.p, r = params.r;
    return p * (lam + 1.0) * (lam + 1.0) * r / (lam * p + 1.0) + p * (lam + 1.0) * (1.0 - r);
}

BigInt surjection_count(int j, int k) {
    if (j < 0 || k < 0) throw std::domain_error("surjection_count needs j, k >= 0");
    BigInt total = 0;
    for (int i = 0; i <= k; ++i) {
        BigInt term = big_binom(k, i) * boost::multiprecision::pow(BigInt(k - i), j);
        total += (i % 2 == 0) ? term : -term;
    }
    return total;
}

std::vector<double> c3_offspring_pmf(const ModelParams& params) {
    params.validate();
    const int m = params.degree();
    const double lam = params.lambda, p = params.p, r = params.r;
    const double xb = lam * p / (m * (1.0 + lam * p));
    const double xg = lam / (m * (1.0 + lam));
    std::vector<double> pmf(m + 1, 0.0);
    pmf[0] = params.q() / (1.0 + lam * p);
    for (int k = 1; k <= m; ++k) {
        const double cmk = binom_coeff(m, k);
        const double sb = cmk * (1.0 + lam) / (lam * (1.0 + lam * p)) * surjection_series(xb, k);
        // E6 has one factor x stripped: prefactor p/(m(1+lam p)), series over x^(j-1)
        const double sg = cmk * p / (m * (1.0 + lam * p)) * surjection_series(xg, k) / xg;
        pmf[k] = r * sg + (1.0 - r) * sb;
    }
    return pmf;
}

std::vector<double> c3_offspring_pmf_alternating(const ModelParams& params) {
    params.validate();
    const int m = params.degree();
    const double lam = params.lambda, p = params.p, r = params.r;
    std::vector<double> pmf(m + 1, 0.0);
    pmf[0] = params.q() / (1.0 + lam * p);
    for (int k = 1; k <= m; ++k) {
        double inner_b = 0.0, inner_g = 0.0;
        for (int i = 0; i <= k; ++i) {
            const double a = static_cast<double>(big_binom(k, i)) * std::pow(k - i, k) *
                             ((i % 2 == 0) ? 1.0 : -1.0);
            inner_b += a / (m * (lam * p + 1.0) - lam * p * (k - i));
            inner_g += a / (m * (1.0 + lam) - lam * (k - i));
        }
        const double cmk = binom_coeff(m, k);
        const double sb = cmk * m * (1.0 + lam) / lam *
                          std::pow(lam * p / (m * (lam * p + 1.0)), k) * inner_b;
        const double sg = cmk * (1.0 + lam) * p / (lam * p + 1.0) *
                          std::pow(lam / (m * (1.0 + lam)), k - 1) * inner_g;
        pmf[k] = r * sg + (1.0 - r) * sb;
    }
    return pmf;
}

double pmf_offspring_C3(int k, const ModelParams& params) {
    params.validate();
    const int m = params.degree();
    if (k < 0 || k > m) throw std::domain_error("C3 offspring count must lie in [0, m]");
    return c3_offspring_pmf(params)[k];
}

double pgf_C3(double s, const ModelParams& params) {
    if (s < 0.0 || s > 1.0) throw std::domain_error("PGF argument must lie in [0,1]");
    const std::vector<double> pmf = c3_offspring_pmf(params);
    double v = 0.0;
    for (int k = static_cast<int>(pmf.size()) - 1; k >= 0; --k) v = v * s + pmf[k];
    return v;
}

double pgf_C3_derivative(double s, const ModelParams& params) {
    const std::vector<double> pmf = c3_offspring_pmf(params);
    double v = 0.0;
    for (int k = static_cast<int>(pmf.size()) - 1; k >= 1; --k) v = v * s + k * pmf[k];
    return v;
}

double pgf_C3_alternating_form(double s, const ModelParams& params) {
    params.validate();
    const int m = params.degree();
    const double lam = params.lambda, p = params.p, r = params.r, q = params.q();
    double psi_b = q / (1.0 + lam * p);
    double psi_g = q / (1.0 + lam * p);
    double sum_b = 0.0, sum_g = 0.0;
    for (int k = 1; k <= m; ++k) {
        double inner_b = 0.0, inner_g = 0.0;
        for (int j = 0; j <= k; ++j) {
            const double a = static_cast<double>(big_binom(k, j)) * std::pow(j, k);
            inner_b += ((j % 2 == 0) ? 1.0 : -1.0) * a / (m * (1.0 + lam * p) - lam * p * j);
            inner_g += ((j % 2 == 0) ? -1.0 : 1.0) * a / (m * (1.0 + lam) - lam * j);
        }
        const double cmk = binom_coeff(m, k);
        sum_b += cmk * std::pow(-lam * p * s / (m * (1.0 + lam * p)), k) * inner_b;
        sum_g += cmk * std::pow(-lam * s / (m * (1.0 + lam)), k - 1) * inner_g;
    }
    psi_b += m * (1.0 + lam) / lam * sum_b;
    psi_g += (1.0 + lam) * p * s / (lam * p + 1.0) * sum_g;
    return r * psi_g + (1.0 - r) * psi_b;
}

double mean_C3(const ModelParams& params) {
    params.validate();
    const int m = params.degree();
    const double lam = params.lambda, p = params.p, r = params.r;
    return m * p * (lam + 1.0) * (lam + 1.0) * r / ((m + lam) * (lam * p + 1.0)) +
           m * p * (lam + 1.0) * (1.0 - r) / (m + lam * p);
}

double mean_offspring(Model model, const ModelParams& params) {
    switch (model) {
        case Model::C2: return mean_C2(params);
        case Model::C3: return mean_C3(params);
        case Model::C1: break;
    }
    throw std::domain_error("mean_offspring is defined for the dispersion models only");
}

PgfEvaluator::PgfEvaluator(Model model, const ModelParams& params)
    : model_(model), params_(params) {
    params_.validate();
    if (model_ == Model::C3) {
        coeffs_ = c3_offspring_pmf(params_);
    } else if (model_ != Model::C2) {
        throw std::domain_error("PgfEvaluator covers the dispersion models C2/C3 only");
    }
}

double PgfEvaluator::operator()(double s) const {
    if (model_ == Model::C2) return pgf_C2(s, params_);
    double v = 0.0;
    for (int k = static_cast<int>(coeffs_.size()) - 1; k >= 0; --k) v = v * s + coeffs_[k];
    return v;
}

double PgfEvaluator::derivative(double s) const {
    if (model_ == Model::C2) return pgf_C2_derivative(s, params_);
    double v = 0.0;
    for (int k = static_cast<int>(coeffs_.size()) - 1; k >= 1; --k) v = v * s + k * coeffs_[k];
    return v;
}

double PgfEvaluator::mean() const {
    return model_ == Model::C2 ? mean_C2(params_) : mean_C3(params_);
}

}  // namespace collapse
