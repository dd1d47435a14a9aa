#include "collapse/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "collapse/offspring.hpp"

namespace collapse {

namespace {

constexpr double kOpenIntervalMargin = 1e-6;

double clamp_p(double p) {
    return std::min(std::max(p, kOpenIntervalMargin), 1.0 - kOpenIntervalMargin);
}

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
    threads = std::max(1, std::min(threads, n));
    if (threads == 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (int i = t; i < n; i += threads) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

std::vector<double> Axis::values() const {
    if (steps < 1) throw std::domain_error("axis needs at least one step");
    std::vector<double> out;
    out.reserve(steps);
    for (int i = 0; i < steps; ++i) {
        double v = steps == 1 ? min : min + (max - min) * i / (steps - 1);
        if (name == "p") v = clamp_p(v);
        out.push_back(v);
    }
    return out;
}

Axis Axis::integer_range(std::string name, int lo, int hi) {
    return Axis{std::move(name), static_cast<double>(lo), static_cast<double>(hi),
                hi - lo + 1};
}

SweepTable phase_grid(Model model, const ModelParams& fixed, const Axis& p_axis,
                      const Axis& lambda_axis, bool compute_extinction, int threads) {
    if (p_axis.steps < 2 || lambda_axis.steps < 2)
        throw std::domain_error("phase grid axes need at least 2 steps");
    const std::vector<double> ps = p_axis.values();
    const std::vector<double> lambdas = lambda_axis.values();

    SweepTable table;
    table.axes = {p_axis, lambda_axis};
    table.metadata["kind"] = "phase";
    table.metadata["model"] = model_name(model);
    table.metadata["r"] = format_g12(fixed.r);
    if (fixed.m) table.metadata["m"] = std::to_string(*fixed.m);
    table.cells.resize(ps.size() * lambdas.size());

    parallel_for(static_cast<int>(table.cells.size()), threads, [&](int idx) {
        const double p = ps[idx / lambdas.size()];
        const double lambda = lambdas[idx % lambdas.size()];
        SweepCell cell;
        cell.model = model;
        cell.p = p;
        cell.lambda = lambda;
        cell.r = fixed.r;
        cell.m = model == Model::C3 ? fixed.m : std::nullopt;
        try {
            ModelParams params{p, fixed.r, lambda, cell.m};
            params.validate();
            switch (model) {
                case Model::C1:
                    cell.survives = fixed.r == 1.0 && lambda * p > 1.0 - p;
                    break;
                case Model::C2:
                    cell.mean_offspring = mean_C2(params);
                    cell.survives = survives_C2(params);
                    break;
                case Model::C3:
                    cell.mean_offspring = mean_C3(params);
                    cell.survives = survives_C3(params);
                    break;
            }
            if (compute_extinction)
                cell.extinction_prob = extinction(model, params).probability;
        } catch (const std::exception&) {
            cell.status = CellStatus::Failed;
        }
        table.cells[idx] = cell;
    });
    return table;
}

SweepTable critical_curve_table(Model model, double r, std::optional<int> m,
                                const Axis& p_axis) {
    SweepTable table;
    table.axes = {p_axis};
    table.metadata["kind"] = "critical";
    table.metadata["model"] = model_name(model);
    table.metadata["r"] = format_g12(r);
    if (m) table.metadata["m"] = std::to_string(*m);
    for (double p : p_axis.values()) {
        SweepCell cell;
        cell.model = model;
        cell.p = p;
        cell.r = r;
        cell.m = model == Model::C3 ? m : std::nullopt;
        try {
            cell.critical = critical_lambda(model, p, r, cell.m);
        } catch (const std::exception&) {
            cell.status = CellStatus::Failed;
        }
        table.cells.push_back(cell);
    }
    return table;
}

SweepTable strategy_comparison(const Axis& m_axis, const Axis& p_axis) {
    SweepTable table;
    table.axes = {m_axis, p_axis};
    table.metadata["kind"] = "strategy";
    table.metadata["r"] = "1";
    const std::vector<double> ps = p_axis.values();
    for (double md : m_axis.values()) {
        const int m = static_cast<int>(std::lround(md));
        if (m < 2) throw std::domain_error("strategy comparison needs m >= 2");
        for (double p : ps) {
            SweepCell cell;
            cell.model = Model::C3;
            cell.p = p;
            cell.r = 1.0;
            cell.m = m;
            try {
                const CriticalRate l3 = critical_lambda(Model::C3, p, 1.0, m);
                const CriticalRate l1 = critical_lambda(Model::C1, p, 1.0);
                cell.critical = l3;
                const double diff = l3.value - l1.value;
                if (std::abs(diff) <= 1e-12) {
                    cell.label = "tie";
                } else {
                    cell.label = diff < 0.0 ? "dispersion_better" : "no_dispersion_better";
                }
            } catch (const std::exception&) {
                cell.status = CellStatus::Failed;
            }
            table.cells.push_back(cell);
        }
    }
    return table;
}

std::string format_g12(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

namespace {

std::string critical_field(const CriticalRate& c) {
    return c.is_infinite ? "inf" : format_g12(c.value);
}

}  // namespace

void write_csv(const SweepTable& table, std::ostream& out) {
    out << "model,p,lambda,r,m,mean_offspring,survives,extinction_prob,critical_lambda,"
           "label,status\n";
    for (const SweepCell& c : table.cells) {
        out << model_name(c.model) << ',' << format_g12(c.p) << ',';
        if (c.lambda) out << format_g12(*c.lambda);
        out << ',' << format_g12(c.r) << ',';
        if (c.m) out << *c.m;
        out << ',';
        if (c.mean_offspring) out << format_g12(*c.mean_offspring);
        out << ',';
        if (c.survives) out << (*c.survives ? "true" : "false");
        out << ',';
        if (c.extinction_prob) out << format_g12(*c.extinction_prob);
        out << ',';
        if (c.critical) out << critical_field(*c.critical);
        out << ',' << c.label << ','
            << (c.status == CellStatus::Ok ? "ok" : "failed") << '\n';
    }
}

std::vector<SweepCell> read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("model,p,lambda,", 0) != 0)
        throw std::runtime_error("not a sweep CSV: bad header");
    std::vector<SweepCell> cells;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) f.push_back(field);
        f.resize(11);
        SweepCell c;
        if (f[0] == "c1") c.model = Model::C1;
        else if (f[0] == "c2") c.model = Model::C2;
        else if (f[0] == "c3") c.model = Model::C3;
        else throw std::runtime_error("bad model tag: " + f[0]);
        c.p = std::stod(f[1]);
        if (!f[2].empty()) c.lambda = std::stod(f[2]);
        c.r = std::stod(f[3]);
        if (!f[4].empty()) c.m = std::stoi(f[4]);
        if (!f[5].empty()) c.mean_offspring = std::stod(f[5]);
        if (!f[6].empty()) c.survives = (f[6] == "true");
        if (!f[7].empty()) c.extinction_prob = std::stod(f[7]);
        if (!f[8].empty()) {
            c.critical = f[8] == "inf"
                             ? CriticalRate::infinite(c.model, RateSolver::Bisection)
                             : CriticalRate::finite(std::stod(f[8]), c.model,
                                                    RateSolver::Bisection);
        }
        c.label = f[9];
        c.status = f[10] == "failed" ? CellStatus::Failed : CellStatus::Ok;
        cells.push_back(c);
    }
    return cells;
}

}  // namespace collapse
