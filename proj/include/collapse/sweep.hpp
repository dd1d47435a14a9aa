#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "collapse/analytic.hpp"
#include "collapse/params.hpp"

namespace collapse {

// Inclusive, linearly spaced parameter axis. Axes named "p" are clamped to
// [1e-6, 1-1e-6] to respect the open interval.
struct Axis {
    std::string name;
    double min = 0.0;
    double max = 0.0;
    int steps = 1;  // number of grid points

    std::vector<double> values() const;
    static Axis integer_range(std::string name, int lo, int hi);
};

enum class CellStatus { Ok, Failed };

struct SweepCell {
    Model model = Model::C2;
    double p = 0.0;
    std::optional<double> lambda;
    double r = 0.0;
    std::optional<int> m;
    std::optional<double> mean_offspring;
    std::optional<bool> survives;
    std::optional<double> extinction_prob;
    std::optional<CriticalRate> critical;
    std::string label;  // strategy_comparison labels, empty otherwise
    CellStatus status = CellStatus::Ok;
};

struct SweepTable {
    std::vector<Axis> axes;
    std::vector<SweepCell> cells;  // row-major in axis order
    std::map<std::string, std::string> metadata;
};

// Survival region of the (p, lambda) plane for one model at fixed r (and m
// for C3). Cells additionally carry the extinction probability when
// compute_extinction is set. Failed cells are marked, never fatal.
SweepTable phase_grid(Model model, const ModelParams& fixed, const Axis& p_axis,
                      const Axis& lambda_axis, bool compute_extinction = true,
                      int threads = 1);

// Critical birth rate lambda^i(p, r) per p-grid point.
SweepTable critical_curve_table(Model model, double r, std::optional<int> m,
                                const Axis& p_axis);

// Compares lambda^3(p,1,m) against lambda^1(p,1) over an (m, p) grid and
// labels each cell dispersion_better / no_dispersion_better / tie.
SweepTable strategy_comparison(const Axis& m_axis, const Axis& p_axis);

// CSV schema (shared superset):
//   model,p,lambda,r,m,mean_offspring,survives,extinction_prob,critical_lambda,label,status
// Absent fields are empty, infinite rates the literal "inf", numbers at 12
// significant digits, LF line endings.
void write_csv(const SweepTable& table, std::ostream& out);
std::vector<SweepCell> read_csv(std::istream& in);

std::string format_g12(double value);

}  // namespace collapse
