#pragma once

#include <iosfwd>
#include <string>

#include "klshell/cases.hpp"

namespace kl {

struct LevelResult {
    int level = 0;
    int dofs = 0;           ///< free dofs after constraint elimination
    int active_elements = 0;
    ErrorNorms norms;       ///< zero for non-manufactured cases
    std::vector<std::pair<std::string, double>> qois;
    double residual = 0.0;
    double diagonal_ratio = 0.0;
    double assemble_seconds = 0.0;
    double couple_seconds = 0.0;
    double solve_seconds = 0.0;
};

struct ConvergenceReport {
    std::string case_id;
    PenaltyStrategy strategy;
    int degree = 0;
    double thickness = 0.0;
    bool manufactured = false;
    std::vector<LevelResult> levels;

    /// Least-squares slope of log(error) vs log(sqrt(dofs)) over the last
    /// `points` levels (positive = decaying).
    double slope(const std::function<double(const LevelResult&)>& value, int points = 3) const;
    double slope_l2(int points = 3) const;
    double slope_h1(int points = 3) const;
    double slope_h2(int points = 3) const;
    double slope_energy(int points = 3) const;
};

struct RunOptions {
    std::string out_dir;       ///< empty: no files written
    bool write_vtk = false;
    bool dump_matrix = false;
    int max_level_override = -1;
};

/// Builds, assembles, couples, solves and evaluates `levels` dyadic
/// refinements of a case; deterministic for a fixed configuration.
ConvergenceReport run_convergence(const BenchmarkCase& bench, const PenaltyStrategy& strategy, int degree,
                                  int levels, double thickness, const RunOptions& options = {});

std::string strategy_label(const PenaltyStrategy& strategy);
std::string beta_label(int beta_offset);

/// One CSV row per level; byte-stable for a fixed configuration.
void write_csv(const ConvergenceReport& report, const std::string& path);

/// Human-readable table with fitted slopes and stage timings.
void write_summary(const std::vector<ConvergenceReport>& reports, std::ostream& out);

}  // namespace kl
