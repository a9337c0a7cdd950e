#pragma once

#include <string>
#include <vector>

#include "codazzi/chart.hpp"

namespace codazzi {

/// Aggregated result of one residual sweep over a grid.
struct ResidualReport {
    std::string name;
    std::vector<int> grid_counts;
    double max_residual = 0.0;
    double mean_residual = 0.0;
    Point argmax;           // empty when no point was included
    int included_count = 0;
    int excluded_count = 0;
    double tolerance = 0.0;
    bool pass = true;       // max_residual < tolerance (vacuously true when empty)
};

/// Fold per-node residuals (NaN marks an excluded node) into a report.
/// Reductions run in fixed grid order, so reports are bit-stable across
/// worker counts.
ResidualReport reduce_residuals(std::string name, const Grid& grid,
                                const std::vector<double>& per_node, double tolerance);

/// Central tolerance knobs. Every default here is what the verification
/// suites pin; the CLI can override any of them by name.
struct Tolerances {
    double codazzi = 1e-8;         // Codazzi identity residual
    double lemma = 1e-6;           // background-lemma residuals (FD-limited)
    double condition = 1e-5;       // four-condition booleans (FD-limited)
    double cluster = 1e-6;         // relative eigenvalue gap for clustering
    double collision = 1e-8;       // |lambda - mu| exclusion
    double sigma_rel = 1e-6;       // numerical-kernel singular value cutoff
    double grad_rel = 1e-3;        // gradient threshold, times grid diameter
    double align = 1e-6;           // eigenframe/coordinate alignment
    double fd_rel = 1e-3;          // off-grid FD step, relative to axis length
    double characteristics = 1e-10;// characteristics-PDE residual
    double warp = 1e-5;            // eta spatial constancy and h_ij t-constancy

    double by_name(const std::string& name) const;
    void set_by_name(const std::string& name, double value);
    static std::vector<std::string> names();
};

} // namespace codazzi
