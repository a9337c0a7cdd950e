#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "codazzi/errors.hpp"

namespace codazzi {

using Point = Eigen::VectorXd;

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
    double length() const { return hi - lo; }
};

/// A single coordinate chart: ordered coordinate names, a per-axis domain box,
/// and per-axis periodicity (period = interval length).
struct Chart {
    std::vector<std::string> coords;
    std::vector<Interval> domain;
    std::vector<bool> periodic;

    int dim() const { return static_cast<int>(coords.size()); }

    void validate() const;

    bool contains(const Point& p) const;

    /// Wrap periodic coordinates back into their fundamental interval.
    Point wrap(Point p) const;

    std::string describe_point(const Point& p) const;
};

/// Chart {t, x, y} on the given box (same box on all axes unless given).
Chart make_chart_txy(Interval t, Interval x, Interval y, bool periodic_all = false);

/// Uniform sampling of a chart's box. Periodic axes exclude the right
/// endpoint (it aliases the left one); non-periodic axes include both ends,
/// optionally shrunk by an interior margin to stay clear of degenerate loci.
struct GridSpec {
    std::vector<int> counts;
    double margin = 0.0; // absolute shrink applied to each non-periodic axis end

    static GridSpec uniform(int n, int dim) { return GridSpec{std::vector<int>(dim, n), 0.0}; }

    int total_nodes() const {
        int n = 1;
        for (int c : counts) n *= c;
        return n;
    }
};

/// Flattened view of a grid over a chart: node coordinates, per-axis spacing,
/// and index arithmetic (row-major, last axis fastest).
class Grid {
public:
    Grid(const Chart& chart, const GridSpec& spec);

    int dim() const { return static_cast<int>(counts_.size()); }
    int size() const { return total_; }
    const std::vector<int>& counts() const { return counts_; }
    double spacing(int axis) const { return spacing_[axis]; }
    bool periodic(int axis) const { return periodic_[axis]; }

    double axis_value(int axis, int index) const { return origin_[axis] + index * spacing_[axis]; }

    Point point(int flat_index) const;
    std::vector<int> multi_index(int flat_index) const;
    int flat_index(const std::vector<int>& mi) const;

    /// Flat index of the grid node nearest to p (periodic axes wrapped).
    int nearest_node(const Point& p) const;

    /// Neighbor index along `axis`, offset by `delta` nodes. Returns -1 when the
    /// step leaves a non-periodic axis; periodic axes wrap.
    int neighbor(int flat_index, int axis, int delta) const;

    /// True if the node admits full +/-1 stencils on every axis.
    bool is_interior(int flat_index) const;

    /// Diameter of the sampled box (used to scale gradient thresholds).
    double box_diameter() const;

private:
    std::vector<int> counts_;
    std::vector<double> origin_;
    std::vector<double> spacing_;
    std::vector<bool> periodic_;
    std::vector<int> stride_;
    int total_ = 0;
};

} // namespace codazzi
