#pragma once

#include <optional>

#include "codazzi/family.hpp"

namespace codazzi {

/// Fully configured metric/tensor pairs used throughout the verification
/// suites, each with a documented box, default grid, and probe point.
///
///   flat              Euclidean metric with A = g (single eigenvalue; the
///                     baseline every residual must vanish on). The box has
///                     distinct axis lengths: on an equal-spacing grid the
///                     discrete Hess system acquires a spurious checkerboard
///                     kernel mode that the continuum problem does not have.
///   torus             family instance with mu = 0.5 sin(x) cos(y) on the
///                     periodic box [0, 2pi)^3; not a warped product near 0.
///   inconsistent_warp family instance with mu = 1 + y/x^2 on
///                     t in [0,1], x,y in [0.5, 1.5]; g_tt = x^4/y^2. Warped
///                     in the polar r direction, inconsistently with the
///                     eigenspaces. The 7^3 default grid is part of the
///                     contract: the probe-gradient criterion scales with
///                     node count.
///   warped_consistent g = dt^2 + e^{2t}(dx^2 + dy^2) with lambda = e^t,
///                     mu = 2 e^t; conditions all hold, eta = 1, q = 2t.
///   mu_of_t           family instance with mu = 1 + t (conditions all hold).
///   mu_xy             family instance with mu = x y on a box clear of the
///                     mu = lambda crossing (conditions all fail).
///   parallel_shift    Euclidean metric with A = g + dt x dt (mu = 2,
///                     lambda = 1 constants; parallel tensor).
struct NamedExample {
    std::string id;
    MetricField g;
    SymTensorField A;
    GridSpec default_grid;
    Point probe;
    std::optional<FamilyInstance> family; // set for family-built examples
};

NamedExample named_example(const std::string& id);

std::vector<std::string> named_example_ids();

} // namespace codazzi
