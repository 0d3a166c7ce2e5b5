#pragma once

#include <functional>
#include <vector>

#include "mollify/geometry.hpp"

namespace mollify {

struct QuadResult {
    double value = 0.0;
    double err_est = 0.0;  // |last - previous| refinement difference
    long points = 0;
    bool converged = false;
};

/// Node/weight set for one refinement level of the panel schemes.
struct PanelGrid {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Composite midpoint over [c-R, c+R] on dyadic panels: a core panel
/// [c-a, c+a] with a = min(scale, R), then mirrored shells doubling in width
/// out to R. The node set is symmetric about c at every refinement level
/// (even node counts keep c itself off the grid), so even integrands about c
/// cancel exactly and the panels resolve a kernel concentrated at scale
/// `scale` near c without a uniform global step.
PanelGrid symmetric_panel_grid(double c, double R, double scale, int m_per_panel);
QuadResult symmetric_panels_1d(const std::function<double(double)>& g, double c, double R,
                               double scale, double tol, long max_points);

/// Dyadic panels ascending from a toward b, first panel width min(scale, b-a).
QuadResult one_sided_panels(const std::function<double(double)>& g, double a, double b,
                            double scale, double tol, long max_points);

/// Tensor-product version of symmetric_panels_1d over a centered box with
/// per-axis radii; max_points caps the total node count per refinement level.
QuadResult symmetric_panels_nd(int dim, const std::function<double(const Point&)>& g,
                               const Point& center, const std::array<double, 3>& radii,
                               double scale, double tol, long max_points);

}  // namespace mollify
