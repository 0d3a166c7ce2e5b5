#include "mollify/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace mollify {

namespace {

// Acceptance state for the h -> h/2 refinement ladder. Panel partitions are
// fixed across levels, so the composite midpoint sums admit an h^2 Richardson
// extrapolation; acceptance compares successive extrapolated values.
struct Refinement {
    double raw_prev = 0.0;
    double extrap_prev = 0.0;
    int level = 0;

    // Returns true once the extrapolated sequence has settled below tol.
    bool accept(double raw, double tol, QuadResult& res) {
        ++level;
        if (level == 1) {
            raw_prev = raw;
            res.value = raw;
            return false;
        }
        double extrap = (4.0 * raw - raw_prev) / 3.0;
        res.value = extrap;
        if (level >= 3) {
            res.err_est = std::abs(extrap - extrap_prev);
            if (res.err_est < tol) {
                res.converged = true;
                return true;
            }
        }
        raw_prev = raw;
        extrap_prev = extrap;
        return false;
    }
};

void append_midpoints(PanelGrid& grid, double lo, double hi, int m) {
    const double h = (hi - lo) / m;
    for (int i = 0; i < m; ++i) {
        grid.nodes.push_back(lo + (i + 0.5) * h);
        grid.weights.push_back(h);
    }
}

}  // namespace

PanelGrid symmetric_panel_grid(double c, double R, double scale, int m_per_panel) {
    PanelGrid grid;
    const double a = std::min(std::max(scale, 1e-300), R);
    // Core panel; even node count keeps the center off the grid.
    const int m_core = (m_per_panel % 2 == 0) ? m_per_panel : m_per_panel + 1;
    append_midpoints(grid, c - a, c + a, m_core);
    double lo = a;
    while (lo < R * (1.0 - 1e-15)) {
        double hi = std::min(2.0 * lo, R);
        // Mirror the right-shell nodes onto the left so symmetry is exact.
        const double h = (hi - lo) / m_per_panel;
        for (int i = 0; i < m_per_panel; ++i) {
            const double off = lo + (i + 0.5) * h;
            grid.nodes.push_back(c + off);
            grid.weights.push_back(h);
            grid.nodes.push_back(c - off);
            grid.weights.push_back(h);
        }
        lo = hi;
    }
    return grid;
}

QuadResult symmetric_panels_1d(const std::function<double(double)>& g, double c, double R,
                               double scale, double tol, long max_points) {
    QuadResult res;
    Refinement ladder;
    for (int m = 4;; m *= 2) {
        PanelGrid grid = symmetric_panel_grid(c, R, scale, m);
        if (static_cast<long>(grid.nodes.size()) > max_points) break;
        double sum = 0.0;
        for (size_t i = 0; i < grid.nodes.size(); ++i) sum += grid.weights[i] * g(grid.nodes[i]);
        res.points = static_cast<long>(grid.nodes.size());
        if (ladder.accept(sum, tol, res)) return res;
    }
    return res;
}

QuadResult one_sided_panels(const std::function<double(double)>& g, double a, double b,
                            double scale, double tol, long max_points) {
    if (!(b > a)) throw std::invalid_argument("one_sided_panels requires a < b");
    QuadResult res;
    Refinement ladder;
    for (int m = 4;; m *= 2) {
        PanelGrid grid;
        double lo = a;
        double w = std::min(std::max(scale, 1e-300), b - a);
        while (true) {
            double hi = std::min(lo + w, b);
            append_midpoints(grid, lo, hi, m);
            if (hi >= b) break;
            lo = hi;
            w *= 2.0;
        }
        if (static_cast<long>(grid.nodes.size()) > max_points) break;
        double sum = 0.0;
        for (size_t i = 0; i < grid.nodes.size(); ++i) sum += grid.weights[i] * g(grid.nodes[i]);
        res.points = static_cast<long>(grid.nodes.size());
        if (ladder.accept(sum, tol, res)) return res;
    }
    return res;
}

QuadResult symmetric_panels_nd(int dim, const std::function<double(const Point&)>& g,
                               const Point& center, const std::array<double, 3>& radii,
                               double scale, double tol, long max_points) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("symmetric_panels_nd: dim out of range");
    QuadResult res;
    Refinement ladder;
    for (int m = 4;; m *= 2) {
        std::array<PanelGrid, 3> grids;
        long total = 1;
        bool over = false;
        for (int d = 0; d < dim; ++d) {
            grids[static_cast<size_t>(d)] = symmetric_panel_grid(
                center[static_cast<size_t>(d)], radii[static_cast<size_t>(d)], scale, m);
            total *= static_cast<long>(grids[static_cast<size_t>(d)].nodes.size());
            if (total > max_points) {
                over = true;
                break;
            }
        }
        if (over) break;

        double sum = 0.0;
        Point p{};
        const PanelGrid& g0 = grids[0];
        if (dim == 1) {
            for (size_t i = 0; i < g0.nodes.size(); ++i) {
                p[0] = g0.nodes[i];
                sum += g0.weights[i] * g(p);
            }
        } else if (dim == 2) {
            const PanelGrid& g1 = grids[1];
            for (size_t i = 0; i < g0.nodes.size(); ++i) {
                p[0] = g0.nodes[i];
                double inner = 0.0;
                for (size_t j = 0; j < g1.nodes.size(); ++j) {
                    p[1] = g1.nodes[j];
                    inner += g1.weights[j] * g(p);
                }
                sum += g0.weights[i] * inner;
            }
        } else {
            const PanelGrid& g1 = grids[1];
            const PanelGrid& g2 = grids[2];
            for (size_t i = 0; i < g0.nodes.size(); ++i) {
                p[0] = g0.nodes[i];
                double acc1 = 0.0;
                for (size_t j = 0; j < g1.nodes.size(); ++j) {
                    p[1] = g1.nodes[j];
                    double acc2 = 0.0;
                    for (size_t k = 0; k < g2.nodes.size(); ++k) {
                        p[2] = g2.nodes[k];
                        acc2 += g2.weights[k] * g(p);
                    }
                    acc1 += g1.weights[j] * acc2;
                }
                sum += g0.weights[i] * acc1;
            }
        }

        res.points = total;
        if (ladder.accept(sum, tol, res)) return res;
    }
    return res;
}

}  // namespace mollify
