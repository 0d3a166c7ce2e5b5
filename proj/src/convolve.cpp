#include "mollify/convolve.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mollify/quadrature.hpp"

namespace mollify {

namespace {

// Smallest dyadic radius (starting from t) whose kernel tail falls below
// bound_target / M.
double decay_radius(const ScaledKernel& k, double bound_m, double target) {
    double r = k.t();
    if (bound_m <= 0.0) return r;
    while (bound_m * k.tail_mass(r) > target && r < 1e18) r *= 2.0;
    return r;
}

}  // namespace

ConvolveResult convolve_at_detail(const FunctionSpec& f, const ScaledKernel& k, const Point& x,
                                  const QuadBudget& budget) {
    if (f.dim() != k.dim()) throw DimensionMismatch("function and kernel dimensions differ");
    const int n = f.dim();
    const double t = k.t();
    const double m_bound = f.bound();

    ConvolveResult res;
    if (m_bound == 0.0) return res;

    const double half_tol = 0.5 * budget.tol;
    const double r_decay = decay_radius(k, m_bound, half_tol);

    // Integration variable u = x - y, so the kernel core sits at u = 0 and the
    // node set is symmetric about the evaluation point.
    std::array<double, 3> radii{};
    bool decay_clipped = false;
    for (int d = 0; d < n; ++d) {
        double r = r_decay;
        if (f.support_radius() < r_decay) {
            double cover = std::abs(x[static_cast<size_t>(d)]) + f.support_radius();
            if (cover < r_decay) {
                r = cover;
            } else {
                decay_clipped = true;
            }
        } else {
            decay_clipped = true;
        }
        radii[static_cast<size_t>(d)] = std::max(r, t * 1e-6);
    }
    res.tail_bound = decay_clipped ? m_bound * k.tail_mass(r_decay) : 0.0;

    QuadResult q;
    if (n == 1) {
        auto g = [&](double u) { return f.eval1(x[0] - u) * k.value1(u); };
        q = symmetric_panels_1d(g, 0.0, radii[0], t, half_tol, budget.max_points_1d);
    } else {
        auto g = [&](const Point& u) {
            Point y;
            for (int d = 0; d < 3; ++d) y[static_cast<size_t>(d)] = x[static_cast<size_t>(d)] - u[static_cast<size_t>(d)];
            return f(y) * k.value(u);
        };
        q = symmetric_panels_nd(n, g, Point{}, radii, t, half_tol, budget.max_points_nd);
    }
    if (!q.converged) {
        throw BudgetExceeded("convolution quadrature did not converge within the point budget");
    }
    res.value = q.value;
    res.quad_error = q.err_est;
    res.points = q.points;
    return res;
}

double convolve_at(const FunctionSpec& f, const ScaledKernel& k, const Point& x,
                   const QuadBudget& budget) {
    return convolve_at_detail(f, k, x, budget).value;
}

double convolve_at1(const FunctionSpec& f, const ScaledKernel& k, double x,
                    const QuadBudget& budget) {
    return convolve_at_detail(f, k, point1(x), budget).value;
}

ApproximationReport sweep(const FunctionSpec& f, const Kernel& k, std::span<const double> ts,
                          const Box& K, int grid_per_axis, const QuadBudget& budget) {
    if (ts.empty()) throw std::invalid_argument("sweep needs at least one t value");
    for (size_t i = 0; i < ts.size(); ++i) {
        if (!(ts[i] > 0.0)) throw std::invalid_argument("sweep t values must be positive");
        if (i > 0 && !(ts[i] < ts[i - 1])) {
            throw std::invalid_argument("sweep t values must be decreasing");
        }
    }
    if (K.dim != f.dim()) throw DimensionMismatch("box and function dimensions differ");
    if (f.dim() == 1) {
        for (const Breakpoint& b : f.breakpoints()) {
            if (b.is_jump() && b.x > K.axes[0].lo && b.x < K.axes[0].hi) {
                throw std::invalid_argument("sweep requires f continuous on K");
            }
        }
    }
    if (grid_per_axis < 2) throw std::invalid_argument("sweep needs at least 2 grid points");

    // Uniform evaluation grid, endpoints included.
    std::vector<Point> grid;
    const int n = K.dim;
    std::array<int, 3> idx{};
    std::array<int, 3> counts{1, 1, 1};
    for (int d = 0; d < n; ++d) counts[static_cast<size_t>(d)] = grid_per_axis;
    for (idx[0] = 0; idx[0] < counts[0]; ++idx[0]) {
        for (idx[1] = 0; idx[1] < counts[1]; ++idx[1]) {
            for (idx[2] = 0; idx[2] < counts[2]; ++idx[2]) {
                Point p{};
                for (int d = 0; d < n; ++d) {
                    const Interval& iv = K.axes[static_cast<size_t>(d)];
                    p[static_cast<size_t>(d)] =
                        iv.lo + iv.width() * idx[static_cast<size_t>(d)] / (grid_per_axis - 1);
                }
                grid.push_back(p);
            }
        }
    }

    ApproximationReport report;
    {
        std::ostringstream os;
        os << grid_per_axis << " points per axis on";
        for (int d = 0; d < n; ++d) {
            os << " [" << K.axes[static_cast<size_t>(d)].lo << "," << K.axes[static_cast<size_t>(d)].hi << "]";
        }
        report.grid_desc = os.str();
    }

    for (double t : ts) {
        ScaledKernel kt(k, t);
        SweepEntry entry;
        entry.t = t;
        for (const Point& p : grid) {
            ConvolveResult r = convolve_at_detail(f, kt, p, budget);
            entry.sup_error = std::max(entry.sup_error, std::abs(r.value - f(p)));
            entry.tail_bound = std::max(entry.tail_bound, r.tail_bound);
            entry.grid_points = std::max(entry.grid_points, r.points);
        }
        report.entries.push_back(entry);
    }

    if (report.entries.size() >= 3) {
        const size_t z = report.entries.size();
        bool mono = report.entries[z - 1].sup_error <= report.entries[z - 2].sup_error + 1e-6 &&
                    report.entries[z - 2].sup_error <= report.entries[z - 3].sup_error + 1e-6;
        report.notes = mono ? "final three errors nonincreasing"
                            : "warning: final three errors not monotone";
    }
    return report;
}

double jump_value(const FunctionSpec& f, const ScaledKernel& k, double x,
                  const QuadBudget& budget) {
    if (f.dim() != 1 || k.dim() != 1) {
        throw DimensionMismatch("jump diagnostics are one-dimensional");
    }
    if (!k.parity_even()) throw NotEven("jump_value requires an even kernel");
    bool declared = false;
    for (const Breakpoint& b : f.breakpoints()) {
        if (b.x == x) {
            declared = true;
            break;
        }
    }
    if (!declared) throw std::invalid_argument("x is not a declared breakpoint");
    return convolve_at1(f, k, x, budget);
}

namespace {

// Iterated one-dimensional convolution along axis d and deeper.
double iterated_axis(const FunctionSpec& f, const std::vector<ScaledKernel>& factors,
                     const Point& x, Point& shift, int d, double per_axis_tol, long cap) {
    const int n = f.dim();
    const ScaledKernel& kd = factors[static_cast<size_t>(d)];
    const double t = kd.t();

    double r = t;
    const double m_bound = f.bound();
    while (m_bound * kd.tail_mass(r) > 0.5 * per_axis_tol && r < 1e18) r *= 2.0;
    if (std::isfinite(f.support_radius())) {
        double cover = std::abs(x[static_cast<size_t>(d)]) + f.support_radius();
        r = std::min(r, cover);
    }
    r = std::max(r, t * 1e-6);

    auto g = [&](double u) -> double {
        shift[static_cast<size_t>(d)] = u;
        double kv = kd.value1(u);
        if (kv == 0.0) return 0.0;
        double inner;
        if (d + 1 == n) {
            Point y;
            for (int j = 0; j < 3; ++j) y[static_cast<size_t>(j)] = x[static_cast<size_t>(j)] - shift[static_cast<size_t>(j)];
            inner = f(y);
        } else {
            inner = iterated_axis(f, factors, x, shift, d + 1, per_axis_tol, cap);
        }
        return kv * inner;
    };
    QuadResult q = symmetric_panels_1d(g, 0.0, r, t, 0.5 * per_axis_tol, cap);
    shift[static_cast<size_t>(d)] = 0.0;
    if (!q.converged) throw BudgetExceeded("iterated convolution did not converge");
    return q.value;
}

}  // namespace

double convolve_tensor(const FunctionSpec& f, const Kernel& tensor_kernel, double t,
                       const Point& x, const QuadBudget& budget) {
    const auto* shape = std::get_if<TensorShape>(&tensor_kernel.shape());
    if (!shape) throw std::invalid_argument("convolve_tensor requires a tensor kernel");
    const int n = tensor_kernel.dim();
    if (n > 3) throw DimensionLimit("tensor convolution supports dimensions 1..3");
    if (f.dim() != n) throw DimensionMismatch("function and kernel dimensions differ");

    std::vector<ScaledKernel> factors;
    factors.reserve(shape->factors.size());
    for (const Kernel& th : shape->factors) factors.emplace_back(th, t);

    if (f.is_separable() && static_cast<int>(f.factors().size()) == n) {
        // Fubini: the convolution factors exactly.
        double prod_bound = 1.0;
        for (const FunctionSpec& fac : f.factors()) prod_bound *= std::max(1.0, fac.bound());
        double prod = 1.0;
        for (int d = 0; d < n; ++d) {
            QuadBudget sub = budget;
            sub.tol = budget.tol / (2.0 * n * std::max(1.0, prod_bound));
            prod *= convolve_at1(f.factors()[static_cast<size_t>(d)], factors[static_cast<size_t>(d)],
                                 x[static_cast<size_t>(d)], sub);
        }
        return prod;
    }

    Point shift{};
    const double per_axis_tol = budget.tol / n;
    return iterated_axis(f, factors, x, shift, 0, per_axis_tol, budget.max_points_1d);
}

namespace {

bool radial_audit(const Kernel& k) {
    if (std::holds_alternative<GaussianShape>(k.shape()) ||
        std::holds_alternative<RadialShape>(k.shape())) {
        return true;
    }
    if (k.dim() == 1) return k.parity_even();
    // Numeric audit: the value must be constant on spheres.
    double max_abs = std::abs(k.value(Point{}));
    for (double r : {0.3, 0.7, 1.3}) {
        double lo = 1e300;
        double hi = -1e300;
        for (int i = 0; i < 32; ++i) {
            double ang = 2.0 * std::numbers::pi * i / 32.0;
            Point p{r * std::cos(ang), r * std::sin(ang), 0.0};
            double v = k.value(p);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            max_abs = std::max(max_abs, std::abs(v));
        }
        if (hi - lo > 1e-10 * std::max(1e-300, max_abs)) return false;
    }
    return true;
}

}  // namespace

double commutation_defect(const FunctionSpec& f, const Kernel& radial_kernel, double t,
                          const OrthogonalMap& map, std::span<const Point> pts,
                          const QuadBudget& budget) {
    if (radial_kernel.dim() != 2 && radial_kernel.dim() != 3) {
        throw DimensionLimit("commutation check runs in dimensions 2 and 3");
    }
    if (f.dim() != radial_kernel.dim() || map.dim() != f.dim()) {
        throw DimensionMismatch("function, kernel and map dimensions differ");
    }
    if (!radial_audit(radial_kernel)) throw NotRadial("kernel failed the radial audit");

    ScaledKernel kt(radial_kernel, t);
    FunctionSpec f_rot = f.composed_with(map);
    double defect = 0.0;
    for (const Point& p : pts) {
        double lhs = convolve_at(f_rot, kt, p, budget);
        double rhs = convolve_at(f, kt, map.apply(p), budget);
        defect = std::max(defect, std::abs(lhs - rhs));
    }
    return defect;
}

}  // namespace mollify
