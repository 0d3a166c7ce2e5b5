#pragma once

#include <span>
#include <string>
#include <vector>

#include "mollify/funcspec.hpp"
#include "mollify/kernels.hpp"

namespace mollify {

struct DimensionMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotEven : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotRadial : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QuadBudget {
    double tol = 1e-6;
    long max_points_1d = 1L << 22;
    long max_points_nd = 1L << 24;
};

struct ConvolveResult {
    double value = 0.0;
    double tail_bound = 0.0;  // truncation bound actually applied
    double quad_error = 0.0;  // last refinement difference
    long points = 0;
};

/// (f * phi_t)(x) by composite midpoint quadrature on a node set symmetric
/// about x. The window follows the kernel tail bound scaled by t and f's
/// bound, clipped to f's support when that is tighter; tail_bound reports the
/// truncation budget actually applied.
ConvolveResult convolve_at_detail(const FunctionSpec& f, const ScaledKernel& k, const Point& x,
                                  const QuadBudget& budget = {});
double convolve_at(const FunctionSpec& f, const ScaledKernel& k, const Point& x,
                   const QuadBudget& budget = {});
double convolve_at1(const FunctionSpec& f, const ScaledKernel& k, double x,
                    const QuadBudget& budget = {});

struct SweepEntry {
    double t = 0.0;
    double sup_error = 0.0;
    double tail_bound = 0.0;
    long grid_points = 0;  // max quadrature points used at this t
};

struct ApproximationReport {
    std::vector<SweepEntry> entries;
    std::string grid_desc;
    std::string notes;
};

/// Per-t sup of |(f * phi_t)(x) - f(x)| over a uniform grid on K.
/// ts must be positive and decreasing; f may not have a jump strictly
/// inside K.
ApproximationReport sweep(const FunctionSpec& f, const Kernel& k, std::span<const double> ts,
                          const Box& K, int grid_per_axis, const QuadBudget& budget = {});

/// (f * phi_t)(x) at a declared breakpoint with an even kernel; the symmetric
/// node set makes the left/right-limit average exact at finite t.
double jump_value(const FunctionSpec& f, const ScaledKernel& k, double x,
                  const QuadBudget& budget = {});

/// Tensor-kernel convolution as iterated one-dimensional convolutions; for a
/// separable f this factors into a product of one-dimensional convolutions.
double convolve_tensor(const FunctionSpec& f, const Kernel& tensor_kernel, double t,
                       const Point& x, const QuadBudget& budget = {});

/// max over pts of |((f o R) * phi_t)(x) - (f * phi_t)(Rx)| for a radial
/// kernel; bounded by the quadrature budget.
double commutation_defect(const FunctionSpec& f, const Kernel& radial_kernel, double t,
                          const OrthogonalMap& map, std::span<const Point> pts,
                          const QuadBudget& budget = {});

}  // namespace mollify
