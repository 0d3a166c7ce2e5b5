#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mollify/geometry.hpp"
#include "mollify/poly.hpp"

namespace mollify {

/// One-sided limits of f at a point (dimension 1 only). Continuous
/// breakpoints carry equal limits.
struct Breakpoint {
    double x = 0.0;
    double left_limit = 0.0;
    double right_limit = 0.0;

    bool is_jump() const { return left_limit != right_limit; }
    double average() const { return 0.5 * (left_limit + right_limit); }
};

/// Piecewise real polynomial on sorted, non-overlapping intervals; zero
/// outside every piece.
struct PiecewisePoly {
    struct Piece {
        Interval iv;
        Polynomial poly;  // real coefficients
    };
    std::vector<Piece> pieces;

    double operator()(double x) const;
};

/// A bounded target function: evaluator, support radius (infinity allowed),
/// a bound M with |f| <= M, and declared breakpoints with one-sided limits.
class FunctionSpec {
public:
    static FunctionSpec from_lambda(int dim, std::function<double(const Point&)> eval,
                                    double support_radius, double bound,
                                    std::vector<Breakpoint> breakpoints = {});
    static FunctionSpec piecewise(PiecewisePoly pp);
    static FunctionSpec constant(double value, int dim = 1);
    static FunctionSpec separable(std::vector<FunctionSpec> factors);

    int dim() const { return dim_; }
    double support_radius() const { return support_radius_; }
    double bound() const { return bound_; }
    const std::vector<Breakpoint>& breakpoints() const { return breakpoints_; }

    double operator()(const Point& x) const { return eval_(x); }
    double eval1(double x) const { return eval_(point1(x)); }

    bool is_separable() const { return !factors_.empty(); }
    const std::vector<FunctionSpec>& factors() const { return factors_; }

    /// f composed with an orthogonal map: x -> f(Rx). Support and bound carry
    /// over unchanged.
    FunctionSpec composed_with(const OrthogonalMap& r) const;

    /// Audits |f| <= bound on a 1000-point grid and, in dimension 1, that the
    /// declared one-sided limits match the evaluator along x +- 2^-k approach
    /// sequences within 1e-9. Throws std::logic_error on violation.
    void validate() const;

private:
    FunctionSpec() = default;

    int dim_ = 1;
    std::function<double(const Point&)> eval_;
    double support_radius_ = 0.0;
    double bound_ = 0.0;
    std::vector<Breakpoint> breakpoints_;
    std::vector<FunctionSpec> factors_;
};

/// Catalog: hat, step, abs, one, linear, hat2 (radial cone in 2-d),
/// trapezoid (smoothed indicator), boxsmooth2 (trapezoid x trapezoid).
FunctionSpec function_by_name(const std::string& name);

}  // namespace mollify
