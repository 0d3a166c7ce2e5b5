#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mollify/geometry.hpp"
#include "mollify/ratfun.hpp"

namespace mollify {

struct ZeroIntegral : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonIntegrable : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonPositiveScale : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DimensionLimit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Kernel;

/// Unit-integral rational function on the line (normalization folded into the
/// numerator so the stored function itself integrates to 1).
struct RationalShape {
    RationalFunction r;
};
struct GaussianShape {};  // exp(-|x|^2), normalized numerically
struct BumpShape {
    double radius = 1.0;  // exp(-1/(1-(x/radius)^2)) inside, 0 outside
};
struct TensorShape {
    std::vector<Kernel> factors;  // 1-d kernels theta_1..theta_n
};
struct RadialShape {
    std::function<double(double)> profile;  // value = norm * profile(|x|)
};
struct CustomShape {
    std::function<double(const Point&)> raw;
};

using KernelShape =
    std::variant<RationalShape, GaussianShape, BumpShape, TensorShape, RadialShape, CustomShape>;

constexpr double kInfiniteSupport = std::numeric_limits<double>::infinity();

/// Unit-integral mollifier with decay constant decay_c such that
/// |phi(x)| <= decay_c / (1 + |x|^{n+1}), parity flag, and support radius
/// (infinite allowed). Immutable after construction.
class Kernel {
public:
    int dim() const { return dim_; }
    const KernelShape& shape() const { return shape_; }
    double decay_c() const { return decay_c_; }
    double norm_factor() const { return norm_factor_; }
    bool parity_even() const { return parity_even_; }
    bool nonnegative() const { return nonnegative_; }
    double support_radius() const { return support_radius_; }
    bool compact_support() const { return std::isfinite(support_radius_); }

    double value(const Point& x) const;
    double value1(double x) const;  // dim == 1 fast path

    /// Upper bound on the mass of |phi| outside the ball of radius rho.
    double tail_mass(double rho) const;

private:
    friend class KernelBuilder;

    int dim_ = 1;
    KernelShape shape_ = GaussianShape{};
    double decay_c_ = 0.0;
    double norm_factor_ = 1.0;
    bool parity_even_ = false;
    bool nonnegative_ = false;
    double support_radius_ = kInfiniteSupport;
};

/// Raw evaluator plus the metadata normalize() needs to pick a truncation
/// radius. decay_c bounds the *raw* evaluator when present.
struct RawKernel {
    int dim = 1;
    std::function<double(const Point&)> eval;
    std::optional<double> decay_c;
    double support_radius = kInfiniteSupport;
    bool parity_even = false;
};

/// Computes the normalizing factor so the integral over R^n is 1. Truncation
/// radius grows until the decay-bound tail falls below 1e-10; without decay
/// metadata the integral must stabilize under radius doubling.
Kernel normalize(const RawKernel& raw);

Kernel make_rational_kernel(RationalFunction r, std::optional<double> decay_c = std::nullopt);
Kernel make_gaussian(int dim);
Kernel make_bump(double radius = 1.0);
Kernel make_tensor(std::vector<Kernel> thetas);
Kernel make_radial(std::function<double(double)> rho, int dim,
                   std::optional<double> decay_c = std::nullopt,
                   double support_radius = kInfiniteSupport);

/// Catalog lookup: poisson, poisson2, gauss, gauss2, gauss3, bump.
const Kernel& kernel_by_name(const std::string& name);

/// phi_t(x) = t^{-n} phi(t^{-1} x); unit integral is preserved.
class ScaledKernel {
public:
    ScaledKernel(Kernel base, double t);

    const Kernel& base() const { return base_; }
    double t() const { return t_; }
    int dim() const { return base_.dim(); }
    bool parity_even() const { return base_.parity_even(); }
    double support_radius() const { return t_ * base_.support_radius(); }

    double value(const Point& x) const;
    double value1(double x) const;
    double tail_mass(double radius) const { return base_.tail_mass(radius / t_); }

    /// For rational-shape kernels: phi_t as a rational function.
    RationalFunction rational() const;

private:
    Kernel base_;
    double t_;
    double inv_t_;
    double t_pow_neg_n_;
};

ScaledKernel scale(const Kernel& k, double t);

/// Numeric integral of phi_t over the ball of radius r centered at 0.
double ball_mass(const Kernel& k, double t, double r);

/// Surface measure of the unit sphere in R^n, n = 1..3: {2, 2*pi, 4*pi}.
double sphere_surface(int dim);

}  // namespace mollify
