#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "mollify/convolve.hpp"
#include "mollify/funcspec.hpp"
#include "mollify/kernels.hpp"
#include "mollify/ratfun.hpp"

namespace mollify {

struct UnboundedSupport : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegreeOverflow : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NoConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PoleOnInterval : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PoleNearInterval : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CertificationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Finite Riemann sum of translates sum_k w_k * phi_t(x - y_k) with uniform
/// node spacing h and weights w_k = f(y_k) * h.
struct TranslateSum {
    RationalFunction kernel;  // the scaled phi_t shape
    std::vector<double> nodes;
    std::vector<double> weights;
    double spacing = 0.0;

    size_t size() const { return nodes.size(); }
    double operator()(double x) const;
};

/// Riemann-sum approximation of f * phi_t for a rational kernel; nodes are
/// the integer multiples of h inside f's support interval.
TranslateSum riemann_rational(const FunctionSpec& f, const Kernel& rational_kernel, double t,
                              double h);

/// Single rational function equal to the translate sum pointwise. Guarded at
/// 64 terms.
RationalFunction collapse(const TranslateSum& ts);

struct TaylorResult {
    Polynomial poly;
    double tail_bound = 0.0;
};

/// Degree-N Taylor polynomial of coeff*(x+c)^(-l) about z0, with a remainder
/// bound valid on K. Requires the convergence margin
/// rho = |z0 + c| / max_{x in K} |x - z0| to exceed 1 strictly.
TaylorResult taylor_term(const PartialFractionTerm& term, Cx z0, int degree, const Interval& K);

struct PushResult {
    std::vector<PartialFractionTerm> terms;
    double error_bound = 0.0;
    int steps = 0;
};

/// Re-expands an inverse-power term about poles moved outward along the ray
/// from the nearest interval point, step 0.5 * current distance, until the
/// pole sits at least target_dist from K. Each step truncates its expansion
/// with a geometric error bound valid on K; n_step is the minimum truncation
/// width, widened automatically as orders accumulate. Output orders whose
/// raw coefficients would overflow double range are folded into the bound.
PushResult push_pole(const PartialFractionTerm& term, const Interval& K, double target_dist,
                     int n_step);

struct PipelineInfo {
    double t = 0.0;
    double h = 0.0;
    int pushes = 0;
    long terms = 0;
    std::array<double, 3> stage_bounds{};  // mollify / riemann / polynomialize
};

/// Real polynomial with a certified sup-norm bound on an interval; the bound
/// dominates the measured error on a 10*(degree+1)-point Chebyshev audit
/// grid.
struct CertifiedPolynomial {
    Polynomial poly;  // real coefficients
    Interval interval{0.0, 1.0};
    double bound = 0.0;
    double measured_error = 0.0;
    PipelineInfo pipeline;

    int degree() const { return poly.degree(); }
    double operator()(double x) const;
};

/// partial fractions -> pole pushing until the Taylor margin rho >= 2 holds
/// about the interval midpoint -> Taylor expansion with the accumulated
/// bound kept below eps/2. Requires poles at least 1e-6 away from K.
CertifiedPolynomial rational_to_polynomial(const RationalFunction& r, const Interval& K,
                                           double eps);

struct WeierstrassOptions {
    // poisson2 decays one power faster and has a finite first moment, which
    // keeps the mollification scale t moderate; plain poisson is available
    // but drives t (and the certified degree) much harder for kinked
    // targets.
    std::string kernel = "poisson2";
    double t0 = 0.0;  // 0: pick from the interval width
    double h0 = 0.0;  // 0: start at the accepted t
    int measure_grid = 2049;
    int final_grid = 10000;
    int max_t_halvings = 34;
    int max_h_halvings = 26;
};

/// Constructive uniform polynomial approximation of a continuous f on [a,b]:
/// mollify with a rational kernel, Riemann-sum the convolution into
/// translates, then certify a polynomial; stage budgets eps/3 each.
CertifiedPolynomial weierstrass(const FunctionSpec& f, const Interval& K, double eps,
                                const WeierstrassOptions& opts = {});

/// f continued past [a,b] by its endpoint values out to distance b-a, then
/// tapered linearly to zero over another b-a; compactly supported and equal
/// to f on [a,b].
FunctionSpec extend_compact(const FunctionSpec& f, const Interval& K);

/// One product term w * prod_j theta_{j,t}(x_j - y_j) of one-variable
/// functions.
struct ProductTerm {
    double weight = 0.0;
    Point node{};
};

struct SumOfProducts {
    std::vector<ProductTerm> terms;
    std::vector<ScaledKernel> factors;
    Box term_support;  // fixed compact box containing every term's support

    double operator()(const Point& x) const;
};

/// Riemann-sum tensor approximation of f * phi_t by finite sums of products
/// of one-variable functions with supports in a fixed compact box.
SumOfProducts sum_of_products(const FunctionSpec& f, const Kernel& tensor_kernel, double t,
                              double h);

/// Chebyshev-distributed audit points on an interval.
std::vector<double> chebyshev_points(const Interval& iv, int count);

}  // namespace mollify
