#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "mollify/poly.hpp"

namespace mollify {

struct RealPole : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegreeCondition : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PoleEvaluation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Quotient of two polynomials on the real line. When kernel_tag is set the
/// function is integrable with no real poles: deg(den) >= deg(num) + 2 and
/// every denominator root stays off the real axis by 1e-9 * scale.
class RationalFunction {
public:
    RationalFunction();  // zero function 0/1
    RationalFunction(Polynomial num, Polynomial den);

    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }
    bool kernel_tag() const { return kernel_tag_; }

    Cx operator()(Cx x) const;
    double eval_real(double x) const;  // PoleEvaluation when |den(x)| < 1e-300

    /// x -> t^{-1} r(t^{-1}(x - y)); poles move p -> t*p + y. Preserves the
    /// kernel tag.
    RationalFunction translate_scale(double t, double y) const;

    std::vector<RootCluster> poles() const;
    bool has_real_coeffs(double tol = 1e-12) const;

    /// Real coefficient views, usable when has_real_coeffs(); fast evaluation
    /// path for quadrature loops.
    const std::vector<double>& num_real() const { return num_real_; }
    const std::vector<double>& den_real() const { return den_real_; }

private:
    friend RationalFunction make_kernel_rational(Polynomial num, Polynomial den);

    Polynomial num_;
    Polynomial den_;
    bool kernel_tag_ = false;
    std::vector<double> num_real_;
    std::vector<double> den_real_;

    void cache_real();
};

/// Validates the integrable-kernel invariants and returns the tagged function.
/// Throws DegreeCondition or RealPole when they fail.
RationalFunction make_kernel_rational(Polynomial num, Polynomial den);

/// One partial-fraction building block coeff * (x + c)^(-l), pole at -c.
struct PartialFractionTerm {
    Cx c;
    int order = 1;  // l >= 1
    Cx coeff;

    Cx pole() const { return -c; }
    Cx operator()(Cx x) const;
};

struct PFDecomposition {
    Polynomial poly_part;
    std::vector<PartialFractionTerm> terms;

    Cx operator()(Cx x) const;
};

/// Decomposition into poly_part plus terms covering each pole with orders
/// 1..multiplicity. Coefficients are fitted by least squares on Chebyshev
/// sample points; coefficients below 1e-12 relative are pruned.
PFDecomposition partial_fractions(const RationalFunction& r);

/// Recombine terms and polynomial part over the common denominator
/// prod (x + c_j)^(l_j).
RationalFunction sum_terms(std::span<const PartialFractionTerm> terms,
                           const Polynomial& poly_part = Polynomial());

}  // namespace mollify
