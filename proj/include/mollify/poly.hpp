#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

namespace mollify {

using Cx = std::complex<double>;

/// Thrown when the simultaneous root iteration fails to reach its residual
/// tolerance within the iteration budget.
struct NonConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

bool finite(Cx z);

/// Dense univariate polynomial with complex coefficients, ascending degree.
/// The zero polynomial is canonically the empty coefficient sequence, so
/// degree() is -1 for zero and coeffs().size() - 1 otherwise.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<Cx> coeffs);

    static Polynomial constant(Cx c);
    static Polynomial monomial(int k, Cx lead = 1.0);
    static Polynomial from_real(std::span<const double> coeffs);
    static Polynomial from_roots(Cx lead, std::span<const Cx> roots);

    bool is_zero() const { return coeffs_.empty(); }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<Cx>& coeffs() const { return coeffs_; }
    Cx coeff(int k) const;
    Cx leading() const;

    Cx operator()(Cx z) const;

    Polynomial derivative() const;

    /// q with q(x) = p(x - a).
    Polynomial shifted(Cx a) const;

    /// q with q(x) = p(alpha*x + beta).
    Polynomial with_affine_arg(Cx alpha, Cx beta) const;

    Polynomial conjugated() const;

    double max_abs_coeff() const;
    double max_imag_coeff() const;
    std::vector<double> real_coeffs() const;

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(Cx s, const Polynomial& p);

private:
    std::vector<Cx> coeffs_;
};

/// Quotient and remainder of num/den (complex long division).
std::pair<Polynomial, Polynomial> divmod(const Polynomial& num, const Polynomial& den);

/// 1 + max_k |a_k / a_n|; every root lies inside this radius.
double cauchy_root_bound(const Polynomial& p);

struct RootCluster {
    Cx root;
    int multiplicity = 1;
};

/// All complex roots, one entry per multiplicity. Durand-Kerner simultaneous
/// iteration started on the Cauchy-bound circle; budget 500 sweeps, relative
/// residual tolerance 1e-12. Throws NonConvergence past the budget.
std::vector<Cx> find_roots(const Polynomial& p);

/// Greedy merge of roots within merge_tol; merged root is the cluster mean.
std::vector<RootCluster> cluster_roots(std::vector<Cx> roots, double merge_tol);

/// find_roots + clustering at 1e-6 * cauchy_root_bound(p).
std::vector<RootCluster> clustered_roots(const Polynomial& p);

}  // namespace mollify
