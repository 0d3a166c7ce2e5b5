#include "mollify/poly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mollify {

bool finite(Cx z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

namespace {

void strip_trailing_zeros(std::vector<Cx>& c) {
    while (!c.empty() && c.back() == Cx(0.0, 0.0)) c.pop_back();
}

}  // namespace

Polynomial::Polynomial(std::vector<Cx> coeffs) : coeffs_(std::move(coeffs)) {
    for (const Cx& c : coeffs_) {
        if (!finite(c)) throw std::invalid_argument("polynomial coefficient is not finite");
    }
    strip_trailing_zeros(coeffs_);
}

Polynomial Polynomial::constant(Cx c) {
    return Polynomial(std::vector<Cx>{c});
}

Polynomial Polynomial::monomial(int k, Cx lead) {
    if (k < 0) throw std::invalid_argument("monomial degree must be nonnegative");
    std::vector<Cx> c(static_cast<size_t>(k) + 1, Cx(0.0));
    c.back() = lead;
    return Polynomial(std::move(c));
}

Polynomial Polynomial::from_real(std::span<const double> coeffs) {
    std::vector<Cx> c(coeffs.begin(), coeffs.end());
    return Polynomial(std::move(c));
}

Polynomial Polynomial::from_roots(Cx lead, std::span<const Cx> roots) {
    Polynomial p = Polynomial::constant(lead);
    for (Cx r : roots) {
        p = p * Polynomial({-r, Cx(1.0)});
    }
    return p;
}

Cx Polynomial::coeff(int k) const {
    if (k < 0 || k > degree()) return Cx(0.0);
    return coeffs_[static_cast<size_t>(k)];
}

Cx Polynomial::leading() const {
    return coeffs_.empty() ? Cx(0.0) : coeffs_.back();
}

Cx Polynomial::operator()(Cx z) const {
    Cx acc(0.0);
    for (size_t i = coeffs_.size(); i-- > 0;) acc = acc * z + coeffs_[i];
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (coeffs_.size() <= 1) return Polynomial();
    std::vector<Cx> d(coeffs_.size() - 1);
    for (size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * static_cast<double>(k);
    return Polynomial(std::move(d));
}

Polynomial Polynomial::shifted(Cx a) const {
    return with_affine_arg(Cx(1.0), -a);
}

Polynomial Polynomial::with_affine_arg(Cx alpha, Cx beta) const {
    // Horner in the argument polynomial alpha*x + beta.
    Polynomial arg({beta, alpha});
    Polynomial acc;
    for (size_t i = coeffs_.size(); i-- > 0;) {
        acc = acc * arg + Polynomial::constant(coeffs_[i]);
    }
    return acc;
}

Polynomial Polynomial::conjugated() const {
    std::vector<Cx> c(coeffs_.size());
    for (size_t i = 0; i < coeffs_.size(); ++i) c[i] = std::conj(coeffs_[i]);
    return Polynomial(std::move(c));
}

double Polynomial::max_abs_coeff() const {
    double m = 0.0;
    for (const Cx& c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

double Polynomial::max_imag_coeff() const {
    double m = 0.0;
    for (const Cx& c : coeffs_) m = std::max(m, std::abs(c.imag()));
    return m;
}

std::vector<double> Polynomial::real_coeffs() const {
    std::vector<double> r(coeffs_.size());
    for (size_t i = 0; i < coeffs_.size(); ++i) r[i] = coeffs_[i].real();
    return r;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<Cx> c(std::max(a.coeffs_.size(), b.coeffs_.size()), Cx(0.0));
    for (size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
    for (size_t i = 0; i < b.coeffs_.size(); ++i) c[i] += b.coeffs_[i];
    return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    std::vector<Cx> c(std::max(a.coeffs_.size(), b.coeffs_.size()), Cx(0.0));
    for (size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
    for (size_t i = 0; i < b.coeffs_.size(); ++i) c[i] -= b.coeffs_[i];
    return Polynomial(std::move(c));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return Polynomial();
    std::vector<Cx> c(a.coeffs_.size() + b.coeffs_.size() - 1, Cx(0.0));
    for (size_t i = 0; i < a.coeffs_.size(); ++i) {
        for (size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return Polynomial(std::move(c));
}

Polynomial operator*(Cx s, const Polynomial& p) {
    std::vector<Cx> c(p.coeffs_);
    for (Cx& v : c) v *= s;
    return Polynomial(std::move(c));
}

std::pair<Polynomial, Polynomial> divmod(const Polynomial& num, const Polynomial& den) {
    if (den.is_zero()) throw std::invalid_argument("division by zero polynomial");
    if (num.degree() < den.degree()) return {Polynomial(), num};
    std::vector<Cx> rem(num.coeffs());
    const int dq = num.degree() - den.degree();
    std::vector<Cx> quot(static_cast<size_t>(dq) + 1, Cx(0.0));
    const Cx lead = den.leading();
    for (int k = dq; k >= 0; --k) {
        Cx q = rem[static_cast<size_t>(k + den.degree())] / lead;
        quot[static_cast<size_t>(k)] = q;
        for (int j = 0; j <= den.degree(); ++j) {
            rem[static_cast<size_t>(k + j)] -= q * den.coeff(j);
        }
    }
    return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

double cauchy_root_bound(const Polynomial& p) {
    if (p.degree() < 1) return 0.0;
    const double lead = std::abs(p.leading());
    double m = 0.0;
    for (int k = 0; k < p.degree(); ++k) m = std::max(m, std::abs(p.coeff(k)));
    return 1.0 + m / lead;
}

namespace {

// Backward-error style residual scale at z.
double residual_scale(const Polynomial& p, Cx z) {
    double s = 0.0;
    double zp = 1.0;
    const double az = std::abs(z);
    for (int k = 0; k <= p.degree(); ++k) {
        s += std::abs(p.coeff(k)) * zp;
        zp *= az;
    }
    return std::max(s, 1e-300);
}

}  // namespace

std::vector<Cx> find_roots(const Polynomial& p) {
    if (p.degree() < 1) throw std::invalid_argument("find_roots requires degree >= 1");

    // Factor out roots at the origin exactly.
    std::vector<Cx> work = p.coeffs();
    std::vector<Cx> roots;
    while (!work.empty() && work.front() == Cx(0.0)) {
        roots.push_back(Cx(0.0));
        work.erase(work.begin());
    }
    Polynomial q((std::vector<Cx>(work)));
    const int n = q.degree();
    if (n == 0) return roots;
    if (n == 1) {
        roots.push_back(-q.coeff(0) / q.coeff(1));
        return roots;
    }

    const double radius = cauchy_root_bound(q);
    constexpr double kGoldenAngle = 2.0 * std::numbers::pi * 0.6180339887498949;
    std::vector<Cx> z(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        double ang = 2.0 * std::numbers::pi * i / n + kGoldenAngle;
        z[static_cast<size_t>(i)] = radius * Cx(std::cos(ang), std::sin(ang));
    }

    constexpr int kBudget = 500;
    constexpr double kTol = 1e-12;
    const Cx lead = q.leading();
    bool converged = false;
    for (int iter = 0; iter < kBudget && !converged; ++iter) {
        converged = true;
        for (int i = 0; i < n; ++i) {
            Cx denom = lead;
            for (int j = 0; j < n; ++j) {
                if (j != i) denom *= z[static_cast<size_t>(i)] - z[static_cast<size_t>(j)];
            }
            Cx val = q(z[static_cast<size_t>(i)]);
            if (std::abs(val) > kTol * residual_scale(q, z[static_cast<size_t>(i)])) converged = false;
            if (denom != Cx(0.0)) z[static_cast<size_t>(i)] -= val / denom;
        }
    }
    if (!converged) {
        // One more residual pass; the final correction above may have landed it.
        converged = true;
        for (int i = 0; i < n; ++i) {
            if (std::abs(q(z[static_cast<size_t>(i)])) >
                kTol * residual_scale(q, z[static_cast<size_t>(i)])) {
                converged = false;
                break;
            }
        }
    }
    if (!converged) throw NonConvergence("root iteration did not reach residual tolerance");

    // Newton polish for well-conditioned (simple) roots.
    const Polynomial dq = q.derivative();
    for (Cx& r : z) {
        for (int step = 0; step < 3; ++step) {
            Cx d = dq(r);
            if (std::abs(d) < 1e-12 * residual_scale(dq, r)) break;
            Cx cand = r - q(r) / d;
            if (std::abs(q(cand)) < std::abs(q(r))) r = cand; else break;
        }
    }

    roots.insert(roots.end(), z.begin(), z.end());
    return roots;
}

std::vector<RootCluster> cluster_roots(std::vector<Cx> roots, double merge_tol) {
    std::vector<RootCluster> clusters;
    std::vector<bool> used(roots.size(), false);
    for (size_t i = 0; i < roots.size(); ++i) {
        if (used[i]) continue;
        std::vector<size_t> members{i};
        used[i] = true;
        // Grow the cluster transitively.
        for (size_t m = 0; m < members.size(); ++m) {
            for (size_t j = 0; j < roots.size(); ++j) {
                if (used[j]) continue;
                if (std::abs(roots[j] - roots[members[m]]) <= merge_tol) {
                    used[j] = true;
                    members.push_back(j);
                }
            }
        }
        Cx mean(0.0);
        for (size_t m : members) mean += roots[m];
        mean /= static_cast<double>(members.size());
        clusters.push_back({mean, static_cast<int>(members.size())});
    }
    return clusters;
}

std::vector<RootCluster> clustered_roots(const Polynomial& p) {
    return cluster_roots(find_roots(p), 1e-6 * cauchy_root_bound(p));
}

}  // namespace mollify
