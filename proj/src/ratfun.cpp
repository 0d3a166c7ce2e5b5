#include "mollify/ratfun.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "mollify/linalg.hpp"

namespace mollify {

RationalFunction::RationalFunction()
    : num_(), den_(Polynomial::constant(1.0)) {
    cache_real();
}

RationalFunction::RationalFunction(Polynomial num, Polynomial den)
    : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw std::invalid_argument("rational function with zero denominator");
    cache_real();
}

void RationalFunction::cache_real() {
    num_real_ = num_.real_coeffs();
    den_real_ = den_.real_coeffs();
}

Cx RationalFunction::operator()(Cx x) const {
    return num_(x) / den_(x);
}

double RationalFunction::eval_real(double x) const {
    double n = 0.0;
    for (size_t i = num_real_.size(); i-- > 0;) n = n * x + num_real_[i];
    double d = 0.0;
    for (size_t i = den_real_.size(); i-- > 0;) d = d * x + den_real_[i];
    if (std::abs(d) < 1e-300) throw PoleEvaluation("denominator vanishes at evaluation point");
    return n / d;
}

RationalFunction RationalFunction::translate_scale(double t, double y) const {
    if (!(t > 0.0)) throw std::invalid_argument("translate_scale requires t > 0");
    const Cx alpha(1.0 / t);
    const Cx beta(-y / t);
    Polynomial n2 = Cx(1.0 / t) * num_.with_affine_arg(alpha, beta);
    Polynomial d2 = den_.with_affine_arg(alpha, beta);
    RationalFunction out(std::move(n2), std::move(d2));
    out.kernel_tag_ = kernel_tag_;
    return out;
}

std::vector<RootCluster> RationalFunction::poles() const {
    if (den_.degree() < 1) return {};
    return clustered_roots(den_);
}

bool RationalFunction::has_real_coeffs(double tol) const {
    double scale = std::max(num_.max_abs_coeff(), den_.max_abs_coeff());
    return num_.max_imag_coeff() <= tol * scale && den_.max_imag_coeff() <= tol * scale;
}

RationalFunction make_kernel_rational(Polynomial num, Polynomial den) {
    if (den.is_zero()) throw std::invalid_argument("kernel rational with zero denominator");
    if (den.degree() < num.degree() + 2) {
        throw DegreeCondition("integrable kernel needs deg(den) >= deg(num) + 2");
    }
    const double scale = std::max(1.0, cauchy_root_bound(den));
    for (const RootCluster& c : clustered_roots(den)) {
        if (std::abs(c.root.imag()) <= 1e-9 * scale) {
            throw RealPole("denominator root on or near the real axis");
        }
    }
    RationalFunction r(std::move(num), std::move(den));
    r.kernel_tag_ = true;
    return r;
}

Cx PartialFractionTerm::operator()(Cx x) const {
    if (coeff == Cx(0.0)) return Cx(0.0);
    Cx base = x + c;
    if (order > 40) {
        // exp-log form; valid for integer orders and immune to overflow of
        // base^order at high orders.
        return std::exp(std::log(coeff) - static_cast<double>(order) * std::log(base));
    }
    Cx p(1.0);
    for (int i = 0; i < order; ++i) p *= base;
    return coeff / p;
}

Cx PFDecomposition::operator()(Cx x) const {
    Cx acc = poly_part(x);
    for (const PartialFractionTerm& t : terms) acc += t(x);
    return acc;
}

PFDecomposition partial_fractions(const RationalFunction& r) {
    PFDecomposition out;
    if (r.den().degree() == 0) {
        out.poly_part = (Cx(1.0) / r.den().coeff(0)) * r.num();
        return out;
    }

    auto [quot, rem] = divmod(r.num(), r.den());
    out.poly_part = quot;
    if (rem.is_zero()) return out;

    std::vector<RootCluster> poles = clustered_roots(r.den());
    const bool real_input = r.has_real_coeffs();
    if (real_input) {
        // Real-coefficient input: force the pole set into exact conjugate
        // pairs so the decomposition inherits the symmetry.
        const double pair_tol = 1e-6 * std::max(1.0, cauchy_root_bound(r.den()));
        for (RootCluster& p : poles) {
            if (std::abs(p.root.imag()) <= pair_tol) p.root = Cx(p.root.real(), 0.0);
        }
        for (size_t i = 0; i < poles.size(); ++i) {
            if (poles[i].root.imag() <= 0.0) continue;
            for (size_t j = 0; j < poles.size(); ++j) {
                if (poles[j].root.imag() >= 0.0) continue;
                if (std::abs(std::conj(poles[i].root) - poles[j].root) <= pair_tol &&
                    poles[i].multiplicity == poles[j].multiplicity) {
                    Cx mean = 0.5 * (poles[i].root + std::conj(poles[j].root));
                    poles[i].root = mean;
                    poles[j].root = std::conj(mean);
                    break;
                }
            }
        }
    }

    size_t unknowns = 0;
    for (const RootCluster& p : poles) unknowns += static_cast<size_t>(p.multiplicity);

    // Chebyshev-distributed real sample points, skipping any too close to a pole.
    double pole_reach = 1.0;
    for (const RootCluster& p : poles) pole_reach = std::max(pole_reach, std::abs(p.root));
    const double span = 1.0 + 2.0 * pole_reach;
    const size_t want = std::max<size_t>(4 * unknowns, 32);

    std::vector<double> samples;
    size_t m_try = want;
    while (samples.size() < want && m_try < 64 * want) {
        samples.clear();
        for (size_t i = 0; i < m_try; ++i) {
            double x = span * std::cos((2.0 * i + 1.0) * std::numbers::pi / (2.0 * m_try));
            double dist = 1e300;
            for (const RootCluster& p : poles) dist = std::min(dist, std::abs(Cx(x) - p.root));
            if (dist > 1e-3 * span) samples.push_back(x);
        }
        m_try *= 2;
    }
    if (samples.size() < unknowns) {
        throw std::runtime_error("partial_fractions: could not place sample points off the poles");
    }

    std::vector<std::vector<Cx>> a(samples.size(), std::vector<Cx>(unknowns));
    std::vector<Cx> b(samples.size());
    for (size_t i = 0; i < samples.size(); ++i) {
        const Cx x(samples[i]);
        const Cx rhs = rem(x) / r.den()(x);
        const double w = 1.0 / (1.0 + std::abs(rhs));
        size_t col = 0;
        for (const RootCluster& p : poles) {
            Cx base = Cx(1.0) / (x - p.root);
            Cx pw = base;
            for (int l = 1; l <= p.multiplicity; ++l) {
                a[i][col++] = w * pw;
                pw *= base;
            }
        }
        b[i] = w * rhs;
    }

    std::vector<Cx> coef = least_squares(std::move(a), std::move(b));

    if (real_input) {
        // Symmetrize coefficients across conjugate pole pairs and drop the
        // imaginary residue at real poles.
        std::vector<size_t> col_of(poles.size());
        size_t c0 = 0;
        for (size_t i = 0; i < poles.size(); ++i) {
            col_of[i] = c0;
            c0 += static_cast<size_t>(poles[i].multiplicity);
        }
        for (size_t i = 0; i < poles.size(); ++i) {
            if (poles[i].root.imag() == 0.0) {
                for (int l = 0; l < poles[i].multiplicity; ++l) {
                    coef[col_of[i] + static_cast<size_t>(l)] =
                        Cx(coef[col_of[i] + static_cast<size_t>(l)].real(), 0.0);
                }
                continue;
            }
            if (poles[i].root.imag() < 0.0) continue;
            for (size_t j = 0; j < poles.size(); ++j) {
                if (poles[j].root != std::conj(poles[i].root) ||
                    poles[j].multiplicity != poles[i].multiplicity) {
                    continue;
                }
                for (int l = 0; l < poles[i].multiplicity; ++l) {
                    Cx& up = coef[col_of[i] + static_cast<size_t>(l)];
                    Cx& dn = coef[col_of[j] + static_cast<size_t>(l)];
                    up = 0.5 * (up + std::conj(dn));
                    dn = std::conj(up);
                }
                break;
            }
        }
    }

    double cmax = 0.0;
    for (const Cx& c : coef) cmax = std::max(cmax, std::abs(c));
    size_t col = 0;
    for (const RootCluster& p : poles) {
        for (int l = 1; l <= p.multiplicity; ++l, ++col) {
            if (std::abs(coef[col]) < 1e-12 * cmax) continue;
            out.terms.push_back({-p.root, l, coef[col]});
        }
    }
    return out;
}

RationalFunction sum_terms(std::span<const PartialFractionTerm> terms, const Polynomial& poly_part) {
    if (terms.empty()) {
        return RationalFunction(poly_part, Polynomial::constant(1.0));
    }

    // Group by pole location, keeping the max order per pole.
    struct Group {
        Cx c;
        int max_order = 0;
    };
    std::vector<Group> groups;
    double scale = 0.0;
    for (const PartialFractionTerm& t : terms) scale = std::max(scale, std::abs(t.c));
    const double same_tol = 1e-12 * std::max(1.0, scale);
    auto group_of = [&](Cx c) -> Group& {
        for (Group& g : groups) {
            if (std::abs(g.c - c) <= same_tol) return g;
        }
        groups.push_back({c, 0});
        return groups.back();
    };
    for (const PartialFractionTerm& t : terms) {
        Group& g = group_of(t.c);
        g.max_order = std::max(g.max_order, t.order);
    }

    auto linear_power = [](Cx c, int l) {
        Polynomial p = Polynomial::constant(1.0);
        Polynomial lin({c, Cx(1.0)});  // x + c
        for (int i = 0; i < l; ++i) p = p * lin;
        return p;
    };

    Polynomial den = Polynomial::constant(1.0);
    for (const Group& g : groups) den = den * linear_power(g.c, g.max_order);

    Polynomial numsum;
    for (const PartialFractionTerm& t : terms) {
        // den / (x + c)^l, assembled from the group structure.
        Polynomial cof = Polynomial::constant(1.0);
        for (const Group& g : groups) {
            int l = (std::abs(g.c - t.c) <= same_tol) ? g.max_order - t.order : g.max_order;
            cof = cof * linear_power(g.c, l);
        }
        numsum = numsum + t.coeff * cof;
    }
    if (!poly_part.is_zero()) numsum = numsum + poly_part * den;

    return RationalFunction(std::move(numsum), std::move(den));
}

}  // namespace mollify
