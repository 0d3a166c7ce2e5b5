#include "mollify/funcspec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

namespace mollify {

double PiecewisePoly::operator()(double x) const {
    for (size_t i = 0; i < pieces.size(); ++i) {
        const Piece& p = pieces[i];
        if (x < p.iv.lo) break;
        // Half-open on the right except for the final piece, so boundary
        // values come from the right piece.
        const bool last = (i + 1 == pieces.size());
        if (x < p.iv.hi || (last && x <= p.iv.hi)) {
            double acc = 0.0;
            const auto& c = p.poly.coeffs();
            for (size_t k = c.size(); k-- > 0;) acc = acc * x + c[k].real();
            return acc;
        }
    }
    return 0.0;
}

FunctionSpec FunctionSpec::from_lambda(int dim, std::function<double(const Point&)> eval,
                                       double support_radius, double bound,
                                       std::vector<Breakpoint> breakpoints) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("function dimension must be 1..3");
    if (!eval) throw std::invalid_argument("function evaluator required");
    if (!(bound >= 0.0) || !std::isfinite(bound)) {
        throw std::invalid_argument("function bound must be finite and nonnegative");
    }
    if (dim != 1 && !breakpoints.empty()) {
        throw std::invalid_argument("breakpoints are one-dimensional");
    }
    FunctionSpec f;
    f.dim_ = dim;
    f.eval_ = std::move(eval);
    f.support_radius_ = support_radius;
    f.bound_ = bound;
    f.breakpoints_ = std::move(breakpoints);
    std::sort(f.breakpoints_.begin(), f.breakpoints_.end(),
              [](const Breakpoint& a, const Breakpoint& b) { return a.x < b.x; });
    return f;
}

FunctionSpec FunctionSpec::piecewise(PiecewisePoly pp) {
    if (pp.pieces.empty()) throw std::invalid_argument("piecewise function needs pieces");
    std::sort(pp.pieces.begin(), pp.pieces.end(),
              [](const auto& a, const auto& b) { return a.iv.lo < b.iv.lo; });
    for (size_t i = 0; i + 1 < pp.pieces.size(); ++i) {
        if (pp.pieces[i].iv.hi > pp.pieces[i + 1].iv.lo + 1e-15) {
            throw std::invalid_argument("piecewise intervals overlap");
        }
    }

    // Breakpoints at every piece boundary, zero outside the pieces.
    std::vector<Breakpoint> bps;
    auto value_of = [](const PiecewisePoly::Piece& p, double x) {
        double acc = 0.0;
        const auto& c = p.poly.coeffs();
        for (size_t k = c.size(); k-- > 0;) acc = acc * x + c[k].real();
        return acc;
    };
    for (size_t i = 0; i < pp.pieces.size(); ++i) {
        const auto& p = pp.pieces[i];
        double left_at_lo = 0.0;
        if (i > 0 && std::abs(pp.pieces[i - 1].iv.hi - p.iv.lo) <= 1e-15) {
            left_at_lo = value_of(pp.pieces[i - 1], p.iv.lo);
        }
        bps.push_back({p.iv.lo, left_at_lo, value_of(p, p.iv.lo)});
        bool glued_right = (i + 1 < pp.pieces.size()) &&
                           std::abs(p.iv.hi - pp.pieces[i + 1].iv.lo) <= 1e-15;
        if (!glued_right) {
            bps.push_back({p.iv.hi, value_of(p, p.iv.hi), 0.0});
        }
    }

    double reach = 0.0;
    for (const auto& p : pp.pieces) reach = std::max({reach, std::abs(p.iv.lo), std::abs(p.iv.hi)});

    // Bound from a dense per-piece audit.
    double bound = 0.0;
    for (const auto& p : pp.pieces) {
        for (int i = 0; i <= 4096; ++i) {
            double x = p.iv.lo + (p.iv.hi - p.iv.lo) * i / 4096.0;
            bound = std::max(bound, std::abs(value_of(p, x)));
        }
    }

    auto shared = std::make_shared<PiecewisePoly>(std::move(pp));
    return from_lambda(
        1, [shared](const Point& x) { return (*shared)(x[0]); }, reach, bound, std::move(bps));
}

FunctionSpec FunctionSpec::constant(double value, int dim) {
    return from_lambda(
        dim, [value](const Point&) { return value; },
        std::numeric_limits<double>::infinity(), std::abs(value));
}

FunctionSpec FunctionSpec::separable(std::vector<FunctionSpec> factors) {
    const int n = static_cast<int>(factors.size());
    if (n < 1 || n > 3) throw std::invalid_argument("separable function needs 1..3 factors");
    double bound = 1.0;
    double reach = 0.0;
    for (const FunctionSpec& f : factors) {
        if (f.dim() != 1) throw std::invalid_argument("separable factors must be one-dimensional");
        bound *= f.bound();
        reach = std::max(reach, f.support_radius());
    }
    // Support box is the product of factor supports; the circumscribed ball
    // works as the radius.
    double radius = std::isfinite(reach) ? reach * std::sqrt(static_cast<double>(n)) : reach;

    auto shared = std::make_shared<std::vector<FunctionSpec>>(factors);
    FunctionSpec f = from_lambda(
        n,
        [shared](const Point& x) {
            double p = 1.0;
            for (size_t j = 0; j < shared->size(); ++j) p *= (*shared)[j].eval1(x[j]);
            return p;
        },
        radius, bound);
    f.factors_ = std::move(factors);
    return f;
}

FunctionSpec FunctionSpec::composed_with(const OrthogonalMap& r) const {
    if (r.dim() != dim_) throw std::invalid_argument("orthogonal map dimension mismatch");
    FunctionSpec f;
    f.dim_ = dim_;
    f.support_radius_ = support_radius_;
    f.bound_ = bound_;
    auto inner = eval_;
    f.eval_ = [inner, r](const Point& x) { return inner(r.apply(x)); };
    return f;
}

void FunctionSpec::validate() const {
    const double reach = std::isfinite(support_radius_) ? support_radius_ : 8.0;
    std::mt19937_64 rng(0xf00dULL);
    std::uniform_real_distribution<double> u(-reach, reach);
    for (int i = 0; i < 1000; ++i) {
        Point x{};
        for (int d = 0; d < dim_; ++d) x[static_cast<size_t>(d)] = u(rng);
        double v = eval_(x);
        if (!(std::abs(v) <= bound_ * (1.0 + 1e-12) + 1e-300)) {
            throw std::logic_error("function exceeds its declared bound on the audit grid");
        }
    }
    for (const Breakpoint& b : breakpoints_) {
        // Approach sequences x +- 2^-k.
        for (int k = 30; k <= 44; k += 7) {
            double left = eval1(b.x - std::pow(2.0, -k));
            double right = eval1(b.x + std::pow(2.0, -k));
            if (std::abs(left - b.left_limit) > 1e-9 * (1.0 + std::abs(b.left_limit)) ||
                std::abs(right - b.right_limit) > 1e-9 * (1.0 + std::abs(b.right_limit))) {
                throw std::logic_error("declared one-sided limits do not match the evaluator");
            }
        }
    }
}

namespace {

double kInfinityImpl() {
    return std::numeric_limits<double>::infinity();
}

FunctionSpec make_hat() {
    PiecewisePoly pp;
    pp.pieces.push_back({Interval(-1.0, 0.0), Polynomial::from_real(std::vector<double>{1.0, 1.0})});
    pp.pieces.push_back({Interval(0.0, 1.0), Polynomial::from_real(std::vector<double>{1.0, -1.0})});
    return FunctionSpec::piecewise(std::move(pp));
}

FunctionSpec make_step() {
    return FunctionSpec::from_lambda(
        1, [](const Point& x) { return x[0] > 0.0 ? 1.0 : 0.0; }, kInfinityImpl(), 1.0,
        {Breakpoint{0.0, 0.0, 1.0}});
}

FunctionSpec make_abs() {
    PiecewisePoly pp;
    pp.pieces.push_back({Interval(-4.0, 0.0), Polynomial::from_real(std::vector<double>{0.0, -1.0})});
    pp.pieces.push_back({Interval(0.0, 4.0), Polynomial::from_real(std::vector<double>{0.0, 1.0})});
    return FunctionSpec::piecewise(std::move(pp));
}

FunctionSpec make_linear() {
    PiecewisePoly pp;
    pp.pieces.push_back({Interval(-8.0, 8.0), Polynomial::from_real(std::vector<double>{0.0, 1.0})});
    return FunctionSpec::piecewise(std::move(pp));
}

FunctionSpec make_trapezoid() {
    PiecewisePoly pp;
    pp.pieces.push_back({Interval(-1.0, -0.5), Polynomial::from_real(std::vector<double>{2.0, 2.0})});
    pp.pieces.push_back({Interval(-0.5, 0.5), Polynomial::from_real(std::vector<double>{1.0})});
    pp.pieces.push_back({Interval(0.5, 1.0), Polynomial::from_real(std::vector<double>{2.0, -2.0})});
    return FunctionSpec::piecewise(std::move(pp));
}

FunctionSpec make_hat2() {
    return FunctionSpec::from_lambda(
        2, [](const Point& x) { return std::max(0.0, 1.0 - norm(x, 2)); }, 1.0, 1.0);
}

// (1 - x^2)^3 on [-1,1]: compactly supported and twice continuously
// differentiable, so tensor-grid quadrature converges quickly on it.
FunctionSpec make_smoothbump() {
    PiecewisePoly pp;
    pp.pieces.push_back({Interval(-1.0, 1.0),
                         Polynomial::from_real(std::vector<double>{1.0, 0.0, -3.0, 0.0, 3.0, 0.0, -1.0})});
    return FunctionSpec::piecewise(std::move(pp));
}

FunctionSpec make_smoothbump2() {
    return FunctionSpec::from_lambda(
        2,
        [](const Point& x) {
            double w = 1.0 - norm(x, 2) * norm(x, 2);
            return w > 0.0 ? w * w * w : 0.0;
        },
        1.0, 1.0);
}

}  // namespace

FunctionSpec function_by_name(const std::string& name) {
    if (name == "hat") return make_hat();
    if (name == "step") return make_step();
    if (name == "abs") return make_abs();
    if (name == "one") return FunctionSpec::constant(1.0, 1);
    if (name == "linear") return make_linear();
    if (name == "trapezoid") return make_trapezoid();
    if (name == "hat2") return make_hat2();
    if (name == "boxsmooth2") {
        return FunctionSpec::separable({make_trapezoid(), make_trapezoid()});
    }
    if (name == "smoothbump") return make_smoothbump();
    if (name == "smoothbump2") return make_smoothbump2();
    if (name == "smoothbox2") {
        return FunctionSpec::separable({make_smoothbump(), make_smoothbump()});
    }
    throw std::invalid_argument("unknown function: " + name);
}

}  // namespace mollify
