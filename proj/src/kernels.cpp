#include "mollify/kernels.hpp"

#include <cmath>
#include <numbers>

#include "mollify/quadrature.hpp"

namespace mollify {

double sphere_surface(int dim) {
    switch (dim) {
        case 1: return 2.0;
        case 2: return 2.0 * std::numbers::pi;
        case 3: return 4.0 * std::numbers::pi;
        default: throw DimensionLimit("kernel dimension must be 1..3");
    }
}

namespace {

// Tighter than the 1e-10 catalog tolerance so closed-form identities like
// the scaled Poisson kernel hold at 1e-12 relative.
constexpr double kNormalizeTol = 1e-12;
constexpr double kTailTarget = 1e-13;
constexpr long kQuadCap1d = 1L << 22;
constexpr long kQuadCapNd = 1L << 24;

double eval_shape_raw(const KernelShape& shape, int dim, const Point& x) {
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, RationalShape>) {
                return s.r.eval_real(x[0]);
            } else if constexpr (std::is_same_v<T, GaussianShape>) {
                double n2 = 0.0;
                for (int d = 0; d < dim; ++d) n2 += x[static_cast<size_t>(d)] * x[static_cast<size_t>(d)];
                return std::exp(-n2);
            } else if constexpr (std::is_same_v<T, BumpShape>) {
                double u = x[0] / s.radius;
                double w = 1.0 - u * u;
                return w > 0.0 ? std::exp(-1.0 / w) : 0.0;
            } else if constexpr (std::is_same_v<T, TensorShape>) {
                double p = 1.0;
                for (size_t j = 0; j < s.factors.size(); ++j) p *= s.factors[j].value1(x[j]);
                return p;
            } else if constexpr (std::is_same_v<T, RadialShape>) {
                return s.profile(norm(x, dim));
            } else {
                return s.raw(x);
            }
        },
        shape);
}

// Truncation radius from the Eq-style decay bound: grows until
// decay_c * surface / R < kTailTarget.
double radius_from_decay(double decay_c, int dim) {
    double r = 1.0;
    while (decay_c * sphere_surface(dim) / r >= kTailTarget) {
        r *= 2.0;
        if (r > 1e18) break;
    }
    return r;
}

}  // namespace

double Kernel::value(const Point& x) const {
    if (std::isfinite(support_radius_) && norm(x, dim_) > support_radius_) return 0.0;
    // Rational shapes carry the normalization in their numerator; tensor
    // factors are each normalized already.
    if (std::holds_alternative<TensorShape>(shape_) ||
        std::holds_alternative<RationalShape>(shape_)) {
        return eval_shape_raw(shape_, dim_, x);
    }
    return norm_factor_ * eval_shape_raw(shape_, dim_, x);
}

double Kernel::value1(double x) const {
    return value(point1(x));
}

double Kernel::tail_mass(double rho) const {
    if (rho <= 0.0) return 1.0;
    if (std::isfinite(support_radius_) && rho >= support_radius_) return 0.0;

    double bound = 1.0;
    if (decay_c_ > 0.0) bound = std::min(bound, decay_c_ * sphere_surface(dim_) / rho);

    if (std::holds_alternative<GaussianShape>(shape_)) {
        // Closed-form tails of exp(-|x|^2)/pi^{n/2}.
        double g = std::exp(-rho * rho);
        double sharp;
        if (dim_ == 1) sharp = g;
        else if (dim_ == 2) sharp = g;
        else sharp = (2.0 * rho / std::sqrt(std::numbers::pi) + 1.0) * g;
        bound = std::min(bound, sharp);
    } else if (const auto* tensor = std::get_if<TensorShape>(&shape_)) {
        if (nonnegative_) {
            // |x| > rho forces some |x_j| > rho/sqrt(n); union bound over axes.
            double sum = 0.0;
            double per_axis = rho / std::sqrt(static_cast<double>(dim_));
            for (const Kernel& f : tensor->factors) sum += f.tail_mass(per_axis);
            bound = std::min(bound, sum);
        }
    }
    return bound;
}

class KernelBuilder {
public:
    static Kernel build(int dim, KernelShape shape, double decay_c, double norm_factor,
                        bool parity_even, bool nonnegative, double support_radius) {
        Kernel k;
        k.dim_ = dim;
        k.shape_ = std::move(shape);
        k.decay_c_ = decay_c;
        k.norm_factor_ = norm_factor;
        k.parity_even_ = parity_even;
        k.nonnegative_ = nonnegative;
        k.support_radius_ = support_radius;
        return k;
    }
};

namespace {

// Audit-grid maximization of (1 + |x|^{n+1}) |phi(x)| along the axes plus
// random directions, times a 1.5 safety factor.
double audit_decay_c(const std::function<double(const Point&)>& value, int dim) {
    std::mt19937_64 rng(0x5eedULL);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<Point> dirs;
    for (int d = 0; d < dim; ++d) {
        Point p{};
        p[static_cast<size_t>(d)] = 1.0;
        dirs.push_back(p);
    }
    for (int i = 0; i < 24; ++i) {
        Point p{};
        double n2 = 0.0;
        for (int d = 0; d < dim; ++d) {
            p[static_cast<size_t>(d)] = unit(rng);
            n2 += p[static_cast<size_t>(d)] * p[static_cast<size_t>(d)];
        }
        if (n2 < 1e-12) continue;
        double inv = 1.0 / std::sqrt(n2);
        for (int d = 0; d < dim; ++d) p[static_cast<size_t>(d)] *= inv;
        dirs.push_back(p);
    }

    double best = 0.0;
    auto probe = [&](double r) {
        for (const Point& dir : dirs) {
            Point x{};
            for (int d = 0; d < dim; ++d) x[static_cast<size_t>(d)] = r * dir[static_cast<size_t>(d)];
            double s = (1.0 + std::pow(r, dim + 1)) * std::abs(value(x));
            best = std::max(best, s);
        }
    };
    for (int i = 0; i <= 400; ++i) probe(10.0 * i / 400.0);
    for (double r = 10.0; r <= 1e6; r *= 1.3) probe(r);
    return 1.5 * best;
}

bool audit_nonnegative(const std::function<double(const Point&)>& value, int dim, double reach) {
    std::mt19937_64 rng(0xfeedULL);
    std::uniform_real_distribution<double> u(-reach, reach);
    for (int i = 0; i < 2000; ++i) {
        Point x{};
        for (int d = 0; d < dim; ++d) x[static_cast<size_t>(d)] = u(rng);
        if (value(x) < -1e-12) return false;
    }
    return true;
}

double integrate_raw(const RawKernel& raw) {
    const bool compact = std::isfinite(raw.support_radius);
    if (raw.dim == 1) {
        auto g = [&](double x) { return raw.eval(point1(x)); };
        if (compact) {
            QuadResult q = symmetric_panels_1d(g, 0.0, raw.support_radius, raw.support_radius,
                                               kNormalizeTol, kQuadCap1d);
            return q.value;
        }
        if (raw.decay_c) {
            double r = radius_from_decay(*raw.decay_c, 1);
            QuadResult q = symmetric_panels_1d(g, 0.0, r, 1.0, kNormalizeTol, kQuadCap1d);
            return q.value;
        }
        // No metadata: double the radius until the integral stabilizes.
        double r = 1.0;
        double prev = symmetric_panels_1d(g, 0.0, r, 1.0, kNormalizeTol, kQuadCap1d).value;
        int stable = 0;
        for (int k = 0; k < 48; ++k) {
            r *= 2.0;
            double cur = symmetric_panels_1d(g, 0.0, r, 1.0, kNormalizeTol, kQuadCap1d).value;
            if (std::abs(cur - prev) < kNormalizeTol * std::max(1.0, std::abs(cur))) {
                if (++stable >= 2) return cur;
            } else {
                stable = 0;
            }
            prev = cur;
        }
        throw NonIntegrable("integral did not stabilize under radius doubling");
    }

    // n-d general evaluator: centered box quadrature.
    double r;
    if (compact) {
        r = raw.support_radius;
    } else if (raw.decay_c) {
        r = radius_from_decay(*raw.decay_c, raw.dim);
    } else {
        r = 0.0;  // resolved below by stabilization
    }
    auto run = [&](double radius) {
        std::array<double, 3> radii{radius, radius, radius};
        return symmetric_panels_nd(raw.dim, raw.eval, Point{}, radii, 1.0, kNormalizeTol, kQuadCapNd)
            .value;
    };
    if (r > 0.0) return run(r);
    double radius = 1.0;
    double prev = run(radius);
    int stable = 0;
    for (int k = 0; k < 24; ++k) {
        radius *= 2.0;
        double cur = run(radius);
        if (std::abs(cur - prev) < 1e-8 * std::max(1.0, std::abs(cur))) {
            if (++stable >= 2) return cur;
        } else {
            stable = 0;
        }
        prev = cur;
    }
    throw NonIntegrable("integral did not stabilize under radius doubling");
}

}  // namespace

Kernel normalize(const RawKernel& raw) {
    if (raw.dim < 1 || raw.dim > 3) throw DimensionLimit("kernel dimension must be 1..3");
    if (!raw.eval) throw std::invalid_argument("normalize requires an evaluator");

    const double integral = integrate_raw(raw);
    if (std::abs(integral) < 1e-12) throw ZeroIntegral("raw kernel integral is below 1e-12");
    const double nf = 1.0 / integral;

    auto normalized = [eval = raw.eval, nf](const Point& x) { return nf * eval(x); };
    double decay = raw.decay_c ? std::abs(nf) * *raw.decay_c : audit_decay_c(normalized, raw.dim);
    double reach = std::isfinite(raw.support_radius) ? raw.support_radius : 8.0;
    bool nonneg = audit_nonnegative(normalized, raw.dim, reach);

    return KernelBuilder::build(raw.dim, CustomShape{raw.eval}, decay, nf, raw.parity_even, nonneg,
                                raw.support_radius);
}

Kernel make_rational_kernel(RationalFunction r, std::optional<double> decay_c) {
    RationalFunction tagged = r.kernel_tag() ? r : make_kernel_rational(r.num(), r.den());
    if (!tagged.has_real_coeffs()) {
        throw std::invalid_argument("rational kernel needs real coefficients");
    }

    RawKernel raw;
    raw.dim = 1;
    raw.eval = [tagged](const Point& x) { return tagged.eval_real(x[0]); };
    if (decay_c) {
        raw.decay_c = *decay_c;
    } else {
        // (1+x^2)|r(x)| is bounded because deg(den) >= deg(num) + 2; grid max
        // plus the asymptotic limit when the degree gap is exactly 2.
        double best = 0.0;
        for (int i = 0; i <= 4000; ++i) {
            double x = -200.0 + 0.1 * i;
            best = std::max(best, (1.0 + x * x) * std::abs(tagged.eval_real(x)));
        }
        if (tagged.den().degree() == tagged.num().degree() + 2) {
            best = std::max(best, std::abs(tagged.num().leading() / tagged.den().leading()));
        }
        raw.decay_c = 1.5 * best;
    }
    raw.parity_even = true;
    for (int i = 1; i <= 100; ++i) {
        double x = 0.08 * i;
        if (std::abs(tagged.eval_real(x) - tagged.eval_real(-x)) >
            1e-12 * std::max(1.0, std::abs(tagged.eval_real(x)))) {
            raw.parity_even = false;
            break;
        }
    }

    const double integral = integrate_raw(raw);
    if (std::abs(integral) < 1e-12) throw ZeroIntegral("rational kernel integral is below 1e-12");
    const double nf = 1.0 / integral;

    // Fold the normalization into the numerator so rational() hands back the
    // unit-integral function directly.
    RationalFunction norm_rat = make_kernel_rational(Cx(nf) * tagged.num(), tagged.den());
    double decay = std::abs(nf) * *raw.decay_c;
    bool nonneg = audit_nonnegative([&](const Point& x) { return norm_rat.eval_real(x[0]); }, 1, 8.0);

    return KernelBuilder::build(1, RationalShape{std::move(norm_rat)}, decay, nf, raw.parity_even,
                                nonneg, kInfiniteSupport);
}

Kernel make_gaussian(int dim) {
    if (dim < 1 || dim > 3) throw DimensionLimit("kernel dimension must be 1..3");
    // Radial reduction; exp(-s^2) underflows to 0 past s = 40, so a fixed
    // radius of 64 is exact at double precision.
    auto radial = [](double s) { return std::exp(-s * s); };
    QuadResult q = one_sided_panels(
        [&](double s) { return radial(s) * std::pow(s, dim - 1); }, 0.0, 64.0, 1.0, kNormalizeTol,
        kQuadCap1d);
    const double integral = sphere_surface(dim) * q.value;
    const double nf = 1.0 / integral;

    double decay;
    if (dim == 1) {
        decay = nf;  // (1+x^2) e^{-x^2} peaks at 1
    } else {
        auto value = [&](const Point& x) {
            double n2 = 0.0;
            for (int d = 0; d < dim; ++d) n2 += x[static_cast<size_t>(d)] * x[static_cast<size_t>(d)];
            return nf * std::exp(-n2);
        };
        decay = audit_decay_c(value, dim);
    }
    return KernelBuilder::build(dim, GaussianShape{}, decay, nf, true, true, kInfiniteSupport);
}

Kernel make_bump(double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("bump radius must be positive");
    RawKernel raw;
    raw.dim = 1;
    raw.support_radius = radius;
    raw.parity_even = true;
    raw.eval = [radius](const Point& x) {
        double u = x[0] / radius;
        double w = 1.0 - u * u;
        return w > 0.0 ? std::exp(-1.0 / w) : 0.0;
    };
    const double integral = integrate_raw(raw);
    if (std::abs(integral) < 1e-12) throw ZeroIntegral("bump integral is below 1e-12");
    const double nf = 1.0 / integral;
    // Support lies in [-radius, radius]; with m = 1 + max(1, radius)^2 the
    // bound C = m * max value works everywhere.
    const double peak = nf * std::exp(-1.0);
    const double decay = (1.0 + std::max(1.0, radius) * std::max(1.0, radius)) * peak;
    return KernelBuilder::build(1, BumpShape{radius}, decay, nf, true, true, radius);
}

Kernel make_tensor(std::vector<Kernel> thetas) {
    const int n = static_cast<int>(thetas.size());
    if (n < 1 || n > 3) throw DimensionLimit("tensor kernel needs 1..3 factors");
    bool even = true;
    bool nonneg = true;
    double support = 0.0;
    bool compact = true;
    for (const Kernel& f : thetas) {
        if (f.dim() != 1) throw std::invalid_argument("tensor factors must be one-dimensional");
        even = even && f.parity_even();
        nonneg = nonneg && f.nonnegative();
        if (f.compact_support()) {
            support += f.support_radius() * f.support_radius();
        } else {
            compact = false;
        }
    }
    double support_radius = compact ? std::sqrt(support) : kInfiniteSupport;

    TensorShape shape{std::move(thetas)};
    auto value = [&shape](const Point& x) {
        double p = 1.0;
        for (size_t j = 0; j < shape.factors.size(); ++j) p *= shape.factors[j].value1(x[j]);
        return p;
    };
    double decay = audit_decay_c(value, n);
    return KernelBuilder::build(n, std::move(shape), decay, 1.0, even, nonneg, support_radius);
}

Kernel make_radial(std::function<double(double)> rho, int dim, std::optional<double> decay_c,
                   double support_radius) {
    if (dim < 1 || dim > 3) throw DimensionLimit("kernel dimension must be 1..3");
    if (!rho) throw std::invalid_argument("make_radial requires a profile");

    auto integrand = [&](double s) { return rho(s) * std::pow(s, dim - 1); };
    double r_max;
    if (std::isfinite(support_radius)) {
        r_max = support_radius;
    } else if (decay_c) {
        r_max = radius_from_decay(*decay_c, dim);
    } else {
        // Stabilization under doubling.
        r_max = -1.0;
        double radius = 1.0;
        double prev = one_sided_panels(integrand, 0.0, radius, 1.0, kNormalizeTol, kQuadCap1d).value;
        int stable = 0;
        for (int k = 0; k < 48 && r_max < 0.0; ++k) {
            radius *= 2.0;
            double cur = one_sided_panels(integrand, 0.0, radius, 1.0, kNormalizeTol, kQuadCap1d).value;
            if (std::abs(cur - prev) < kNormalizeTol * std::max(1.0, std::abs(cur))) {
                if (++stable >= 2) r_max = radius;
            } else {
                stable = 0;
            }
            prev = cur;
        }
        if (r_max < 0.0) throw NonIntegrable("radial integral did not stabilize");
    }

    QuadResult q = one_sided_panels(integrand, 0.0, r_max, 1.0, kNormalizeTol, kQuadCap1d);
    const double integral = sphere_surface(dim) * q.value;
    if (std::abs(integral) < 1e-12) throw ZeroIntegral("radial kernel integral is below 1e-12");
    const double nf = 1.0 / integral;

    RadialShape shape{std::move(rho)};
    auto value = [&shape, nf, dim](const Point& x) { return nf * shape.profile(norm(x, dim)); };
    double decay = decay_c ? std::abs(nf) * *decay_c : audit_decay_c(value, dim);
    bool nonneg = audit_nonnegative(value, dim, std::isfinite(support_radius) ? support_radius : 8.0);

    return KernelBuilder::build(dim, std::move(shape), decay, nf, true, nonneg, support_radius);
}

const Kernel& kernel_by_name(const std::string& name) {
    if (name == "poisson") {
        // Raw 1/(1+x^2) <= 2/(1+x^2); normalization by 1/pi lands the kernel
        // constant at 2/pi.
        static const Kernel k = make_rational_kernel(
            RationalFunction(Polynomial::constant(1.0),
                             Polynomial::from_real(std::vector<double>{1.0, 0.0, 1.0})),
            2.0);
        return k;
    }
    if (name == "poisson2") {
        // Raw 1/(1+x^2)^2: (1+x^2) * raw <= 1; normalized constant 2/pi.
        static const Kernel k = make_rational_kernel(
            RationalFunction(Polynomial::constant(1.0),
                             Polynomial::from_real(std::vector<double>{1.0, 0.0, 2.0, 0.0, 1.0})),
            1.0);
        return k;
    }
    if (name == "gauss") {
        static const Kernel k = make_gaussian(1);
        return k;
    }
    if (name == "gauss2") {
        static const Kernel k = make_gaussian(2);
        return k;
    }
    if (name == "gauss3") {
        static const Kernel k = make_gaussian(3);
        return k;
    }
    if (name == "bump") {
        static const Kernel k = make_bump(1.0);
        return k;
    }
    throw std::invalid_argument("unknown kernel: " + name);
}

ScaledKernel::ScaledKernel(Kernel base, double t) : base_(std::move(base)), t_(t) {
    if (!(t > 0.0)) throw NonPositiveScale("scale parameter must be positive");
    inv_t_ = 1.0 / t;
    t_pow_neg_n_ = std::pow(inv_t_, base_.dim());
}

double ScaledKernel::value(const Point& x) const {
    Point u{};
    for (int d = 0; d < base_.dim(); ++d) u[static_cast<size_t>(d)] = x[static_cast<size_t>(d)] * inv_t_;
    return t_pow_neg_n_ * base_.value(u);
}

double ScaledKernel::value1(double x) const {
    return t_pow_neg_n_ * base_.value1(x * inv_t_);
}

RationalFunction ScaledKernel::rational() const {
    const auto* rs = std::get_if<RationalShape>(&base_.shape());
    if (!rs) throw std::invalid_argument("kernel does not have rational shape");
    return rs->r.translate_scale(t_, 0.0);
}

ScaledKernel scale(const Kernel& k, double t) {
    return ScaledKernel(k, t);
}

double ball_mass(const Kernel& k, double t, double r) {
    if (!(t > 0.0)) throw NonPositiveScale("scale parameter must be positive");
    if (!(r > 0.0)) throw std::invalid_argument("ball radius must be positive");
    ScaledKernel kt(k, t);

    if (k.dim() == 1) {
        QuadResult q = symmetric_panels_1d([&](double x) { return kt.value1(x); }, 0.0, r, t,
                                           1e-10, kQuadCap1d);
        return q.value;
    }
    const bool radial = std::holds_alternative<GaussianShape>(k.shape()) ||
                        std::holds_alternative<RadialShape>(k.shape());
    if (radial) {
        auto g = [&](double s) {
            return kt.value(point1(s)) * std::pow(s, k.dim() - 1);
        };
        QuadResult q = one_sided_panels(g, 0.0, r, t, 1e-10, kQuadCap1d);
        return sphere_surface(k.dim()) * q.value;
    }
    // Non-radial n-d: box quadrature with a ball indicator. Coarser than the
    // 1-d and radial paths.
    auto g = [&](const Point& x) { return norm(x, k.dim()) < r ? kt.value(x) : 0.0; };
    std::array<double, 3> radii{r, r, r};
    QuadResult q = symmetric_panels_nd(k.dim(), g, Point{}, radii, t, 1e-7, kQuadCapNd);
    return q.value;
}

}  // namespace mollify
