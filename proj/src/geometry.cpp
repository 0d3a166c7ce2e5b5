#include "mollify/geometry.hpp"

#include <cmath>

namespace mollify {

double norm(const Point& p, int dim) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) s += p[static_cast<size_t>(i)] * p[static_cast<size_t>(i)];
    return std::sqrt(s);
}

Interval::Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (!(lo < hi)) throw std::invalid_argument("interval requires lo < hi");
}

double Interval::clamp(double x) const {
    if (x < lo) return lo;
    if (x > hi) return hi;
    return x;
}

Box Box::interval(double lo, double hi) {
    Box b;
    b.dim = 1;
    b.axes[0] = Interval(lo, hi);
    return b;
}

Box Box::square(double lo, double hi) {
    Box b;
    b.dim = 2;
    b.axes[0] = Interval(lo, hi);
    b.axes[1] = Interval(lo, hi);
    return b;
}

Box Box::cube(double lo, double hi) {
    Box b;
    b.dim = 3;
    b.axes[0] = Interval(lo, hi);
    b.axes[1] = Interval(lo, hi);
    b.axes[2] = Interval(lo, hi);
    return b;
}

OrthogonalMap::OrthogonalMap(int dim, const std::array<std::array<double, 3>, 3>& m)
    : dim_(dim), m_(m) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("orthogonal map dimension out of range");
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            double dot = 0.0;
            for (int k = 0; k < dim; ++k) {
                dot += m_[static_cast<size_t>(k)][static_cast<size_t>(i)] *
                       m_[static_cast<size_t>(k)][static_cast<size_t>(j)];
            }
            double target = (i == j) ? 1.0 : 0.0;
            if (std::abs(dot - target) > 1e-12) {
                throw std::invalid_argument("matrix is not orthogonal to 1e-12");
            }
        }
    }
}

OrthogonalMap OrthogonalMap::identity(int dim) {
    std::array<std::array<double, 3>, 3> m{};
    for (int i = 0; i < 3; ++i) m[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1.0;
    return OrthogonalMap(dim, m);
}

OrthogonalMap OrthogonalMap::rotation2d(double angle) {
    std::array<std::array<double, 3>, 3> m{};
    m[0][0] = std::cos(angle);
    m[0][1] = -std::sin(angle);
    m[1][0] = std::sin(angle);
    m[1][1] = std::cos(angle);
    m[2][2] = 1.0;
    return OrthogonalMap(2, m);
}

OrthogonalMap OrthogonalMap::random(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::array<std::array<double, 3>, 3> m{};
    // Gram-Schmidt on random Gaussian columns, twice for orthogonality at 1e-15.
    for (int pass = 0; pass < 1; ++pass) {
        for (int j = 0; j < dim; ++j) {
            std::array<double, 3> v{};
            for (int i = 0; i < dim; ++i) v[static_cast<size_t>(i)] = gauss(rng);
            for (int rep = 0; rep < 2; ++rep) {
                for (int k = 0; k < j; ++k) {
                    double dot = 0.0;
                    for (int i = 0; i < dim; ++i) {
                        dot += v[static_cast<size_t>(i)] *
                               m[static_cast<size_t>(i)][static_cast<size_t>(k)];
                    }
                    for (int i = 0; i < dim; ++i) {
                        v[static_cast<size_t>(i)] -=
                            dot * m[static_cast<size_t>(i)][static_cast<size_t>(k)];
                    }
                }
            }
            double nrm = 0.0;
            for (int i = 0; i < dim; ++i) nrm += v[static_cast<size_t>(i)] * v[static_cast<size_t>(i)];
            nrm = std::sqrt(nrm);
            for (int i = 0; i < dim; ++i) m[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                v[static_cast<size_t>(i)] / nrm;
        }
    }
    for (int i = dim; i < 3; ++i) m[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1.0;
    return OrthogonalMap(dim, m);
}

Point OrthogonalMap::apply(const Point& p) const {
    Point out{};
    for (int i = 0; i < dim_; ++i) {
        double s = 0.0;
        for (int j = 0; j < dim_; ++j) {
            s += m_[static_cast<size_t>(i)][static_cast<size_t>(j)] * p[static_cast<size_t>(j)];
        }
        out[static_cast<size_t>(i)] = s;
    }
    return out;
}

}  // namespace mollify
