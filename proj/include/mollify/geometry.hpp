#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace mollify {

/// Point in R^n for n <= 3; entries past the active dimension are zero.
using Point = std::array<double, 3>;

inline Point point1(double x) { return {x, 0.0, 0.0}; }
inline Point point2(double x, double y) { return {x, y, 0.0}; }
inline Point point3(double x, double y, double z) { return {x, y, z}; }

double norm(const Point& p, int dim);

struct Interval {
    double lo = 0.0;
    double hi = 1.0;

    Interval() = default;
    Interval(double lo_, double hi_);

    double mid() const { return 0.5 * (lo + hi); }
    double halfwidth() const { return 0.5 * (hi - lo); }
    double width() const { return hi - lo; }
    bool contains(double x) const { return x >= lo && x <= hi; }
    double clamp(double x) const;
};

struct Box {
    int dim = 1;
    std::array<Interval, 3> axes;

    static Box interval(double lo, double hi);
    static Box square(double lo, double hi);  // 2-d
    static Box cube(double lo, double hi);    // 3-d
};

/// n x n real matrix with ||R^T R - I||_max <= 1e-12, validated on
/// construction.
class OrthogonalMap {
public:
    OrthogonalMap(int dim, const std::array<std::array<double, 3>, 3>& m);

    static OrthogonalMap identity(int dim);
    static OrthogonalMap rotation2d(double angle);
    static OrthogonalMap random(int dim, std::mt19937_64& rng);

    int dim() const { return dim_; }
    Point apply(const Point& p) const;
    double entry(int i, int j) const { return m_[static_cast<size_t>(i)][static_cast<size_t>(j)]; }

private:
    int dim_;
    std::array<std::array<double, 3>, 3> m_;
};

}  // namespace mollify
