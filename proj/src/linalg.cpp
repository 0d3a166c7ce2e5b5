#include "mollify/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace mollify {

std::vector<Cx> least_squares(std::vector<std::vector<Cx>> a, std::vector<Cx> b) {
    const size_t m = a.size();
    if (m == 0) throw std::invalid_argument("least_squares: empty system");
    const size_t n = a.front().size();
    if (m < n) throw std::invalid_argument("least_squares: underdetermined system");
    if (b.size() != m) throw std::invalid_argument("least_squares: size mismatch");

    // Householder QR, applied column by column to [A | b].
    for (size_t k = 0; k < n; ++k) {
        double norm2 = 0.0;
        for (size_t i = k; i < m; ++i) norm2 += std::norm(a[i][k]);
        double alpha = std::sqrt(norm2);
        if (alpha == 0.0) throw std::runtime_error("least_squares: rank-deficient matrix");

        // Reflector v = x + sign(x_k)*alpha*e_k, where sign keeps v_k large.
        Cx akk = a[k][k];
        Cx phase = (std::abs(akk) > 0.0) ? akk / std::abs(akk) : Cx(1.0);
        Cx vk = akk + phase * alpha;
        std::vector<Cx> v(m - k);
        v[0] = vk;
        for (size_t i = k + 1; i < m; ++i) v[i - k] = a[i][k];
        double vnorm2 = 0.0;
        for (const Cx& x : v) vnorm2 += std::norm(x);
        if (vnorm2 == 0.0) continue;

        auto apply = [&](auto&& column_get, auto&& column_set) {
            Cx dot(0.0);
            for (size_t i = k; i < m; ++i) dot += std::conj(v[i - k]) * column_get(i);
            Cx f = 2.0 * dot / vnorm2;
            for (size_t i = k; i < m; ++i) column_set(i, column_get(i) - f * v[i - k]);
        };
        for (size_t j = k; j < n; ++j) {
            apply([&](size_t i) { return a[i][j]; }, [&](size_t i, Cx val) { a[i][j] = val; });
        }
        apply([&](size_t i) { return b[i]; }, [&](size_t i, Cx val) { b[i] = val; });
    }

    // Back substitution on the upper-triangular part.
    std::vector<Cx> x(n);
    for (size_t k = n; k-- > 0;) {
        Cx acc = b[k];
        for (size_t j = k + 1; j < n; ++j) acc -= a[k][j] * x[j];
        if (std::abs(a[k][k]) < 1e-300) throw std::runtime_error("least_squares: singular R");
        x[k] = acc / a[k][k];
    }
    return x;
}

}  // namespace mollify
