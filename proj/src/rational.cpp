#include "hlab/rational.hpp"

#include <cmath>

#include "hlab/errors.hpp"

namespace hlab {

std::optional<Rational> to_rational(double x, double tol, long long max_den) {
    if (!std::isfinite(x)) return std::nullopt;
    const bool neg = x < 0.0;
    double rest = std::abs(x);
    // Convergents h/k of the continued fraction of |x|.
    long long h_prev = 1, h = static_cast<long long>(std::floor(rest));
    long long k_prev = 0, k = 1;
    double frac = rest - std::floor(rest);
    for (int iter = 0; iter < 64; ++iter) {
        if (std::abs(static_cast<double>(h) / static_cast<double>(k) - std::abs(x)) <= tol) {
            Rational r(h, k);
            return neg ? Rational(-r) : r;
        }
        if (frac <= 0.0) break;
        const double inv = 1.0 / frac;
        const double a_d = std::floor(inv);
        if (a_d > 1e12) break;
        const auto a = static_cast<long long>(a_d);
        frac = inv - a_d;
        const long long h_next = a * h + h_prev;
        const long long k_next = a * k + k_prev;
        if (k_next > max_den) break;
        h_prev = h;
        h = h_next;
        k_prev = k;
        k = k_next;
    }
    return std::nullopt;
}

Rational rational_from_text(const std::string& s) {
    try {
        return Rational(s);
    } catch (const std::exception&) {
        throw ValidationError("not a rational number: '" + s + "'");
    }
}

}  // namespace hlab
