#include "fracid/fotf/roots.hpp"

#include "fracid/errors.hpp"
#include "fracid/fotf/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace fracid {

namespace {

using cplx = std::complex<double>;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Initial approximations from the Newton polygon of |a_i| (Bini's rule).
std::vector<cplx> initial_guesses(std::span<const double> a) {
    const std::size_t n = a.size() - 1;
    std::vector<std::size_t> hull;
    for (std::size_t i = 0; i <= n; ++i) {
        if (a[i] == 0.0) continue;
        const double yi = std::log(std::abs(a[i]));
        while (hull.size() >= 2) {
            const auto i0 = hull[hull.size() - 2], i1 = hull.back();
            const double y0 = std::log(std::abs(a[i0])), y1 = std::log(std::abs(a[i1]));
            // drop i1 if it lies on or below the chord i0 -> i
            const double cross = (static_cast<double>(i1) - static_cast<double>(i0)) * (yi - y0) -
                                 (y1 - y0) * (static_cast<double>(i) - static_cast<double>(i0));
            if (cross >= 0.0) hull.pop_back();
            else break;
        }
        hull.push_back(i);
    }

    std::vector<cplx> z;
    z.reserve(n);
    constexpr double offset = 0.4;
    for (std::size_t h = 1; h < hull.size(); ++h) {
        const std::size_t lo = hull[h - 1], hi = hull[h];
        const std::size_t count = hi - lo;
        const double radius = std::pow(std::abs(a[lo]) / std::abs(a[hi]), 1.0 / static_cast<double>(count));
        for (std::size_t k = 0; k < count; ++k) {
            const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(count) +
                                 2.0 * std::numbers::pi * static_cast<double>(h) / static_cast<double>(n) + offset;
            z.push_back(std::polar(radius, theta));
        }
    }
    return z;
}

struct HornerResult {
    cplx p, dp;
    double bound; // sum |a_i| |z|^i, for the backward-error stopping rule
};

HornerResult horner(std::span<const double> a, cplx z) {
    cplx p = 0.0, dp = 0.0;
    double bound = 0.0;
    const double az = std::abs(z);
    for (std::size_t i = a.size(); i-- > 0;) {
        dp = dp * z + p;
        p = p * z + a[i];
        bound = bound * az + std::abs(a[i]);
    }
    return {p, dp, bound};
}

void pair_conjugates(std::vector<cplx>& roots) {
    constexpr double real_tol = 1e-12;
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < roots.size(); ++i) {
        auto& r = roots[i];
        if (std::abs(r.imag()) <= real_tol * std::max(1.0, std::abs(r))) r = {r.real(), 0.0};
        else if (r.imag() > 0) pos.push_back(i);
        else neg.push_back(i);
    }
    while (!pos.empty() && !neg.empty()) {
        std::size_t bp = 0, bn = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < pos.size(); ++i) {
            for (std::size_t j = 0; j < neg.size(); ++j) {
                const double d = std::abs(roots[pos[i]] - std::conj(roots[neg[j]]));
                if (d < best) {
                    best = d;
                    bp = i;
                    bn = j;
                }
            }
        }
        const cplx mid = 0.5 * (roots[pos[bp]] + std::conj(roots[neg[bn]]));
        roots[pos[bp]] = mid;
        roots[neg[bn]] = std::conj(mid);
        pos.erase(pos.begin() + static_cast<std::ptrdiff_t>(bp));
        neg.erase(neg.begin() + static_cast<std::ptrdiff_t>(bn));
    }
    for (auto i : pos) roots[i] = {roots[i].real(), 0.0};
    for (auto i : neg) roots[i] = {roots[i].real(), 0.0};
}

} // namespace

std::vector<cplx> polynomial_roots(std::span<const double> c_in, const RootOptions& opts) {
    const poly::Coeffs c = poly::trim({c_in.begin(), c_in.end()});
    if (poly::is_zero(c)) throw ArgumentError("root finding: zero polynomial");
    const std::size_t deg = c.size() - 1;
    if (deg == 0) throw ArgumentError("root finding: polynomial has no nonzero coefficient beyond the constant");

    std::size_t zeros = 0;
    while (c[zeros] == 0.0) ++zeros;
    std::vector<double> a(c.begin() + static_cast<std::ptrdiff_t>(zeros), c.end());
    const std::size_t n = a.size() - 1;
    const double lead = a.back();
    for (auto& v : a) v /= lead;

    std::vector<cplx> z;
    if (n == 1) {
        z.push_back(-a[0]);
    } else if (n > 1) {
        z = initial_guesses(a);
        std::vector<char> done(n, 0);
        std::size_t remaining = n;
        int sweep = 0;
        for (; sweep < opts.max_sweeps && remaining > 0; ++sweep) {
            for (std::size_t k = 0; k < n; ++k) {
                if (done[k]) continue;
                const auto h = horner(a, z[k]);
                if (std::abs(h.p) <= 4.0 * kEps * h.bound) {
                    done[k] = 1;
                    --remaining;
                    continue;
                }
                const cplx ratio = h.dp == 0.0 ? cplx(1.0, 0.0) : h.p / h.dp;
                cplx s = 0.0;
                for (std::size_t j = 0; j < n; ++j) {
                    if (j != k) s += 1.0 / (z[k] - z[j]);
                }
                z[k] -= ratio / (1.0 - ratio * s);
            }
        }
        if (remaining > 0) {
            std::ostringstream os;
            os << "Aberth iteration did not converge: " << remaining << " of " << n << " roots unresolved after "
               << sweep << " sweeps (degree " << deg << ")";
            throw NumericalError(os.str());
        }
        for (auto& r : z) {
            for (int s = 0; s < opts.polish_steps; ++s) {
                const auto h = horner(a, r);
                if (h.dp == 0.0 || h.p == 0.0) break;
                const cplx cand = r - h.p / h.dp;
                if (std::abs(horner(a, cand).p) < std::abs(h.p)) r = cand;
                else break;
            }
        }
    }
    z.insert(z.end(), zeros, cplx(0.0, 0.0));
    pair_conjugates(z);

    const double scale = poly::max_abs(c);
    for (const auto& r : z) {
        const double res = std::abs(poly::evaluate(c, r));
        const double bound = opts.residual_scale * scale * std::pow(std::max(1.0, std::abs(r)), static_cast<double>(deg));
        if (!(res <= bound)) {
            std::ostringstream os;
            os.precision(6);
            os << "root residual check failed at " << r << ": |p| = " << res << " > " << bound;
            throw NumericalError(os.str());
        }
    }

    std::sort(z.begin(), z.end(), [](const cplx& x, const cplx& y) {
        const double ax = std::abs(std::arg(x)), ay = std::abs(std::arg(y));
        if (ax != ay) return ax < ay;
        if (x.imag() != y.imag()) return x.imag() > y.imag();
        return std::abs(x) < std::abs(y);
    });
    return z;
}

} // namespace fracid
