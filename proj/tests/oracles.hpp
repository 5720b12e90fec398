#pragma once

// Test-only oracles, kept independent of the implementation paths they
// check: adaptive Simpson quadrature for transform values and a naive DFT.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracles {

using cplx = std::complex<double>;

namespace detail {

inline cplx simpson(const std::function<cplx(double)>& f, double a, double b, cplx fa, cplx fm,
                    cplx fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline cplx adaptive(const std::function<cplx(double)>& f, double a, double b, cplx fa, cplx fm,
                     cplx fb, cplx whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const cplx fl = f(0.5 * (a + m));
    const cplx fr = f(0.5 * (m + b));
    const cplx left = simpson(f, a, m, fa, fl, fm);
    const cplx right = simpson(f, m, b, fm, fr, fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive(f, a, m, fa, fl, fm, left, tol / 2.0, depth - 1) +
           adaptive(f, m, b, fm, fr, fb, right, tol / 2.0, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of a complex-valued integrand. The range is
/// pre-split into fixed panels so oscillatory integrands cannot alias the
/// top-level error estimate.
inline cplx integrate(const std::function<cplx(double)>& f, double a, double b, double tol = 1e-12) {
    const int panels = 16;
    cplx total(0.0, 0.0);
    for (int p = 0; p < panels; ++p) {
        const double pa = a + (b - a) * p / panels;
        const double pb = a + (b - a) * (p + 1) / panels;
        const cplx fa = f(pa), fb = f(pb), fm = f(0.5 * (pa + pb));
        total += detail::adaptive(f, pa, pb, fa, fm, fb, detail::simpson(f, pa, pb, fa, fm, fb),
                                  tol / panels, 44);
    }
    return total;
}

/// (1/(2pi)) \int_{-1}^{1} sin(k pi (x+1)/2) e^{+i x xi} dx  -- the convention
/// the closed-form expression follows.
inline cplx eigenfunction_transform_quadrature(int k, double xi, double tol = 1e-12) {
    const double kpi = 3.14159265358979323846 * static_cast<double>(k);
    return integrate(
               [&](double x) {
                   return std::sin(kpi * (x + 1.0) / 2.0) * std::polar(1.0, x * xi);
               },
               -1.0, 1.0, tol) /
           (2.0 * 3.14159265358979323846);
}

/// (1/sqrt(2pi)) \int_{-1}^{1} sin(k pi (x+1)/2) e^{-i x xi} dx  -- the
/// library's forward convention.
inline cplx forward_transform_quadrature(int k, double xi, double tol = 1e-12) {
    const double kpi = 3.14159265358979323846 * static_cast<double>(k);
    return integrate(
               [&](double x) {
                   return std::sin(kpi * (x + 1.0) / 2.0) * std::polar(1.0, -x * xi);
               },
               -1.0, 1.0, tol) /
           std::sqrt(2.0 * 3.14159265358979323846);
}

/// Direct O(n^2) DFT with the e^{-2 pi i j k / n} kernel.
inline std::vector<cplx> naive_dft(const std::vector<cplx>& a) {
    const std::size_t n = a.size();
    std::vector<cplx> out(n, cplx(0.0, 0.0));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t m = 0; m < n; ++m)
            out[j] += a[m] * std::polar(1.0, -2.0 * 3.14159265358979323846 *
                                                 static_cast<double>(j * m % n) / static_cast<double>(n));
    return out;
}

}  // namespace oracles
