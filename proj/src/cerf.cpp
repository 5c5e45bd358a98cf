#include "rydmol/cerf.hpp"

#include <cmath>

namespace rydmol {

namespace {

const double kInvSqrtPi = 0.564189583547756287;

// Maclaurin series, adequate for |z| <= 2.5 (cancellation stays ~e^{|z|^2} eps).
Complex erf_taylor(Complex z) {
    Complex z2 = z * z;
    Complex term = z;
    Complex sum = z;
    for (int n = 1; n < 80; ++n) {
        term *= -z2 / static_cast<double>(n);
        Complex add = term / static_cast<double>(2 * n + 1);
        sum += add;
        if (std::abs(add) < 1e-18 * std::abs(sum)) break;
    }
    return 2.0 * kInvSqrtPi * sum;
}

// Trapezoid-of-Gaussians expansion (Abramowitz & Stegun 7.1.29 with h = 1/2),
// valid for all x >= 0, y >= 0; aliasing error ~1e-16 relative. Exponentials
// are combined as exp(n y - n^2/4) so intermediates never overflow while the
// result is representable.
Complex erf_series_as(double x, double y) {
    double ex2 = std::exp(-x * x);
    double c2xy = std::cos(2.0 * x * y);
    double s2xy = std::sin(2.0 * x * y);
    double sxy = std::sin(x * y);

    // e^{-x^2}/(2 pi x) * (1 - cos 2xy) = e^{-x^2} sin^2(xy)/(pi x), stable as x -> 0
    double re0, im0;
    if (x > 1e-30) {
        re0 = ex2 * sxy * sxy / (M_PI * x);
        im0 = ex2 * s2xy / (2.0 * M_PI * x);
    } else {
        re0 = 0.0;
        im0 = ex2 * y / M_PI;
    }

    int nmax = static_cast<int>(2.0 * y) + 24;
    double sre = 0.0, sim = 0.0;
    for (int n = 1; n <= nmax; ++n) {
        double a = 0.25 * n * n;
        double ep = std::exp(n * y - a - x * x);   // e^{-n^2/4} e^{ny} e^{-x^2}
        double em = std::exp(-n * y - a - x * x);
        double e0 = std::exp(-a - x * x);
        double ch = 0.5 * (ep + em);               // e^{-n^2/4-x^2} cosh(ny)
        double sh = 0.5 * (ep - em);
        double den = n * n + 4.0 * x * x;
        double fn = 2.0 * x * e0 - 2.0 * x * ch * c2xy + n * sh * s2xy;
        double gn = 2.0 * x * ch * s2xy + n * sh * c2xy;
        sre += fn / den;
        sim += gn / den;
    }
    return Complex(std::erf(x) + re0 + (2.0 / M_PI) * sre,
                   im0 + (2.0 / M_PI) * sim);
}

}  // namespace

Complex cerf(Complex z) {
    double x = z.real(), y = z.imag();
    if (!std::isfinite(x) || !std::isfinite(y))
        throw NumericalError("cerf: non-finite argument");
    if (std::abs(z) > 1e6) throw NumericalError("cerf: |z| out of range");
    if (y * y - x * x > 650.0)
        throw NumericalError("cerf: overflow region near the imaginary axis");
    if (y == 0.0) return Complex(std::erf(x), 0.0);

    // odd in z, conjugate-symmetric: reduce to x >= 0, y >= 0
    double sgn = 1.0;
    if (x < 0.0 || (x == 0.0 && y < 0.0)) {
        x = -x;
        y = -y;
        sgn = -1.0;
    }
    bool conj = false;
    if (y < 0.0) {
        y = -y;
        conj = true;
    }

    Complex r;
    if (x * x - y * y > 710.0) {
        r = Complex(1.0, 0.0);  // erfc underflows entirely
    } else if (x * x + y * y <= 6.25) {
        r = erf_taylor(Complex(x, y));
    } else {
        r = erf_series_as(x, y);
    }
    if (conj) r = std::conj(r);
    return sgn * r;
}

Complex cerfc(Complex z) { return 1.0 - cerf(z); }

}  // namespace rydmol
