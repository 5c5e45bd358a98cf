#include <doctest.h>
#include <mpfr.h>

#include <cmath>
#include <complex>
#include <random>

#include "rydmol/cerf.hpp"

using rydmol::cerf;
using rydmol::cerfc;
using rydmol::Complex;

namespace {

// Arbitrary-precision Taylor oracle erf(z) = 2/sqrt(pi) sum (-1)^n z^(2n+1)/(n!(2n+1)),
// evaluated with MPFR real pairs. Entirely independent of the production
// series/trapezoid path; precision chosen so the e^{|z|^2}-sized terms keep
// hundreds of guard digits.
Complex erf_oracle(Complex z, long prec_bits, int nmax) {
    mpfr_t zr, zi, z2r, z2i, tr, ti, sr, si, tmp1, tmp2, coef;
    mpfr_inits2(prec_bits, zr, zi, z2r, z2i, tr, ti, sr, si, tmp1, tmp2, coef,
                (mpfr_ptr) nullptr);
    mpfr_set_d(zr, z.real(), MPFR_RNDN);
    mpfr_set_d(zi, z.imag(), MPFR_RNDN);
    // z2 = -z^2
    mpfr_mul(tmp1, zr, zr, MPFR_RNDN);
    mpfr_mul(tmp2, zi, zi, MPFR_RNDN);
    mpfr_sub(z2r, tmp2, tmp1, MPFR_RNDN);
    mpfr_mul(z2i, zr, zi, MPFR_RNDN);
    mpfr_mul_si(z2i, z2i, -2, MPFR_RNDN);
    // term = z, sum = z (term holds z^(2n+1) (-1)^n / n!)
    mpfr_set(tr, zr, MPFR_RNDN);
    mpfr_set(ti, zi, MPFR_RNDN);
    mpfr_set(sr, zr, MPFR_RNDN);
    mpfr_set(si, zi, MPFR_RNDN);
    for (int n = 1; n <= nmax; ++n) {
        // term *= z2 * z... term_{n} = term_{n-1} * (-z^2)/n ; then sum += term/(2n+1)
        mpfr_mul(tmp1, tr, z2r, MPFR_RNDN);
        mpfr_mul(tmp2, ti, z2i, MPFR_RNDN);
        mpfr_sub(tmp1, tmp1, tmp2, MPFR_RNDN);
        mpfr_mul(tmp2, tr, z2i, MPFR_RNDN);
        mpfr_mul(coef, ti, z2r, MPFR_RNDN);
        mpfr_add(tmp2, tmp2, coef, MPFR_RNDN);
        mpfr_div_si(tr, tmp1, n, MPFR_RNDN);
        mpfr_div_si(ti, tmp2, n, MPFR_RNDN);
        mpfr_div_si(tmp1, tr, 2 * n + 1, MPFR_RNDN);
        mpfr_div_si(tmp2, ti, 2 * n + 1, MPFR_RNDN);
        mpfr_add(sr, sr, tmp1, MPFR_RNDN);
        mpfr_add(si, si, tmp2, MPFR_RNDN);
    }
    // * 2/sqrt(pi)
    mpfr_const_pi(tmp1, MPFR_RNDN);
    mpfr_sqrt(tmp1, tmp1, MPFR_RNDN);
    mpfr_si_div(tmp1, 2, tmp1, MPFR_RNDN);
    mpfr_mul(sr, sr, tmp1, MPFR_RNDN);
    mpfr_mul(si, si, tmp1, MPFR_RNDN);
    Complex out(mpfr_get_d(sr, MPFR_RNDN), mpfr_get_d(si, MPFR_RNDN));
    mpfr_clears(zr, zi, z2r, z2i, tr, ti, sr, si, tmp1, tmp2, coef, (mpfr_ptr) nullptr);
    return out;
}

Complex oracle(Complex z) {
    double a = std::abs(z);
    if (a <= 6.0) return erf_oracle(z, 512, 400);
    return erf_oracle(z, 8192, 3500);
}

}  // namespace

TEST_CASE("special values") {
    CHECK(cerf(Complex(0, 0)) == Complex(0, 0));
    Complex e1 = cerf(Complex(1, 0));
    CHECK(e1.real() == doctest::Approx(0.842700792949715).epsilon(1e-13));
    CHECK(e1.imag() == 0.0);
}

TEST_CASE("odd and conjugate symmetries") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> U(-4, 4);
    for (int i = 0; i < 100; ++i) {
        Complex z(U(rng), U(rng));
        Complex a = cerf(z), b = cerf(-z), c = cerf(std::conj(z));
        CHECK(std::abs(a + b) <= 1e-14 * std::max(1.0, std::abs(a)));
        CHECK(std::abs(std::conj(a) - c) <= 1e-14 * std::max(1.0, std::abs(a)));
    }
}

TEST_CASE("oracle comparison across the disk |z| <= 30") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> U(0, 1);
    int tested = 0;
    for (int i = 0; i < 140; ++i) {
        double r = (i < 90) ? 6.0 * std::sqrt(U(rng)) : 6.0 + 24.0 * U(rng);
        double th = 2 * M_PI * U(rng);
        Complex z(r * std::cos(th), r * std::sin(th));
        if (z.imag() * z.imag() - z.real() * z.real() > 620.0) continue;  // near overflow
        Complex got = cerf(z);
        Complex want = oracle(z);
        CHECK(std::abs(got - want) <= 1e-12 * std::abs(want));
        ++tested;
    }
    CHECK(tested > 100);
}

TEST_CASE("arguments along the arg = pi/4 ray stay accurate far out") {
    for (double r : {5.0, 12.0, 25.0, 30.0}) {
        Complex z = r * std::exp(Complex(0, M_PI / 4));
        Complex got = cerf(z);
        Complex want = oracle(z);
        CHECK(std::abs(got - want) <= 1e-12 * std::abs(want));
    }
}

TEST_CASE("overflow sliver signals out-of-range") {
    CHECK_THROWS_AS(cerf(Complex(0.0, 28.0)), rydmol::NumericalError);
    CHECK_THROWS_AS(cerf(Complex(2e6, 0.0)), rydmol::NumericalError);
    // representable large-imaginary values still work
    Complex z(10.0, 25.0);
    CHECK(std::isfinite(std::abs(cerf(z))));
}

TEST_CASE("erfc complement") {
    Complex z(1.3, -0.7);
    CHECK(std::abs(cerfc(z) + cerf(z) - 1.0) < 1e-14);
}
