#pragma once

#include <complex>

namespace rislink::special {

// Modified Bessel function of the first kind, I_0 or I_1. Power series for
// |x| <= 15, Hankel asymptotic expansion beyond. Throws RangeError when
// |x| >= 700 (I would overflow) and DomainError for other orders.
double bessel_i(int order, double x);

// exp(-|x|) * I_order(x). Never overflows; used wherever I appears next to a
// compensating exponential.
double bessel_i_scaled(int order, double x);

// Modified Bessel function of the second kind for real order (K_{-v} = K_v).
// Temme series for x < 2, Steed's continued fraction otherwise, upward
// recurrence in the order. Throws DomainError for x <= 0 and RangeError when
// the value overflows a double; log_bessel_k covers that regime.
double bessel_k(double order, double x);
double log_bessel_k(double order, double x);

// L_{1/2}(x) for x <= 0, via e^{x/2}[(1-x) I_0(-x/2) - x I_1(-x/2)].
double laguerre_half(double x);

// log Gamma(x) for x > 0 (Lanczos, g = 7, with reflection below 1/2).
double ln_gamma(double x);

// log Gamma(z) on the complex plane. The imaginary part is only defined
// modulo 2*pi, which is all that exp() of it needs. Poles give -inf/+inf real
// parts rather than throwing.
std::complex<double> ln_gamma(std::complex<double> z);

// Regularized incomplete gamma functions P(a, x) = gamma(a, x) / Gamma(a) and
// Q(a, x) = 1 - P(a, x). Series for x < a + 1, Lentz continued fraction
// otherwise. Require a > 0, x >= 0.
double reg_lower_gamma(double a, double x);
double reg_upper_gamma(double a, double x);

// log(x^a e^{-x} / Gamma(a)), the common prefactor of P and Q, evaluated
// without the cancellation of the naive form for large a.
double log_gamma_prefactor(double a, double x);

}  // namespace rislink::special
