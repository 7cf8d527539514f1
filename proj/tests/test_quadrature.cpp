#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "rislink/errors.hpp"
#include "rislink/quadrature.hpp"

using namespace rislink;
using namespace rislink::quad;

TEST_CASE("polynomials are exact") {
  const Result r = integrate([](double x) { return x * x; }, 0.0, 1.0);
  CHECK(r.value == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(r.evaluations == 15);
}

TEST_CASE("reversed limits flip the sign") {
  const auto f = [](double x) { return std::exp(x); };
  CHECK(integrate(f, 2.0, 0.0).value == doctest::Approx(-(std::exp(2.0) - 1.0)).epsilon(1e-13));
  CHECK(integrate(f, 1.0, 1.0).value == 0.0);
}

TEST_CASE("integrable endpoint singularity") {
  const Result r = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("breakpoints split a kink") {
  const std::vector<double> bp = {0.3};
  const Result r = integrate([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0, bp);
  CHECK(r.value == doctest::Approx(0.5 * (0.09 + 0.49)).epsilon(1e-14));
}

TEST_CASE("semi-infinite integrals") {
  const std::vector<double> bp = {0.0};
  CHECK(integrate_to_infinity([](double x) { return std::exp(-x); }, bp, 1.0).value ==
        doctest::Approx(1.0).epsilon(1e-12));
  const std::vector<double> bp2 = {0.0, 50.0, 100.0};
  const double g = integrate_to_infinity(
                       [](double x) { return std::exp(-0.5 * (x - 100.0) * (x - 100.0) / 25.0); },
                       bp2, 5.0)
                       .value;
  CHECK(g == doctest::Approx(5.0 * std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-10));
}

TEST_CASE("subinterval exhaustion raises with a best estimate") {
  Options opts;
  opts.abs_tol = 1e-15;
  opts.rel_tol = 1e-15;
  opts.max_subintervals = 5;
  try {
    integrate([](double x) { return std::sin(1.0 / x); }, 1e-4, 1.0, {}, opts);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(std::isfinite(e.best_estimate()));
    CHECK(e.error_bound() > 0.0);
  }
}

TEST_CASE("nonfinite integrand values are reported") {
  CHECK_THROWS(integrate([](double) { return std::nan(""); }, 0.0, 1.0));
}
