#include <doctest.h>

#include "nle/kernel.hpp"

#include <cmath>

using namespace nle;

TEST_CASE("compensator selection by order") {
  CHECK(compensator(0.5) == CompensatorKind::none);
  CHECK(compensator(0.99) == CompensatorKind::none);
  CHECK(compensator(1.0) == CompensatorKind::unit_ball);
  CHECK(compensator(1.5) == CompensatorKind::full);
  CHECK(compensator(1.0 + 1e-12) == CompensatorKind::full);
}

TEST_CASE("kernel_value includes the (2 - sigma) factor") {
  KernelSpec k = make_unit_kernel(0.5, 1);
  // K(y) = (2 - sigma) / |y|^{1+sigma}
  CHECK(kernel_value(k, {0, 0}, {2.0, 0}) ==
        doctest::Approx(1.5 / std::pow(2.0, 1.5)).epsilon(1e-14));
  KernelSpec k2 = make_unit_kernel(1.2, 2);
  CHECK(kernel_value(k2, {0, 0}, {0.0, 3.0}) ==
        doctest::Approx(0.8 / std::pow(3.0, 3.2)).epsilon(1e-14));
}

TEST_CASE("ellipticity bounds for the built-ins") {
  for (auto k : {make_unit_kernel(0.7, 1), make_aniso2d(1.3),
                 make_nonsym1d(0.7), make_truncated(1.5),
                 make_xdep(0.9, 0.1)}) {
    EllipticityReport rep = ellipticity_check(k);
    CHECK(rep.pass);
    CHECK(rep.min_ratio >= k.nu - 1e-12);
    CHECK(rep.max_ratio <= k.lambda_upper + 1e-12);
  }
}

TEST_CASE("negative amplitudes are rejected") {
  KernelSpec bad = make_unit_kernel(0.8, 1);
  bad.amplitude = [](const Point&, const Point& y) {
    return y[0] > 0 ? 1.0 : -0.5;
  };
  CHECK_THROWS_AS(ellipticity_check(bad), InvalidKernel);
  CHECK_THROWS_AS(validate_kernel(bad), InvalidKernel);
}

TEST_CASE("cancellation defect closed form in 1d") {
  // r K(r) - r K(-r) = (2-sigma) (a_+ - a_-) r^{-sigma}; nonsym1d has
  // a_+ - a_- = 1, so at sigma = 1, r = 1 the defect is exactly 1.
  KernelSpec k = make_nonsym1d(1.0 - 1e-9);
  k.sigma = 1.0;   // construct the sigma = 1 variant directly
  Point d = cancellation_defect(k, {0, 0}, 1.0);
  CHECK(d[0] == doctest::Approx(1.0).epsilon(1e-12));
  Point d2 = cancellation_defect(k, {0, 0}, 2.0);
  CHECK(d2[0] == doctest::Approx(0.5).epsilon(1e-12));   // r^{-1} scaling
}

TEST_CASE("sigma = 1 validation accepts even kernels and rejects odd parts") {
  CHECK_NOTHROW(validate_kernel(make_unit_kernel(1.0, 1)));
  CHECK_NOTHROW(validate_kernel(make_aniso2d(1.0)));
  CHECK_NOTHROW(validate_kernel(make_xdep(1.0, 0.2)));
  CHECK_NOTHROW(validate_kernel(make_truncated(1.0)));

  KernelSpec odd = make_nonsym1d(0.9);
  odd.sigma = 1.0;
  CHECK_THROWS_AS(validate_kernel(odd), InvalidKernel);

  // 2d with a first angular harmonic: surface moments cannot vanish
  KernelSpec tilted = make_unit_kernel(1.0, 2);
  tilted.amplitude = [](const Point&, const Point& y) {
    Real th = std::atan2(y[1], y[0]);
    return 1.0 + 0.5 * std::cos(th);
  };
  tilted.lambda_upper = 1.5;
  CHECK_THROWS_AS(validate_kernel(tilted), InvalidKernel);
}

TEST_CASE("parameter validation") {
  KernelSpec k = make_unit_kernel(0.5, 1);
  k.sigma = 2.0;
  CHECK_THROWS_AS(validate_kernel(k), InvalidKernel);
  k.sigma = 0.0;
  CHECK_THROWS_AS(validate_kernel(k), InvalidKernel);
  k = make_unit_kernel(0.5, 1);
  k.nu = 2.0;   // bounds out of order
  k.lambda_upper = 1.0;
  CHECK_THROWS_AS(validate_kernel(k), InvalidKernel);
}

TEST_CASE("xdep kernel freezes to the unit amplitude at the origin") {
  KernelSpec k = make_xdep(0.8, 0.25);
  CHECK(k.x_dependent);
  CHECK(k.amplitude({0, 0}, {0.3, 0}) == doctest::Approx(1.0).epsilon(1e-14));
  // oscillates around 1 with amplitude eps
  CHECK(k.amplitude({pi / 2, 0}, {0.3, 0}) ==
        doctest::Approx(1.25).epsilon(1e-12));
  CHECK(k.nu == doctest::Approx(0.75));
  CHECK(k.lambda_upper == doctest::Approx(1.25));
}

TEST_CASE("truncated kernel vanishes outside the unit ball") {
  KernelSpec k = make_truncated(0.7);
  CHECK(k.truncated);
  CHECK(k.amplitude({0, 0}, {0.99, 0}) == 1.0);
  CHECK(k.amplitude({0, 0}, {1.01, 0}) == 0.0);
}
