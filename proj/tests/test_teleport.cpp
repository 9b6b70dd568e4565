#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cvwerner/teleport.hpp"

using namespace cvw;

TEST_CASE("closed forms") {
  CHECK(fidelity_nopa(0) == 0.5);
  CHECK(std::abs(fidelity_nopa(10) - 1) < 1e-8);
  CHECK(fidelity_nopa(1) == doctest::Approx(0.880797077977882).epsilon(1e-14));
  CHECK(effective_dimension(1) == doctest::Approx(2 * std::cosh(1.0) * std::cosh(1.0)));

  CHECK(fidelity_werner(1.0, 0.8).fidelity_closed_form == fidelity_nopa(0.8));
  CHECK(fidelity_werner(0.5, 1.0).fidelity_closed_form == doctest::Approx(0.545392124392448).epsilon(1e-14));
  CHECK(std::abs(fidelity_werner(0.3, 12.0).fidelity_closed_form - 0.3) < 1e-9);
  CHECK_THROWS_AS(fidelity_werner(1.2, 1.0), ParametersOutOfRange);

  for (double r : {0.2, 1.0, 2.5}) {
    const double f0 = fidelity_werner(0, r).fidelity_closed_form, f1 = fidelity_werner(1, r).fidelity_closed_form;
    double prev = -1;
    for (int k = 0; k <= 10; ++k) {
      const double p = k / 10.0;
      const double f = fidelity_werner(p, r).fidelity_closed_form;
      CHECK(f - f0 == doctest::Approx(p * (f1 - f0)).epsilon(1e-14));
      CHECK(f >= prev);
      CHECK(f >= 0);
      CHECK(f <= 1);
      prev = f;
      CHECK((f > 0.5) == (p > useful_teleportation_threshold(r)));
    }
  }
  CHECK(std::abs(useful_teleportation_threshold(12.0) - 0.5) < 1e-6);
  CHECK(useful_teleportation_threshold(0.0) == 1.0);
}

TEST_CASE("numeric oracle anchors") {
  CHECK(std::abs(fidelity_numeric_oracle(WernerParams::make(1, 0, 0)) - 0.5) < 1e-3);
  CHECK(std::abs(fidelity_numeric_oracle(WernerParams::make(1, 1, 1)) - 0.880797077977882) < 1e-3);
  CHECK(std::abs(fidelity_numeric_oracle(WernerParams::make(0.5, 1, 1)) - 0.545392124392448) < 1e-3);

  const auto rep = fidelity_werner_checked(WernerParams::make(0.5, 1, 1), {1.0, 0.5});
  CHECK(rep.method_agreement < 1e-3);
  CHECK_THROWS_AS(fidelity_werner_checked(WernerParams::make(0.5, 1, 0.5)), ParametersOutOfRange);
}

TEST_CASE("numeric oracle is independent of the input amplitude") {
  for (const auto& w : {WernerParams::make(0.5, 1, 1), WernerParams::make(0.7, 0.4, 1.3)}) {
    const double f0 = fidelity_numeric_oracle(w, {0, 0});
    const double f1 = fidelity_numeric_oracle(w, {1.0, 0.5});
    const double f2 = fidelity_numeric_oracle(w, {-2.0, 1.5});
    CHECK(std::abs(f0 - f1) < 1e-3);
    CHECK(std::abs(f0 - f2) < 1e-3);
  }
}

TEST_CASE("numeric oracle is linear in the channel") {
  const double r = 0.9, s = 0.6;
  const double nopa = fidelity_numeric_oracle(WernerParams::make(1, r, s));
  const double thermal = fidelity_numeric_oracle(WernerParams::make(0, r, s));
  for (double p : {0.25, 0.6})
    CHECK(std::abs(fidelity_numeric_oracle(WernerParams::make(p, r, s)) - (p * nopa + (1 - p) * thermal)) < 1e-3);
  // The thermal channel at s = r gives 1/d.
  for (double x : {0.5, 1.0, 1.5})
    CHECK(std::abs(fidelity_numeric_oracle(WernerParams::make(0, x, x)) - 1 / effective_dimension(x)) < 1e-3);
}

TEST_CASE("kernel") {
  for (auto c : {ChannelComponent::kNopa, ChannelComponent::kThermal}) {
    const double sq = 0.7;
    const double k0 = teleport_kernel(c, sq, 0, 0);
    const double peak = component_wigner(c, sq, 0, 0, 0, 0);
    for (double xi : {0.0, 0.3, -0.8})
      for (double eta : {0.0, 0.5}) {
        const double direct = teleport_kernel(c, sq, xi, eta);
        const double factored = k0 * component_wigner(c, sq, -xi, 0, 0, 0) / peak *
                                component_wigner(c, sq, 0, 0, 0, eta) / peak;
        CHECK(direct == doctest::Approx(factored).epsilon(1e-10));
      }
  }
  // The kernel carries total weight 4, hence the 1/4 in the output convolution.
  const double hw = 5.0;
  const auto grid = sample_grid(
      [](double xm, double pp) { return teleport_kernel(ChannelComponent::kNopa, 0.3, xm, pp); }, hw, 41);
  CHECK(std::abs(integrate_grid(grid) - 4.0) < 1e-6);
}

TEST_CASE("Wigner function normalisation on the coarse 4D grid") {
  for (const auto& w : {WernerParams::make(0.5, 1, 1), WernerParams::make(0.3, 0.5, 0.2)}) {
    const auto state = wigner_grid_state(w, 61);
    CHECK(std::abs(state.normalization() - 1.0) < 1e-3);
  }
}
