#include <doctest.h>

#include <cmath>

#include "ebransac/numerics.hpp"
#include "ebransac/rng.hpp"

using namespace ebransac;

TEST_CASE("softplus matches the naive form on moderate arguments") {
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        const double z = rng.uniform(-30.0, 30.0);
        CHECK(softplus(z) == doctest::Approx(std::log1p(std::exp(z))).epsilon(1e-13));
    }
    CHECK(softplus(0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("softplus and sigmoid survive extreme arguments") {
    CHECK(std::isfinite(softplus(1400.0)));
    CHECK(softplus(1400.0) == doctest::Approx(1400.0));
    CHECK(softplus(-1400.0) == 0.0);
    CHECK(sigmoid(1400.0) == 1.0);
    CHECK(sigmoid(-1400.0) == 0.0);
    CHECK(sigmoid(0.0) == 0.5);
}

TEST_CASE("softplus derivative is sigmoid") {
    Rng rng(12);
    for (int i = 0; i < 50; ++i) {
        const double z = rng.uniform(-20.0, 20.0);
        const double h = 1e-6 * std::fmax(1.0, std::fabs(z));
        const double num = (softplus(z + h) - softplus(z - h)) / (2 * h);
        CHECK(num == doctest::Approx(sigmoid(z)).epsilon(1e-7));
    }
}

TEST_CASE("central differences recover a quadratic gradient") {
    const auto f = [](std::span<const double> x) {
        return 3.0 * x[0] * x[0] + 2.0 * x[0] * x[1] - x[1];
    };
    const std::vector<double> x{1.5, -2.0};
    const auto g = central_diff_grad(f, x);
    CHECK(g[0] == doctest::Approx(6.0 * 1.5 + 2.0 * -2.0).epsilon(1e-8));
    CHECK(g[1] == doctest::Approx(2.0 * 1.5 - 1.0).epsilon(1e-8));
}

TEST_CASE("adaptive Simpson integrates smooth functions to tolerance") {
    const double i1 = adaptive_simpson([](double x) { return x * x; }, 0.0, 1.0, 1e-12);
    CHECK(i1 == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    const double i2 =
        adaptive_simpson([](double x) { return std::exp(-x); }, 0.0, 20.0, 1e-12);
    CHECK(i2 == doctest::Approx(1.0 - std::exp(-20.0)).epsilon(1e-11));
    const double i3 =
        adaptive_simpson([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-12);
    CHECK(i3 == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("adaptive Simpson reports failure with estimate and bound") {
    // A step function cannot be resolved with a depth-2 budget.
    const auto step = [](double x) { return x < 0.37 ? 0.0 : 1.0; };
    CHECK_THROWS_AS(adaptive_simpson(step, 0.0, 1.0, 1e-14, 2), QuadratureError);
    try {
        adaptive_simpson(step, 0.0, 1.0, 1e-14, 2);
    } catch (const QuadratureError& e) {
        CHECK(std::isfinite(e.estimate));
        CHECK(e.error_bound > 1e-14);
    }
}

TEST_CASE("parallel seed derivation separates streams") {
    CHECK(derive_seed(0, 0) != derive_seed(0, 1));
    CHECK(derive_seed(0, 0) != derive_seed(1, 0));
    Rng a(derive_seed(42, 3));
    Rng b(derive_seed(42, 3));
    for (int i = 0; i < 16; ++i) CHECK(a.next_u64() == b.next_u64());
}
