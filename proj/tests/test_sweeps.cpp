#include "twomode/sweeps.hpp"

#include <gtest/gtest.h>

using namespace twomode;

namespace {
const double kPi = std::numbers::pi;
const JCParams kResonant = JCParams::make(1.0, 0.0);
}  // namespace

TEST(TimeWindow, DefaultsAndValidation) {
    const TimeWindow w = default_window(JCParams::make(1.0, 2.0));
    EXPECT_NEAR(w.t_max, 20.0 * kPi / std::sqrt(2.0), 1e-12);
    EXPECT_EQ(w.coarse_samples, 2000);
    EXPECT_TRUE(w.refine);
    EXPECT_THROW((TimeWindow{0.0, 10, true}.validate()), std::invalid_argument);
    EXPECT_THROW((TimeWindow{1.0, 1, true}.validate()), std::invalid_argument);
}

TEST(GoldenSearch, FindsParabolaVertex) {
    const auto [x, f] = detail::golden_maximize([](double t) { return 1.0 - (t - 0.3) * (t - 0.3); }, -1.0, 2.0, 1e-10);
    EXPECT_NEAR(x, 0.3, 1e-8);
    EXPECT_NEAR(f, 1.0, 1e-15);
}

TEST(EntanglingPower, ResonantVacuumIsOneHalf) {
    const TimeWindow w{2.0 * kPi, 2000, true};
    EXPECT_NEAR(entangling_power(Vacuum{}, kResonant, w), 0.5, 1e-9);
    // A coarse grid that misses π/2 still lands on the peak after refinement.
    const NegativityEvaluator eval(Vacuum{}, kResonant);
    const PowerEstimate coarse = entangling_power_at(eval, TimeWindow{2.0 * kPi, 38, false});
    const PowerEstimate fine = entangling_power_at(eval, TimeWindow{2.0 * kPi, 38, true});
    EXPECT_LT(coarse.value, 0.5 - 1e-4);
    EXPECT_GE(fine.value, coarse.value);
    EXPECT_NEAR(fine.value, 0.5, 1e-9);
    EXPECT_NEAR(std::fmod(fine.t_at_max, kPi), kPi / 2, 1e-4);
}

TEST(EntanglingPower, DefaultWindowAndColdThermal) {
    const double vac = entangling_power(Vacuum{}, kResonant);
    EXPECT_NEAR(vac, 0.5, 1e-9);
    EXPECT_NEAR(entangling_power(ThermalSpec::make(0.0), kResonant), vac, 1e-8);
}

TEST(EntanglingPower, HotStateStillEntangles) {
    const TimeWindow w{20.0 * kPi, 300, true};
    EXPECT_GT(entangling_power(ThermalSpec::make(5.0, 1e-6), kResonant, w), 0.0);
}

TEST(Sweeps, TemperatureSequenceDecreases) {
    const TimeWindow w{20.0 * kPi, 400, true};
    const auto ep = ep_vs_temperature({0.0, 0.5, 1.0, 5.0}, kResonant, w, 1e-6, 2);
    ASSERT_EQ(ep.size(), 4u);
    EXPECT_NEAR(ep[0], 0.5, 1e-6);
    for (std::size_t i = 1; i < ep.size(); ++i) EXPECT_LT(ep[i], ep[i - 1]);
}

TEST(Sweeps, DetuningStartsAtOneHalfAndDecreases) {
    const auto ep = ep_vs_detuning({0.0, 1.0, 2.0, 4.0}, 1.0, std::nullopt, 2);
    EXPECT_NEAR(ep[0], 0.5, 1e-9);
    for (std::size_t i = 1; i < ep.size(); ++i) EXPECT_LE(ep[i], ep[i - 1] + 1e-6);
    EXPECT_THROW(ep_vs_detuning({1.0, 0.0}, 1.0), std::invalid_argument);
    EXPECT_THROW(ep_vs_temperature({}, kResonant), std::invalid_argument);
}

TEST(Sweeps, SurfaceLayoutMatchesPointwise) {
    const TimeWindow w{10.0 * kPi, 200, true};
    const std::vector<double> eta{0.0, 0.7}, delta{0.0, 1.0, 3.0};
    const EPSurface s = ep_surface(eta, delta, 1.0, w, 1e-6, 3);
    ASSERT_EQ(s.values.rows(), 2);
    ASSERT_EQ(s.values.cols(), 3);
    for (std::size_t i = 0; i < eta.size(); ++i)
        for (std::size_t j = 0; j < delta.size(); ++j) {
            const double ref = entangling_power(ThermalSpec::make(eta[i], 1e-6), JCParams::make(1.0, delta[j]), w);
            EXPECT_EQ(s.values(static_cast<Index>(i), static_cast<Index>(j)), ref);
            EXPECT_GE(ref, 0.0);
            EXPECT_LE(ref, 0.5 + 1e-12);
        }
}

TEST(Sweeps, BitwiseDeterministicAcrossThreadCounts) {
    const TimeWindow w{8.0 * kPi, 150, true};
    const std::vector<double> eta{0.0, 0.5, 1.0, 2.0};
    EXPECT_EQ(ep_vs_temperature(eta, JCParams::make(1.0, 0.5), w, 1e-6, 1),
              ep_vs_temperature(eta, JCParams::make(1.0, 0.5), w, 1e-6, 4));
    const auto a = ep_surface({0.0, 1.0}, {0.0, 2.0}, 1.0, w, 1e-6, 1);
    const auto b = ep_surface({0.0, 1.0}, {0.0, 2.0}, 1.0, w, 1e-6, 4);
    EXPECT_EQ(a.values, b.values);
}
