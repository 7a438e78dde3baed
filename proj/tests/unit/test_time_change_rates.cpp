#include <gtest/gtest.h>

#include <cmath>

#include "subordinate/kernel.hpp"
#include "subordinate/time_change_rates.hpp"

using namespace subordinate;

namespace {

// P(X(N(t)) - s = k) for the linear death counting process, summing over the
// Poisson clock value directly: X(n) - s ~ Binomial(d0 - s, 1 - e^{-delta n}).
double death_subordinated_prob(double delta, StateCount d0, StateCount s, double t, StateCount k) {
    const double n = static_cast<double>(d0 - s);
    const double kk = static_cast<double>(k);
    double total = k == 0 ? std::exp(-t) : 0.0;
    for (int m = 1; m < 200; ++m) {
        const double w = std::exp(-t + m * std::log(t) - std::lgamma(m + 1.0));
        const double p = -std::expm1(-delta * m);
        const double q = std::exp(-delta * m);
        total += w * std::exp(std::lgamma(n + 1.0) - std::lgamma(kk + 1.0) - std::lgamma(n - kk + 1.0)) *
                 std::pow(p, kk) * std::pow(q, n - kk);
    }
    return total;
}

}  // namespace

TEST(Rates, PoissonUnitRate) {
    const auto row = transition_rates(Poisson{1.0}, 0);
    EXPECT_NEAR(row.q(1), 0.36787944117144233, 1e-15);
    EXPECT_NEAR(row.q(2), 0.18393972058572117, 1e-15);
    EXPECT_NEAR(row.rate_function, 0.63212055882855767, 1e-15);
    EXPECT_EQ(row.q(0), 0.0);
    EXPECT_EQ(row.state, 0);
}

TEST(Rates, LinearBirthExample) {
    const auto row = transition_rates(LinearBirth{0.3}, 2);
    EXPECT_NEAR(row.q(1), 0.2844839527068546, 1e-14);
    EXPECT_NEAR(row.rate_function, 1.0 - std::exp(-0.6), 1e-14);
}

TEST(Rates, LinearDeathExample) {
    const auto row = transition_rates(LinearDeathCounting{0.7, 10}, 9);
    EXPECT_NEAR(row.q(1), 0.5034146962085905, 1e-14);
    EXPECT_EQ(row.max_jump(), 1);
    EXPECT_EQ(row.tail_bound, 0.0);
}

TEST(Rates, AbsorbingStateHasNoRates) {
    const auto row = transition_rates(LinearBirth{0.3}, 0);
    EXPECT_TRUE(row.rates.empty());
    EXPECT_EQ(row.rate_function, 0.0);
    EXPECT_EQ(rate_function_S(LinearBirth{0.3}, 0), 0.0);
}

TEST(Rates, RateFunctionIdentity) {
    const std::vector<std::pair<RateFunctionSpec, StateCount>> cases{
        {Poisson{1.0}, 0},        {Poisson{4.0}, 3},         {LinearBirth{0.3}, 2},   {LinearBirth{1.1}, 7},
        {LinearDeathCounting{0.7, 10}, 0}, {LinearDeathCounting{0.7, 10}, 9}, {NonlinearDeathCounting{5}, 2},
        {GeneralTable{{0.5, 2.0, 1.0}}, 1}};
    for (const auto& [rate, s] : cases) {
        const auto row = transition_rates(rate, s, 1e-13);
        EXPECT_NEAR(row.rate_function, rate_function_S(rate, s), 1e-12);
        EXPECT_NEAR(compensated_sum(row.rates) + row.tail_bound, row.rate_function, 1e-12);
    }
}

TEST(Rates, ClosedFormsAgreeWithKernels) {
    // Entrywise over the stored jump sizes; whatever lies beyond is covered by tail_bound.
    auto expect_row = [](const RateFunctionSpec& rate, StateCount s) {
        const auto row = transition_rates(rate, s);
        double omitted = 0.0;
        for (StateCount k = 1; k <= row.max_jump() + 20; ++k) {
            if (const auto* d = std::get_if<LinearDeathCounting>(&rate); d && k > d->d0 - s) break;
            const double exact = corollary_rates(rate, s, k);
            if (k <= row.max_jump()) {
                EXPECT_NEAR(exact, row.q(k), 1e-12) << family_name(rate) << " s=" << s << " k=" << k;
            } else {
                omitted += exact;
            }
        }
        EXPECT_LE(omitted, row.tail_bound + 1e-15);
    };
    for (double a : {0.2, 1.0, 3.5}) expect_row(Poisson{a}, 4);
    for (StateCount s : {1, 2, 5}) expect_row(LinearBirth{0.3}, s);
    for (StateCount s = 0; s < 10; ++s) expect_row(LinearDeathCounting{0.7, 10}, s);
}

TEST(Rates, ClosedFormDomainErrors) {
    EXPECT_THROW(corollary_rates(Poisson{1.0}, 0, 0), DomainError);
    EXPECT_THROW(corollary_rates(LinearBirth{0.3}, 0, 1), DomainError);
    EXPECT_THROW(corollary_rates(LinearDeathCounting{0.7, 10}, 10, 1), DomainError);
    EXPECT_THROW(corollary_rates(LinearDeathCounting{0.7, 10}, 8, 3), DomainError);
    EXPECT_THROW(corollary_rates(NonlinearDeathCounting{5}, 1, 1), DomainError);
    EXPECT_THROW(corollary_rates(Poisson{-1.0}, 0, 1), DomainError);
}

TEST(Rates, TimeChangedProcessIsCompound) {
    // Every non-absorbing state has positive rate for jumps of size 2.
    EXPECT_GT(transition_rates(Poisson{1.0}, 0).q(2), 0.0);
    EXPECT_GT(transition_rates(LinearBirth{0.3}, 1).q(2), 0.0);
    EXPECT_GT(transition_rates(LinearDeathCounting{0.7, 10}, 0).q(2), 0.0);
    EXPECT_GT(transition_rates(NonlinearDeathCounting{5}, 1).q(2), 0.0);
    // Except where only one unit of room is left.
    EXPECT_EQ(transition_rates(LinearDeathCounting{0.7, 10}, 9).q(2), 0.0);
}

TEST(TimeChangedKernel, PoissonZeroProbability) {
    for (double t : {0.1, 1.0, 3.0}) {
        const auto k = time_changed_kernel(Poisson{1.0}, 0, t, 1e-12);
        EXPECT_NEAR(k.prob(0), std::exp(-t * (1.0 - std::exp(-1.0))), 1e-10);
        EXPECT_NEAR(compensated_sum(k.probs) + k.tail_bound, 1.0, 1e-12);
    }
}

TEST(TimeChangedKernel, LinearDeathAgreesWithDirectSum) {
    for (StateCount s : {0, 4, 9}) {
        for (double t : {0.01, 0.5, 2.0}) {
            const auto k = time_changed_kernel(LinearDeathCounting{0.7, 10}, s, t, 1e-13);
            for (StateCount j = 0; j <= 10 - s; ++j) {
                EXPECT_NEAR(k.prob(j), death_subordinated_prob(0.7, 10, s, t, j), 1e-10) << s << ' ' << t << ' ' << j;
            }
        }
    }
}

TEST(TimeChangedKernel, ShortWindowMatchesRates) {
    const double h = 1e-4;
    const auto k = time_changed_kernel(LinearBirth{0.3}, 2, h, 1e-14);
    const auto row = transition_rates(LinearBirth{0.3}, 2);
    for (StateCount j = 1; j <= 3; ++j) EXPECT_NEAR(k.prob(j) / h, row.q(j), 2.0 * h);
}

TEST(TimeChangedKernel, Errors) {
    EXPECT_THROW(time_changed_kernel(Poisson{1.0}, 0, 0.0), DomainError);
    EXPECT_THROW(time_changed_kernel(LinearDeathCounting{0.7, 10}, 11, 1.0), DomainError);
    UniformizationOptions strict;
    strict.allow_default_cap = false;
    EXPECT_THROW(time_changed_kernel(Poisson{1.0}, 0, 1.0, 1e-10, strict), ConfigurationError);
}
