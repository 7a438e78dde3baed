#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "subordinate/core_processes.hpp"

using namespace subordinate;

TEST(RateAt, PoissonIsConstant) {
    const RateFunctionSpec r = Poisson{1.5};
    for (StateCount x : {0, 1, 7, 1000}) EXPECT_DOUBLE_EQ(rate_at(r, x), 1.5);
    EXPECT_FALSE(is_absorbing(r, 0));
}

TEST(RateAt, LinearBirthAbsorbsAtZero) {
    const RateFunctionSpec r = LinearBirth{0.3};
    EXPECT_EQ(rate_at(r, 0), 0.0);
    EXPECT_TRUE(is_absorbing(r, 0));
    EXPECT_DOUBLE_EQ(rate_at(r, 2), 0.6);
    EXPECT_DOUBLE_EQ(rate_at(r, 10), 3.0);
}

TEST(RateAt, LinearDeathCounting) {
    const RateFunctionSpec r = LinearDeathCounting{0.7, 10};
    EXPECT_DOUBLE_EQ(rate_at(r, 0), 7.0);
    EXPECT_DOUBLE_EQ(rate_at(r, 9), 0.7);
    EXPECT_EQ(rate_at(r, 10), 0.0);
    EXPECT_TRUE(is_absorbing(r, 10));
    EXPECT_THROW(rate_at(r, 11), DomainError);
    EXPECT_EQ(max_state(r), 10);
}

TEST(RateAt, NonlinearDeathCounting) {
    const RateFunctionSpec r = NonlinearDeathCounting{5};
    EXPECT_EQ(rate_at(r, 0), 0.0);
    EXPECT_EQ(rate_at(r, 1), 4.0);
    EXPECT_EQ(rate_at(r, 2), 6.0);
    EXPECT_EQ(rate_at(r, 4), 4.0);
    EXPECT_EQ(rate_at(r, 5), 0.0);
    EXPECT_THROW(rate_at(r, 6), DomainError);
}

TEST(RateAt, GeneralTableAbsorbsBeyondTable) {
    const RateFunctionSpec r = GeneralTable{{1.0, 0.5, 2.0}};
    EXPECT_EQ(rate_at(r, 1), 0.5);
    EXPECT_EQ(rate_at(r, 3), 0.0);
    EXPECT_EQ(rate_at(r, 100), 0.0);
    EXPECT_EQ(max_state(r), 3);
}

TEST(RateAt, NegativeStateRejected) {
    EXPECT_THROW(rate_at(Poisson{1.0}, -1), DomainError);
}

TEST(Validate, RejectsBadParameters) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double inf = std::numeric_limits<double>::infinity();
    EXPECT_THROW(validate(RateFunctionSpec{Poisson{-1.0}}), DomainError);
    EXPECT_THROW(validate(RateFunctionSpec{Poisson{0.0}}), DomainError);
    EXPECT_THROW(validate(RateFunctionSpec{Poisson{nan}}), DomainError);
    EXPECT_THROW(validate(RateFunctionSpec{LinearBirth{inf}}), DomainError);
    EXPECT_THROW(validate(RateFunctionSpec{LinearDeathCounting{0.7, 0}}), DomainError);
    EXPECT_THROW(validate(RateFunctionSpec{NonlinearDeathCounting{-2}}), DomainError);
    EXPECT_THROW(validate(RateFunctionSpec{GeneralTable{{1.0, -0.1}}}), DomainError);
    EXPECT_NO_THROW(validate(RateFunctionSpec{GeneralTable{{0.0, 1.0}}}));
}

TEST(Validate, InitialStateRange) {
    EXPECT_THROW(validate(ProcessSpec{Poisson{1.0}, -1}), DomainError);
    EXPECT_THROW(validate(ProcessSpec{LinearDeathCounting{0.7, 10}, 11}), DomainError);
    EXPECT_NO_THROW(validate(ProcessSpec{LinearDeathCounting{0.7, 10}, 10}));
}

TEST(FamilyName, AllFamilies) {
    EXPECT_EQ(family_name(Poisson{1.0}), "poisson");
    EXPECT_EQ(family_name(LinearBirth{1.0}), "linear_birth");
    EXPECT_EQ(family_name(LinearDeathCounting{1.0, 2}), "linear_death");
    EXPECT_EQ(family_name(NonlinearDeathCounting{2}), "nonlinear_death");
    EXPECT_EQ(family_name(GeneralTable{}), "general");
    EXPECT_FALSE(max_state(Poisson{1.0}).has_value());
}
