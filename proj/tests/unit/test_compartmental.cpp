#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "oracles.hpp"
#include "subordinate/compartmental.hpp"

using namespace subordinate;

namespace {

SirConfig base_config() {
    SirConfig c;
    c.population = 1000;
    c.contact_rate = 2.0;
    c.recovery_rate = 1.0;
    c.step = 0.01;
    c.initial = SirState{950, 50, 0, 0, 0};
    return c;
}

struct MeanSe {
    double mean;
    double se;
};

MeanSe summarize(const std::vector<double>& xs) {
    double sum = 0.0;
    for (double x : xs) sum += x;
    const double n = static_cast<double>(xs.size());
    const double mean = sum / n;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

}  // namespace

TEST(SirConfig, Validation) {
    auto c = base_config();
    EXPECT_NO_THROW(validate(c));
    c.initial.susceptible = 949;
    EXPECT_THROW(validate(c), DomainError);
    c = base_config();
    c.step = 0.0;
    EXPECT_THROW(validate(c), DomainError);
    c = base_config();
    c.recovery_rate = 0.0;
    EXPECT_THROW(validate(c), DomainError);
    c = base_config();
    c.contact_rate = -1.0;
    EXPECT_THROW(validate(c), DomainError);
    c = base_config();
    c.initial.n_si = 1;
    EXPECT_THROW(validate(c), DomainError);
}

TEST(Sir, ConservationAndMonotoneCounters) {
    for (bool od_si : {false, true}) {
        for (bool od_ir : {false, true}) {
            auto c = base_config();
            c.overdispersed_si = od_si;
            c.overdispersed_ir = od_ir;
            for (std::uint64_t seed = 0; seed < 100; ++seed) {
                const auto path = simulate_sir(c, 3.0, seed);
                SirState prev = path.front().state;
                for (const auto& sample : path) {
                    const auto& s = sample.state;
                    ASSERT_EQ(s.total(), c.population);
                    ASSERT_GE(s.susceptible, 0);
                    ASSERT_GE(s.infectious, 0);
                    ASSERT_GE(s.n_si, prev.n_si);
                    ASSERT_GE(s.n_ir, prev.n_ir);
                    ASSERT_EQ(s.susceptible, c.initial.susceptible - s.n_si);
                    ASSERT_EQ(s.recovered, s.n_ir);
                    prev = s;
                }
            }
        }
    }
}

TEST(Sir, SampleTimesLandOnEnd) {
    const auto path = simulate_sir(base_config(), 0.025, 1);
    ASSERT_EQ(path.size(), 4u);
    EXPECT_EQ(path[0].t, 0.0);
    EXPECT_NEAR(path[1].t, 0.01, 1e-15);
    EXPECT_NEAR(path[2].t, 0.02, 1e-15);
    EXPECT_EQ(path[3].t, 0.025);
    EXPECT_EQ(simulate_sir(base_config(), 0.0, 1).size(), 1u);
}

TEST(Sir, Deterministic) {
    const auto a = simulate_sir(base_config(), 2.0, 77);
    const auto b = simulate_sir(base_config(), 2.0, 77);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].state, b[i].state);
}

TEST(Sir, NoContactKeepsSusceptibles) {
    auto c = base_config();
    c.contact_rate = 0.0;
    c.overdispersed_si = true;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        for (const auto& s : simulate_sir(c, 5.0, seed)) EXPECT_EQ(s.state.susceptible, 950);
    }
}

TEST(Sir, PlainModelMatchesIndependentChainBinomial) {
    const auto c = base_config();
    const std::size_t reps = 2000;
    std::vector<double> ours, theirs;
    std::mt19937_64 rng(987654321);
    for (std::size_t r = 0; r < reps; ++r) {
        ours.push_back(static_cast<double>(simulate_sir(c, 4.0, r).back().state.n_si));
        theirs.push_back(static_cast<double>(oracle::euler_binomial_infections(1000, 950, 50, 2.0, 1.0, 0.01, 4.0, rng)));
    }
    const auto a = summarize(ours);
    const auto b = summarize(theirs);
    EXPECT_LE(std::abs(a.mean - b.mean), 3.0 * std::hypot(a.se, b.se)) << a.mean << " vs " << b.mean;
}

TEST(Flow, OverdispersedSamplerMatchesKernel) {
    const StateCount source = 20;
    const double rate = 0.5, dt = 0.5;
    const auto kernel = overdispersed_flow_kernel(source, rate, dt, 1e-13);
    EXPECT_NEAR(compensated_sum(kernel.probs) + kernel.tail_bound, 1.0, 1e-12);
    // No exits: sum over clock counts m of Poisson(m; dt) e^{-rate source m}.
    EXPECT_NEAR(kernel.prob(0), std::exp(-dt * -std::expm1(-rate * source)), 1e-10);
    const std::size_t n = 200000;
    std::map<StateCount, std::size_t> counts;
    RngStream rng(5, 0);
    for (std::size_t i = 0; i < n; ++i) ++counts[draw_flow(source, rate, dt, true, rng)];
    for (StateCount k = 0; k <= source; ++k) {
        const double p = kernel.prob(k);
        const double phat = static_cast<double>(counts[k]) / static_cast<double>(n);
        EXPECT_NEAR(phat, p, 4.0 * std::sqrt(std::max(p, 1e-6) / static_cast<double>(n)) + 1e-12) << "k=" << k;
    }
}

TEST(Flow, PlainSamplerIsBinomial) {
    RngStream rng(6, 0);
    const std::size_t n = 100000;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += static_cast<double>(draw_flow(100, 0.3, 0.1, false, rng));
    const double p = 1.0 - std::exp(-0.03);
    EXPECT_NEAR(sum / n, 100.0 * p, 4.0 * std::sqrt(100.0 * p * (1.0 - p) / n));
}

TEST(Flow, EmptySourceOrZeroRate) {
    RngStream rng(1, 0);
    EXPECT_EQ(draw_flow(0, 1.0, 1.0, true, rng), 0);
    EXPECT_EQ(draw_flow(10, 0.0, 1.0, false, rng), 0);
    EXPECT_EQ(overdispersed_flow_kernel(0, 1.0, 1.0).probs, std::vector<double>{1.0});
}

TEST(Probe, FlagsOverdispersedFlow) {
    auto c = base_config();
    c.overdispersed_ir = true;
    const auto r = sir_dispersion_probe(c, 0.01, 20000, 12);
    EXPECT_TRUE(r.passed());
    EXPECT_GT(r.line("IR_overdispersed").estimate, 2.0);
    EXPECT_TRUE(r.line("SI_plain").available);
}

TEST(Probe, AbsentFlowsAreUnavailable) {
    auto c = base_config();
    c.initial = SirState{1000, 0, 0, 0, 0};
    const auto r = sir_dispersion_probe(c, 0.01, 100, 1);
    EXPECT_FALSE(r.line("SI_plain").available);
    EXPECT_FALSE(r.line("IR_plain").available);
    EXPECT_TRUE(r.passed());
    EXPECT_THROW(sir_dispersion_probe(c, 0.0, 100, 1), DomainError);
}

TEST(Sir, Csv) {
    std::ostringstream out;
    write_csv(out, simulate_sir(base_config(), 0.01, 1));
    std::istringstream in(out.str());
    std::string header, first;
    std::getline(in, header);
    std::getline(in, first);
    EXPECT_EQ(header, "t,S,I,R,N_SI,N_IR");
    EXPECT_EQ(first, "0,950,50,0,0,0");
}
