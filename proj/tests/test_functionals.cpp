#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nonsig/errors.hpp"
#include "nonsig/functionals.hpp"
#include "nonsig/membership.hpp"
#include "support.hpp"

using namespace nonsig;

namespace {

const double kTsirelson = 2.0 * std::numbers::sqrt2;

// Independent closed form of g.
double g_oracle(double x) {
    auto t = [](double u) { return u > 0.0 ? u * std::log2(u) : 0.0; };
    return 0.5 * (1.0 + t((1.0 + x) / 4.0) + t((1.0 - x) / 4.0));
}

Behavior product(double pa0, double pa1, double pb0, double pb1) {
    ProbabilityTable t{};
    const double pa[2] = {pa0, pa1};
    const double pb[2] = {pb0, pb1};
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    t[table_index(x, y, a, b)] = (a == 0 ? pa[x] : 1.0 - pa[x]) * (b == 0 ? pb[y] : 1.0 - pb[y]);
    return make_behavior(t, 1e-12);
}

}  // namespace

TEST(ChshLinear, CanonicalSlot) {
    EXPECT_DOUBLE_EQ(chsh_linear(named(NamedTag::PR).behavior, 0), 4.0);
    EXPECT_NEAR(chsh_linear(named(NamedTag::Bell).behavior, 0), kTsirelson, 1e-15);
    EXPECT_DOUBLE_EQ(chsh_linear(named(NamedTag::Noise).behavior, 0), 0.0);
}

TEST(ChshLinear, SlotsComeInSignedPairs) {
    std::mt19937_64 rng(3);
    for (int n = 0; n < 50; ++n) {
        const Correlators c = fixtures::random_ns_correlators(rng);
        for (int k = 0; k < 4; ++k) EXPECT_DOUBLE_EQ(chsh_linear(c, k + 4), -chsh_linear(c, k));
    }
}

TEST(Smax, NamedValues) {
    EXPECT_DOUBLE_EQ(s_max(named(NamedTag::PR).behavior), 4.0);
    EXPECT_DOUBLE_EQ(s_max(named(NamedTag::LDAllOnes).behavior), 2.0);
    EXPECT_DOUBLE_EQ(s_max(named(NamedTag::Noise).behavior), 0.0);
}

TEST(Smax, EqualsMaxOverSignedSlotsAndDefinition) {
    std::mt19937_64 rng(8);
    for (int n = 0; n < 200; ++n) {
        const Correlators c = fixtures::random_ns_correlators(rng);
        double by_slots = -1e9;
        for (int k = 0; k < kChshSlots; ++k) by_slots = std::max(by_slots, chsh_linear(c, k));
        double by_definition = 0.0;
        const double total = c.ab[0][0] + c.ab[0][1] + c.ab[1][0] + c.ab[1][1];
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y) by_definition = std::max(by_definition, std::abs(total - 2.0 * c.ab[x][y]));
        EXPECT_NEAR(s_max(c), by_slots, 1e-15);
        EXPECT_NEAR(s_max(c), by_definition, 1e-15);
        EXPECT_NEAR(chsh_linear(c, argmax_slot(c)), s_max(c), 1e-15);
    }
}

TEST(MutualInformation, NamedValues) {
    EXPECT_NEAR(mutual_information(named(NamedTag::Noise).behavior), 0.0, 1e-15);
    EXPECT_NEAR(mutual_information(named(NamedTag::SCTilde).behavior), 1.0, 1e-15);
    EXPECT_NEAR(s_max(named(NamedTag::SCTilde).behavior), 2.0, 1e-15);
    // Marginal entropies H(1/4) each, four joint entropies of 1.5 bits.
    const double h = -(0.25 * std::log2(0.25) + 0.75 * std::log2(0.75));
    EXPECT_NEAR(mutual_information(named(NamedTag::P0).behavior), 2.0 * h - 1.5, 1e-14);
    EXPECT_NEAR(mutual_information(named(NamedTag::P0).behavior), 0.122556, 5e-7);
    EXPECT_NEAR(mutual_information(named(NamedTag::Bell).behavior), 4.0 * g_oracle(1.0 / std::numbers::sqrt2), 1e-14);
    EXPECT_NEAR(mutual_information(named(NamedTag::Bell).behavior), 0.3991, 5e-5);
}

TEST(MutualInformation, RangeAndOrbitInvariance) {
    std::mt19937_64 rng(13);
    for (int n = 0; n < 2000; ++n) {
        const Behavior p = fixtures::random_behavior(rng);
        const double i = mutual_information(p);
        EXPECT_GE(i, -1e-15);
        EXPECT_LE(i, 1.0 + 1e-15);
        EXPECT_GE(s_max(p), 0.0);
        EXPECT_LE(s_max(p), 4.0 + 1e-15);
        for (const auto& q : relabelings(p)) EXPECT_NEAR(mutual_information(q), i, 1e-12);
    }
}

TEST(MutualInformation, InvariantUnderInputSwaps) {
    std::mt19937_64 rng(17);
    for (int n = 0; n < 100; ++n) {
        const Behavior p = fixtures::random_behavior(rng);
        Relabeling r;
        r.swap_x = true;
        r.swap_y = n % 2 == 0;
        EXPECT_NEAR(mutual_information(r.apply(p)), mutual_information(p), 1e-12);
    }
}

TEST(MutualInformation, ZeroExactlyOnProducts) {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int n = 0; n < 100; ++n) {
        const Behavior p = product(u(rng), u(rng), u(rng), u(rng));
        EXPECT_NEAR(mutual_information(p), 0.0, 1e-14);
        EXPECT_TRUE(is_local(p).passed);
    }
    // A correlated perturbation of a product has positive information.
    Correlators c = product(0.3, 0.6, 0.5, 0.8).correlators();
    c.ab[0][0] += 0.05;
    EXPECT_GT(mutual_information(correlators_to_behavior(c)), 1e-5);
}

TEST(G, Values) {
    EXPECT_NEAR(g(0.0), 0.0, 1e-16);
    EXPECT_DOUBLE_EQ(g(1.0), 0.25);
    EXPECT_DOUBLE_EQ(g(-1.0), 0.25);
    EXPECT_NEAR(g(1.0 / std::numbers::sqrt2), 0.0998, 5e-5);
    for (double x = -1.0; x <= 1.0; x += 0.01) {
        EXPECT_NEAR(g(x), g_oracle(x), 1e-15);
        EXPECT_NEAR(g(x), g(-x), 1e-15);
    }
}

TEST(G, ClampsNearBoundaryAndRejectsBeyond) {
    EXPECT_DOUBLE_EQ(g(1.0 + 5e-13), 0.25);
    EXPECT_THROW(g(1.0 + 1e-9), DomainError);
    EXPECT_THROW(g(-1.1), DomainError);
}

TEST(CorrelationSpaceInfo, Values) {
    EXPECT_NEAR(correlation_space_info(Correlators{}), 0.0, 1e-16);
    EXPECT_NEAR(correlation_space_info(named_correlators(NamedTag::SC)), 1.0, 1e-15);
    Correlators c;
    c.ab = {{{1.0, 1.0}, {1.0, 0.0}}};
    EXPECT_NEAR(correlation_space_info(c), 0.75, 1e-15);
}

TEST(CorrelationSpaceInfo, NonzeroMarginalIsRejected) {
    Correlators c;
    c.a[0] = 0.1;
    EXPECT_THROW(correlation_space_info(c), DomainError);
}

TEST(CorrelationSpaceInfo, AgreesWithProbabilityPath) {
    std::mt19937_64 rng(31);
    for (int n = 0; n < 2000; ++n) {
        const Correlators c = fixtures::random_c_correlators(rng);
        EXPECT_NEAR(correlation_space_info(c), mutual_information(correlators_to_behavior(c)), 1e-12);
    }
}

TEST(FunctionalPoint, MatchesComponents) {
    const Behavior p = named(NamedTag::Bell).behavior;
    const auto fp = functional_point(p);
    EXPECT_DOUBLE_EQ(fp.s, s_max(p));
    EXPECT_DOUBLE_EQ(fp.i, mutual_information(p));
}
