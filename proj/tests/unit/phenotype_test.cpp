#include "helpers.hpp"
#include "oracles.hpp"

#include "lswarm/common/error.hpp"
#include "lswarm/neat/serialize.hpp"
#include "lswarm/net/phenotype.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <map>
#include <random>

namespace {

using namespace lswarm;
using lswarm::testing::recursive_eval;
using neat::ConnectionGene;
using neat::Genome;
using neat::NodeGene;
using neat::NodeKind;

Genome two_input_genome(double w1, double w2, double bias)
{
    Genome g;
    g.nodes[-1] = {-1, NodeKind::input, 0.0};
    g.nodes[-2] = {-2, NodeKind::input, 0.0};
    for (neat::NodeId o = 0; o < 3; ++o) {
        g.nodes[o] = {o, NodeKind::output, o == 0 ? bias : 0.0};
    }
    g.connections[1] = {1, -1, 0, w1, true};
    g.connections[2] = {2, -2, 0, w2, true};
    return g;
}

TEST(Sigmoid, FixedPoints)
{
    EXPECT_EQ(net::steep_sigmoid(0.0), 0.5);
    const double expected = 1.0 / (1.0 + std::exp(-4.9));
    EXPECT_NEAR(net::steep_sigmoid(1.0), expected, 1e-15);
    EXPECT_NEAR(net::steep_sigmoid(1.0), 0.992609, 1e-6);
}

TEST(Sigmoid, StrictlyIncreasingAndInsideUnitInterval)
{
    Rng rng(1);
    std::uniform_real_distribution<double> u(-6.0, 6.0);
    for (int i = 0; i < 10000; ++i) {
        double a = u(rng);
        double b = u(rng);
        if (a > b) {
            std::swap(a, b);
        }
        if (a == b) {
            continue;
        }
        ASSERT_LT(net::steep_sigmoid(a), net::steep_sigmoid(b)) << a << " " << b;
    }
    for (double x : {-1e6, -100.0, 100.0, 1e6}) {
        const double y = net::steep_sigmoid(x);
        EXPECT_GT(y, 0.0);
        EXPECT_LT(y, 1.0);
    }
}

TEST(Phenotype, HandComputedTwoInputNetwork)
{
    const Genome g = two_input_genome(0.7, -1.2, 0.1);
    const auto p = net::Phenotype::decode(g);
    const std::vector<double> obs{0.3, 0.9};
    const auto out = p.activate(obs);
    const double x = 0.1 + 0.7 * 0.3 - 1.2 * 0.9;
    EXPECT_NEAR(out[0], 1.0 / (1.0 + std::exp(-4.9 * x)), 1e-15);
    EXPECT_EQ(out[1], 0.5);
    EXPECT_EQ(out[2], 0.5);
}

TEST(Phenotype, NoEnabledLinksMeansBiasOnlyOutputs)
{
    Genome g = two_input_genome(0.7, -1.2, 0.4);
    g.connections[1].enabled = false;
    g.connections[2].enabled = false;
    g.nodes[1].bias = -0.3;
    const auto p = net::Phenotype::decode(g);
    for (const std::vector<double> obs : {std::vector<double>{0.0, 0.0}, std::vector<double>{1.0, 0.2}}) {
        const auto out = p.activate(obs);
        EXPECT_EQ(out[0], net::steep_sigmoid(0.4));
        EXPECT_EQ(out[1], net::steep_sigmoid(-0.3));
        EXPECT_EQ(out[2], 0.5);
    }
}

TEST(Phenotype, UnreachableHiddenNodeStillFeedsOutputs)
{
    Genome g = two_input_genome(0.0, 0.0, 0.0);
    g.nodes[3] = {3, NodeKind::hidden, 0.8};
    g.connections[3] = {3, 3, 2, 2.0, true};
    const auto out = net::Phenotype::decode(g).activate(std::vector<double>{0.5, 0.5});
    EXPECT_NEAR(out[2], net::steep_sigmoid(2.0 * net::steep_sigmoid(0.8)), 1e-15);
}

TEST(Phenotype, RejectsWrongObservationWidth)
{
    const auto p = net::Phenotype::decode(two_input_genome(1, 1, 0));
    EXPECT_THROW((void)p.activate(std::vector<double>{1.0}), ContractError);
    EXPECT_THROW((void)p.activate(std::vector<double>{1.0, 2.0, 3.0}), ContractError);
}

TEST(Phenotype, RejectsCycles)
{
    Genome g = two_input_genome(1, 1, 0);
    g.nodes[3] = {3, NodeKind::hidden, 0.0};
    g.nodes[4] = {4, NodeKind::hidden, 0.0};
    g.connections[3] = {3, 3, 4, 1.0, true};
    g.connections[4] = {4, 4, 3, 1.0, true};
    EXPECT_THROW((void)net::Phenotype::decode(g), StructuralError);
    // A cycle through a disabled link is not part of the network.
    g.connections[4].enabled = false;
    EXPECT_NO_THROW((void)net::Phenotype::decode(g));
}

TEST(Phenotype, MissingOutputIsStructuralError)
{
    Genome g = two_input_genome(1, 1, 0);
    g.nodes.erase(2);
    EXPECT_THROW((void)net::Phenotype::decode(g), StructuralError);
}

TEST(Phenotype, MatchesRecursiveEvaluatorOnRandomGenomes)
{
    Rng rng(77);
    neat::InnovationRegistry registry;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> steps(0, 25);
    for (int i = 0; i < 500; ++i) {
        const Genome g = lswarm::testing::random_genome(rng, registry, 9, steps(rng), i);
        ASSERT_TRUE(g.is_acyclic());
        const auto p = net::Phenotype::decode(g);
        std::vector<double> scratch;
        for (int k = 0; k < 4; ++k) {
            std::vector<double> obs(9);
            for (double& x : obs) {
                x = u(rng);
            }
            const auto fast = p.activate(obs, scratch);
            const auto slow = recursive_eval(g, obs);
            for (std::size_t o = 0; o < 3; ++o) {
                ASSERT_NEAR(fast[o], slow[o], 1e-12) << "genome " << i << " output " << o;
                ASSERT_GT(fast[o], 0.0);
                ASSERT_LT(fast[o], 1.0);
            }
        }
    }
}

TEST(Phenotype, DecodeIsStableAcrossSerialization)
{
    Rng rng(3);
    neat::InnovationRegistry registry;
    const Genome g = lswarm::testing::random_genome(rng, registry, 41, 20, 7);
    const auto p = net::Phenotype::decode(g);
    EXPECT_EQ(p, net::Phenotype::decode(g));
    EXPECT_EQ(p, net::Phenotype::decode(neat::genome_from_string(neat::genome_to_string(g)).genome));
    std::vector<double> obs(41, 0.25);
    EXPECT_EQ(p.activate(obs), p.activate(obs));
}

TEST(WheelVelocities, AffineMap)
{
    EXPECT_EQ(net::to_wheel_velocities({0.5, 0.5, 0.5}, 2.0), (net::Action{0.0, 0.0, 0.0}));
    EXPECT_EQ(net::to_wheel_velocities({0.75, 0.25, 0.5}, 2.0), (net::Action{1.0, -1.0, 0.0}));
    const auto near_one = net::to_wheel_velocities({1.0, 0.0, 1.0}, 2.0);
    EXPECT_EQ(near_one, (net::Action{2.0, -2.0, 2.0}));
}

} // namespace
