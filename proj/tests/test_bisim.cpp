#include "support/generators.hpp"

#include <gtest/gtest.h>

using namespace wbisim;

namespace {

ExtRational q(long n, unsigned long d = 1) { return ExtRational(n, d); }

// a.tau.b next to a.b
Wlts<BooleanSemiring> milner_chains() {
    WltsBuilder<BooleanSemiring> b;
    for (auto n : {"p0", "p1", "p2", "p3", "q0", "q1", "q2"}) b.add_state(n);
    b.add_transition(0, "a", 1, true);
    b.add_transition(1, "tau", 2, true);
    b.add_transition(2, "b", 3, true);
    b.add_transition(4, "a", 5, true);
    b.add_transition(5, "b", 6, true);
    return b.build();
}

// a.(tau.b + c) + a.b versus a.(tau.b + c)
Wlts<BooleanSemiring> weak_not_delay() {
    WltsBuilder<BooleanSemiring> b;
    for (auto n : {"x", "u", "v", "end", "y", "u2", "v2", "end2", "w"}) b.add_state(n);
    b.add_transition(0, "a", 1, true);
    b.add_transition(0, "a", 8, true);
    b.add_transition(1, "tau", 2, true);
    b.add_transition(1, "c", 3, true);
    b.add_transition(2, "b", 3, true);
    b.add_transition(8, "b", 3, true);
    b.add_transition(4, "a", 5, true);
    b.add_transition(5, "tau", 6, true);
    b.add_transition(5, "c", 7, true);
    b.add_transition(6, "b", 7, true);
    return b.build();
}

template <Semiring S>
std::size_t total_growth(const RefinementTrace& t) {
    std::size_t g = 0;
    for (const auto& e : t.entries) g += e.blocks_after - e.blocks_before;
    return g;
}

}  // namespace

TEST(Strong, AllTerminalSingleBlock) {
    WltsBuilder<RealSemiring> b;
    b.add_states(5);
    b.add_action("a");
    EXPECT_EQ(strong_partition(b.build()), Partition::single_block(5));
}

TEST(Strong, DifferentLoopWeights) {
    WltsBuilder<RealSemiring> b;
    b.add_states(2);
    b.add_transition(0, "a", 0, q(1, 2));
    b.add_transition(1, "a", 1, q(1, 3));
    EXPECT_EQ(strong_partition(b.build()), Partition::discrete(2));
}

TEST(Strong, EqualLoopWeightsMerge) {
    WltsBuilder<RealSemiring> b;
    b.add_states(2);
    b.add_transition(0, "a", 0, q(1, 2));
    b.add_transition(1, "a", 1, q(1, 2));
    EXPECT_EQ(strong_partition(b.build()), Partition::single_block(2));
}

TEST(Strong, TauIsAnOrdinaryLabel) {
    auto w = milner_chains();
    auto p = strong_partition(w);
    EXPECT_FALSE(p.same_block(0, 4));
    EXPECT_FALSE(bisimilar(w, 0, 4, Equivalence::Strong));
}

TEST(Strong, MatchesOracleSmall) {
    gen::Rng rng(101);
    for (int round = 0; round < 40; ++round) {
        auto w = gen::random_system(RealSemiring{}, rng, {.states = 5, .actions = 2, .density = 0.3});
        EXPECT_EQ(strong_partition(w), oracle::brute_coarsest_partition(w, oracle::Mode::Strong));
    }
}

TEST(Weak, MilnerChains) {
    auto w = milner_chains();
    auto p = weak_partition(w);
    EXPECT_TRUE(p.same_block(0, 4));
    EXPECT_TRUE(p.same_block(1, 5));
    EXPECT_TRUE(p.same_block(1, 2));
    EXPECT_TRUE(p.same_block(3, 6));
    EXPECT_TRUE(bisimilar(w, 0, 4, Equivalence::Weak));
    EXPECT_EQ(p, oracle::milner_weak_oracle(w));
}

TEST(Weak, GenerativeTauPrefix) {
    // x -tau,1-> y -a,1-> z  versus  x2 -a,1-> z2
    WltsBuilder<RealSemiring> b;
    for (auto n : {"x", "y", "z", "x2", "z2"}) b.add_state(n);
    b.add_transition(0, "tau", 1, q(1));
    b.add_transition(1, "a", 2, q(1));
    b.add_transition(3, "a", 4, q(1));
    auto w = b.build();
    auto t = saturate(w, std::vector<StateId>{2, 4}, SaturationMode::Weak);
    EXPECT_EQ(t.w_act[0][0], q(1));
    EXPECT_EQ(t.w_act[0][3], q(1));
    EXPECT_TRUE(bisimilar(w, 0, 3, Equivalence::Weak));
    EXPECT_FALSE(bisimilar(w, 0, 3, Equivalence::Strong));
}

TEST(Weak, TauFreeCollapse) {
    gen::Rng rng(103);
    for (int round = 0; round < 60; ++round) {
        auto w = gen::random_system(RealSemiring{}, rng, {.states = 7, .actions = 2, .density = 0.3, .tau_density = 0});
        const auto strong = strong_partition(w);
        EXPECT_EQ(weak_partition(w), strong);
        EXPECT_EQ(delay_partition(w), strong);
    }
}

TEST(Weak, OutputIsStable) {
    gen::Rng rng(107);
    for (int round = 0; round < 60; ++round) {
        auto w = gen::random_system(RealSemiring{}, rng, {.states = 7, .actions = 2, .density = 0.25});
        EXPECT_TRUE(check_is_weak_bisimulation(w, weak_partition(w)).empty());
        EXPECT_TRUE(check_bisimulation(w, delay_partition(w), Equivalence::Delay).empty());
        EXPECT_TRUE(check_bisimulation(w, strong_partition(w), Equivalence::Strong).empty());
    }
}

TEST(Weak, CoarsestAmongMerges) {
    // merging any two blocks of the result must break the conditions
    gen::Rng rng(109);
    for (int round = 0; round < 40; ++round) {
        auto w = gen::random_system(BooleanSemiring{}, rng, {.states = 7, .actions = 2, .density = 0.2});
        const auto p = weak_partition(w);
        for (std::size_t i = 0; i < p.size(); ++i)
            for (std::size_t j = i + 1; j < p.size(); ++j) {
                auto blocks = p.blocks();
                blocks[i].insert(blocks[i].end(), blocks[j].begin(), blocks[j].end());
                blocks.erase(blocks.begin() + static_cast<std::ptrdiff_t>(j));
                auto coarser = Partition::from_blocks(w.state_count(), blocks);
                EXPECT_FALSE(check_is_weak_bisimulation(w, coarser).empty());
            }
    }
}

TEST(Delay, DiffersFromWeakOnNondeterminism) {
    auto w = weak_not_delay();
    EXPECT_TRUE(bisimilar(w, 0, 4, Equivalence::Weak));
    EXPECT_FALSE(bisimilar(w, 0, 4, Equivalence::Delay));
    EXPECT_EQ(weak_partition(w), oracle::milner_weak_oracle(w));
}

TEST(Delay, EqualsWeakOnGenerative) {
    gen::Rng rng(113);
    for (int round = 0; round < 40; ++round) {
        auto w = gen::random_generative(rng, 6, 2, false);
        EXPECT_EQ(weak_partition(w), delay_partition(w));
    }
}

TEST(Verify, Violations) {
    WltsBuilder<BooleanSemiring> b;
    b.add_states(3);
    b.add_transition(0, "a", 1, true);
    auto w = b.build();
    auto v = check_is_weak_bisimulation(w, Partition::single_block(3));
    ASSERT_FALSE(v.empty());
    EXPECT_EQ(v.front().label, Label::action(0));
    EXPECT_EQ(v.front().splitter, 0u);
    EXPECT_TRUE(check_is_weak_bisimulation(w, Partition::discrete(3)).empty());
}

TEST(Verify, DiscreteAlwaysPasses) {
    gen::Rng rng(127);
    for (int round = 0; round < 20; ++round) {
        auto w = gen::random_system(RealSemiring{}, rng, {.states = 6, .actions = 2, .density = 0.4});
        EXPECT_TRUE(check_is_weak_bisimulation(w, Partition::discrete(6)).empty());
    }
}

TEST(Engine, Reflexive) {
    auto w = milner_chains();
    for (StateId x = 0; x < w.state_count(); ++x)
        for (auto eq : {Equivalence::Strong, Equivalence::Weak, Equivalence::Delay}) EXPECT_TRUE(bisimilar(w, x, x, eq));
    EXPECT_THROW(bisimilar(w, 0, 99, Equivalence::Weak), std::out_of_range);
}

TEST(Engine, EmptySystem) {
    WltsBuilder<RealSemiring> b;
    EXPECT_EQ(weak_partition(b.build()).size(), 0u);
}

TEST(Engine, TraceGrowsStrictly) {
    gen::Rng rng(131);
    for (int round = 0; round < 40; ++round) {
        auto w = gen::random_system(RealSemiring{}, rng, {.states = 8, .actions = 2, .density = 0.3});
        auto r = refine(w, Equivalence::Weak);
        for (const auto& e : r.trace.entries) {
            EXPECT_GT(e.blocks_after, e.blocks_before);
            EXPECT_GE(e.blocks_after - e.blocks_before, e.blocks_split);
        }
        EXPECT_LE(total_growth<RealSemiring>(r.trace), w.state_count() - 1);
        EXPECT_EQ(r.partition.size(), 1 + total_growth<RealSemiring>(r.trace));
    }
}

TEST(Engine, Deterministic) {
    gen::Rng rng(137);
    for (int round = 0; round < 10; ++round) {
        auto w = gen::random_system(RealSemiring{}, rng, {.states = 10, .actions = 3, .density = 0.2});
        auto a = refine(w, Equivalence::Weak);
        auto b = refine(w, Equivalence::Weak, {.strategy = SplitStrategy::Sorted, .saturation = {.parallel = true}, .initial = {}});
        EXPECT_EQ(a.partition, b.partition);
        ASSERT_EQ(a.trace.entries.size(), b.trace.entries.size());
        for (std::size_t i = 0; i < a.trace.entries.size(); ++i) {
            EXPECT_EQ(a.trace.entries[i].splitter, b.trace.entries[i].splitter);
            EXPECT_EQ(a.trace.entries[i].label, b.trace.entries[i].label);
        }
    }
}

TEST(Engine, PermutationInvariant) {
    gen::Rng rng(139);
    for (int round = 0; round < 30; ++round) {
        auto w = gen::random_system(RealSemiring{}, rng, {.states = 7, .actions = 2, .density = 0.3});
        std::vector<StateId> perm;
        auto pw = gen::permuted(w, rng, &perm);
        const auto p = weak_partition(w), pp = weak_partition(pw);
        for (StateId x = 0; x < 7; ++x)
            for (StateId y = 0; y < 7; ++y) EXPECT_EQ(p.same_block(x, y), pp.same_block(perm[x], perm[y]));
    }
}

TEST(Engine, PairwiseMatchesSorted) {
    gen::Rng rng(149);
    for (int round = 0; round < 30; ++round) {
        auto w = gen::random_system(TropicalSemiring{}, rng, {.states = 7, .actions = 2, .density = 0.3});
        for (auto eq : {Equivalence::Strong, Equivalence::Weak, Equivalence::Delay})
            EXPECT_EQ(partition_for(w, eq), partition_for(w, eq, {.strategy = SplitStrategy::Pairwise}));
    }
}

TEST(Engine, SignaturePreSplit) {
    gen::Rng rng(151);
    for (int round = 0; round < 40; ++round) {
        auto w = gen::random_system(RealSemiring{}, rng, {.states = 7, .actions = 2, .density = 0.25});
        for (auto eq : {Equivalence::Weak, Equivalence::Delay}) {
            const auto sig = signature_partition(w, eq);
            const auto plain = partition_for(w, eq);
            EXPECT_TRUE(plain.refines(sig));
            EXPECT_EQ(partition_for(w, eq, {.initial = sig}), plain);
        }
    }
}

TEST(Engine, FloatAgreesWithExact) {
    gen::Rng rng(157);
    for (int round = 0; round < 30; ++round) {
        auto exact = gen::random_generative(rng, 6, 2, false);
        WltsBuilder<RealFloatSemiring> b;
        for (const auto& a : exact.actions()) b.add_action(a);
        for (const auto& n : exact.state_names()) b.add_state(n);
        for (StateId x = 0; x < exact.state_count(); ++x)
            for (Label l : exact.labels())
                for (const auto& e : exact.successors(x, l)) b.add_transition(x, l, e.target, e.weight.to_double());
        auto approx = b.build();
        EXPECT_EQ(weak_partition(approx), weak_partition(exact));
    }
}

TEST(Engine, SolverFailureNamesSplitter) {
    gen::Rng rng(163);
    bool seen = false;
    for (int round = 0; round < 300 && !seen; ++round) {
        auto w = gen::random_system(RealFloatSemiring{0.0}, rng, {.states = 6, .actions = 1, .density = 0.5});
        try {
            weak_partition(w);
        } catch (const SplitterFailure& e) {
            seen = true;
            EXPECT_FALSE(e.splitter.empty());
            EXPECT_NE(std::string(e.what()).find("splitter"), std::string::npos);
        }
    }
    EXPECT_TRUE(seen);
}

TEST(Split, Examples) {
    RealSemiring s;
    const std::vector<StateId> block{1, 2, 3};
    const std::vector<ExtRational> same{q(1), q(1), q(1)}, mixed{q(1, 2), q(1, 3), q(1, 2)},
        distinct{q(1), q(2), q(3)};
    for (auto split : {+[](const RealSemiring& r, std::span<const StateId> b, const std::vector<ExtRational>& w) {
                          return split_block(r, b, w);
                      },
                       +[](const RealSemiring& r, std::span<const StateId> b, const std::vector<ExtRational>& w) {
                           return split_block_sorted(r, b, w);
                       }}) {
        EXPECT_EQ(split(s, block, same), (std::vector<std::vector<StateId>>{{1, 2, 3}}));
        EXPECT_EQ(split(s, block, mixed), (std::vector<std::vector<StateId>>{{1, 3}, {2}}));
        EXPECT_EQ(split(s, block, distinct).size(), 3u);
        EXPECT_TRUE(split(s, std::span<const StateId>{}, {}).empty());
    }
}

TEST(Split, SortedMatchesPairwiseOnManyWeights) {
    gen::Rng rng(167);
    TropicalSemiring s;
    std::vector<StateId> block(10000);
    std::vector<ExtRational> weights;
    for (StateId i = 0; i < block.size(); ++i) {
        block[i] = i;
        weights.push_back(gen::coin(rng, 0.05) ? ExtRational::pos_inf() : ExtRational(static_cast<long>(gen::uniform(rng, 0, 40)), 4));
    }
    EXPECT_EQ(split_block(s, block, weights), split_block_sorted(s, block, weights));
}
