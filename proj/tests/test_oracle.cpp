#include "support/generators.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace wbisim;
using namespace wbisim::oracle;

namespace {

ExtRational q(long n, unsigned long d = 1) { return ExtRational(n, d); }

Wlts<RealSemiring> example41() {
    std::ifstream f(std::string(WBISIM_SAMPLES_DIR) + "/example41.json");
    std::ostringstream os;
    os << f.rdbuf();
    return std::get<Wlts<RealSemiring>>(load(os.str()).system);
}

FinitePath path(const Wlts<RealSemiring>& w, const std::string& start,
                std::vector<std::pair<std::string, std::string>> steps) {
    FinitePath p{*w.find_state(start), {}};
    for (const auto& [label, to] : steps) p = p.extended(*w.find_label(label), *w.find_state(to));
    return p;
}

}  // namespace

TEST(Selector, Membership) {
    const Label t = Label::tau(), a = Label::action(0), b = Label::action(1);
    auto m = [](const TraceSelector& s, std::vector<Label> tr) { return s.matches(tr); };
    EXPECT_TRUE(m(TraceSelector::tau_star(), {}));
    EXPECT_TRUE(m(TraceSelector::tau_star(), {t, t}));
    EXPECT_FALSE(m(TraceSelector::tau_star(), {t, a}));
    EXPECT_TRUE(m(TraceSelector::weak(a), {t, a, t, t}));
    EXPECT_TRUE(m(TraceSelector::weak(a), {a}));
    EXPECT_FALSE(m(TraceSelector::weak(a), {t, t}));
    EXPECT_FALSE(m(TraceSelector::weak(a), {a, a}));
    EXPECT_FALSE(m(TraceSelector::weak(a), {b}));
    EXPECT_TRUE(m(TraceSelector::delay(a), {t, t, a}));
    EXPECT_FALSE(m(TraceSelector::delay(a), {a, t}));
}

TEST(Admissible, EmptyPathInsideClass) {
    auto w = example41();
    const std::vector<StateId> cls{0};
    auto paths = enumerate_admissible(w, 0, TraceSelector::tau_star(), std::span<const StateId>(cls), 10);
    ASSERT_EQ(paths.size(), 1u);
    EXPECT_EQ(paths[0].length(), 0u);
    auto bw = brute_weight(w, 0, TraceSelector::tau_star(), std::span<const StateId>(cls), 10);
    EXPECT_EQ(bw.value, q(1));
    EXPECT_FALSE(bw.truncated);
}

TEST(Admissible, ZeroLengthBudget) {
    auto w = example41();
    const std::vector<StateId> cls{*w.find_state("x5")};
    EXPECT_TRUE(enumerate_admissible(w, 0, TraceSelector::weak(Label::action(0)), std::span<const StateId>(cls), 0).empty());
}

TEST(Admissible, EmptySetHasZeroWeight) {
    auto w = example41();
    const std::vector<StateId> cls{*w.find_state("x6")};
    auto bw = brute_weight(w, *w.find_state("x4"), TraceSelector::weak(Label::action(0)), std::span<const StateId>(cls), 20);
    EXPECT_EQ(bw.value, q(0));
    EXPECT_FALSE(bw.truncated);
}

TEST(Example41, AdmissiblePaths) {
    auto w = example41();
    const Label a = *w.find_label("a");
    const std::vector<StateId> cls{*w.find_state("x2"), *w.find_state("x4"), *w.find_state("x5")};
    const auto t = TraceSelector::weak(a);
    auto paths = enumerate_admissible(w, 0, t, std::span<const StateId>(cls), 20);

    const auto direct = path(w, "x", {{"a", "x4"}});
    const auto long_way = path(w, "x", {{"b", "x1"}, {"b", "x2"}, {"b", "x3"}, {"a", "x5"}});
    ASSERT_EQ(paths.size(), 2u);
    EXPECT_NE(std::ranges::find(paths, direct), paths.end());
    EXPECT_NE(std::ranges::find(paths, long_way), paths.end());

    // ends in C but its trace bb is not of the form b*ab*
    const auto wrong_trace = path(w, "x", {{"b", "x1"}, {"b", "x2"}});
    EXPECT_FALSE(t.matches(wrong_trace.trace()));
    EXPECT_EQ(std::ranges::find(paths, wrong_trace), paths.end());
    // matching trace, but its prefix x -a-> x4 already reaches C
    const auto early = path(w, "x", {{"a", "x4"}, {"b", "x5"}});
    EXPECT_TRUE(t.matches(early.trace()));
    EXPECT_TRUE(direct.is_prefix_of(early));
    EXPECT_EQ(std::ranges::find(paths, early), paths.end());
    // passes through x2 in C before the observable; still admissible
    EXPECT_TRUE(std::ranges::find(long_way.steps, std::make_pair(Label::tau(), *w.find_state("x2"))) !=
                long_way.steps.end());

    EXPECT_EQ(paths, minimal_support(paths));
}

TEST(Example41, Weight) {
    auto w = example41();
    const std::vector<StateId> cls{*w.find_state("x2"), *w.find_state("x4"), *w.find_state("x5")};
    auto bw = brute_weight(w, 0, TraceSelector::weak(Label::action(0)), std::span<const StateId>(cls), 20);
    EXPECT_FALSE(bw.truncated);
    // 1/5 + 1/2 * 1/3 * 1/4 * 1/8
    EXPECT_EQ(bw.value, q(197, 960));
    auto t = saturate(w, cls, SaturationMode::Weak);
    EXPECT_EQ(t.w_act[0][0], q(197, 960));
}

TEST(BruteWeight, BooleanCyclicIsReachability) {
    gen::Rng rng(211);
    for (int round = 0; round < 100; ++round) {
        const std::size_t n = gen::uniform(rng, 2, 6);
        auto w = gen::random_system(BooleanSemiring{}, rng, {.states = n, .actions = 1, .density = 0.3});
        auto arrows = double_arrow_system(w);
        std::vector<StateId> cls{gen::uniform(rng, 0, n - 1)};
        for (StateId x = 0; x < n; ++x) {
            for (auto t : {TraceSelector::tau_star(), TraceSelector::weak(Label::action(0))}) {
                auto bw = brute_weight(w, x, t, std::span<const StateId>(cls), n * (n + 1));
                EXPECT_FALSE(bw.truncated);
                const Label l = t.kind() == TraceSelector::Kind::TauStar ? Label::tau() : Label::action(0);
                EXPECT_EQ(bw.value, arrows.weight(x, l, cls[0]));
            }
        }
    }
}

TEST(BruteWeight, TruncationFlag) {
    // tau self-loop: admissible paths of every length exist
    WltsBuilder<RealSemiring> b;
    b.add_states(2);
    b.add_transition(0, Label::tau(), 0, q(1, 2));
    b.add_transition(0, Label::tau(), 1, q(1, 2));
    auto w = b.build();
    const std::vector<StateId> cls{1};
    auto bw = brute_weight(w, 0, TraceSelector::tau_star(), std::span<const StateId>(cls), 6);
    EXPECT_TRUE(bw.truncated);
    // partial sum 1 - 2^-6 after paths of length <= 6
    EXPECT_EQ(bw.value, q(63, 64));
}

TEST(BruteWeight, UnproductiveCycleIsNotTruncation) {
    WltsBuilder<RealSemiring> b;
    b.add_states(3);
    b.add_transition(0, Label::tau(), 1, q(1, 2));
    b.add_transition(1, Label::tau(), 1, q(1, 2));
    b.add_transition(0, Label::tau(), 2, q(1, 2));
    auto w = b.build();
    const std::vector<StateId> cls{2};
    auto bw = brute_weight(w, 0, TraceSelector::tau_star(), std::span<const StateId>(cls), 3);
    EXPECT_FALSE(bw.truncated);
    EXPECT_EQ(bw.value, q(1, 2));
}

TEST(Admissible, PrefixFreeAndMinimalSupportOfReachSet) {
    gen::Rng rng(223);
    for (int round = 0; round < 100; ++round) {
        auto w = gen::random_system(RealSemiring{}, rng, {.states = 6, .actions = 2, .density = 0.3, .acyclic = true});
        std::vector<char> mask(6);
        for (auto& m : mask) m = gen::coin(rng, 0.4);
        for (auto t : {TraceSelector::tau_star(), TraceSelector::weak(Label::action(1)), TraceSelector::delay(Label::action(0))}) {
            const StateId x = gen::uniform(rng, 0, 5);
            auto adm = enumerate_admissible(w, x, t, std::span<const char>(mask), 6);
            for (const auto& p : adm)
                for (const auto& r : adm)
                    if (!(p == r)) EXPECT_FALSE(p.is_prefix_of(r));
            EXPECT_EQ(adm, minimal_support(enumerate_reaching(w, x, t, std::span<const char>(mask), 6)));
        }
    }
}

TEST(MinimalSupport, Examples) {
    const FinitePath p{0, {{Label::action(0), 1}}};
    const auto longer = p.extended(Label::tau(), 2);
    EXPECT_EQ(minimal_support({p, longer}), std::vector<FinitePath>{p});
    const FinitePath other{0, {{Label::action(1), 3}}};
    auto free = minimal_support({p, other});
    EXPECT_EQ(free.size(), 2u);
    EXPECT_TRUE(minimal_support({}).empty());
}

TEST(MinimalSupport, IdempotentAndOrderIndependent) {
    gen::Rng rng(227);
    for (int round = 0; round < 50; ++round) {
        auto w = gen::random_system(RealSemiring{}, rng, {.states = 5, .actions = 1, .density = 0.4});
        std::vector<char> mask{1, 0, 1, 0, 0};
        auto reach = enumerate_reaching(w, 0, TraceSelector::weak(Label::action(0)), std::span<const char>(mask), 4);
        auto once = minimal_support(reach);
        EXPECT_EQ(minimal_support(once), once);
        std::shuffle(reach.begin(), reach.end(), rng);
        EXPECT_EQ(minimal_support(reach), once);
    }
}

TEST(Cones, NestedOrDisjoint) {
    WltsBuilder<BooleanSemiring> b;
    b.add_states(4);
    b.add_transition(0, "a", 1, true);
    b.add_transition(0, "a", 2, true);
    b.add_transition(1, "b", 3, true);
    b.add_transition(3, "a", 0, true);
    auto w = b.build();
    const FinitePath root{0, {}};
    const auto left = root.extended(Label::action(0), 1);
    const auto right = root.extended(Label::action(0), 2);
    const auto deeper = left.extended(Label::action(1), 3);
    EXPECT_TRUE(cones_nested_or_disjoint(w, left, deeper, 4));
    EXPECT_TRUE(cones_nested_or_disjoint(w, left, right, 4));
    EXPECT_TRUE(cones_nested_or_disjoint(w, left, left, 4));
    EXPECT_TRUE(cones_nested_or_disjoint(w, root, right, 4));
}

TEST(Coarsest, Small) {
    WltsBuilder<RealSemiring> one;
    one.add_states(1);
    EXPECT_EQ(brute_coarsest_partition(one.build(), Mode::Weak), Partition::single_block(1));

    WltsBuilder<RealSemiring> loops;
    loops.add_states(2);
    loops.add_transition(0, "a", 0, q(1, 2));
    loops.add_transition(1, "a", 1, q(1, 2));
    auto w = loops.build();
    EXPECT_EQ(brute_coarsest_partition(w, Mode::Strong), Partition::single_block(2));
    // paths a a a ... are admissible only up to the first return to C
    EXPECT_EQ(brute_coarsest_partition(w, Mode::Weak), Partition::single_block(2));
}

TEST(Coarsest, TruncationRaises) {
    WltsBuilder<RealSemiring> b;
    b.add_states(3);
    b.add_transition(0, Label::tau(), 0, q(1, 2));
    b.add_transition(0, Label::tau(), 1, q(1, 2));
    b.add_transition(1, "a", 2, q(1));
    EXPECT_THROW(brute_coarsest_partition(b.build(), Mode::Weak), OracleTruncated);
}

TEST(Coarsest, TooManyStates) {
    WltsBuilder<BooleanSemiring> b;
    b.add_states(max_enumeration_states + 1);
    EXPECT_THROW(brute_coarsest_partition(b.build(), Mode::Strong), std::invalid_argument);
}

TEST(Coarsest, AgreesWithEngineAllModes) {
    gen::Rng rng(229);
    for (int round = 0; round < 30; ++round) {
        auto w = gen::random_system(RealSemiring{}, rng, {.states = 5, .actions = 2, .density = 0.3, .acyclic = true});
        EXPECT_EQ(brute_coarsest_partition(w, Mode::Strong), strong_partition(w));
        EXPECT_EQ(brute_coarsest_partition(w, Mode::Weak), weak_partition(w));
        EXPECT_EQ(brute_coarsest_partition(w, Mode::Delay), delay_partition(w));
    }
}

TEST(Milner, TauFreeIsStrong) {
    gen::Rng rng(233);
    for (int round = 0; round < 30; ++round) {
        auto w = gen::random_system(BooleanSemiring{}, rng, {.states = 6, .actions = 2, .density = 0.3, .tau_density = 0});
        EXPECT_EQ(milner_weak_oracle(w), naive_strong_lts_partition(w));
        EXPECT_EQ(milner_weak_oracle(w), strong_partition(w));
    }
}

TEST(Milner, Chains) {
    auto loaded = load(R"({"semiring": "boolean", "actions": ["a", "b"],
        "states": ["p0", "p1", "p2", "p3", "q0", "q1", "q2"],
        "transitions": [{"from": "p0", "label": "a", "to": "p1"}, {"from": "p1", "label": "tau", "to": "p2"},
                        {"from": "p2", "label": "b", "to": "p3"}, {"from": "q0", "label": "a", "to": "q1"},
                        {"from": "q1", "label": "b", "to": "q2"}]})");
    const auto& w = std::get<Wlts<BooleanSemiring>>(loaded.system);
    auto p = milner_weak_oracle(w);
    EXPECT_TRUE(p.same_block(0, 4));
    EXPECT_FALSE(naive_strong_lts_partition(w).same_block(0, 4));
}

TEST(Milner, SilentCycleLooksTerminal) {
    WltsBuilder<BooleanSemiring> b;
    b.add_states(4);
    b.add_action("a");
    b.add_transition(0, Label::tau(), 1, true);
    b.add_transition(1, Label::tau(), 2, true);
    b.add_transition(2, Label::tau(), 0, true);
    auto w = b.build();
    EXPECT_EQ(milner_weak_oracle(w), Partition::single_block(4));
    EXPECT_EQ(weak_partition(w), Partition::single_block(4));
}

TEST(Milner, RejectsWeightedInstances) {
    WltsBuilder<RealSemiring> b;
    b.add_states(1);
    EXPECT_THROW(milner_weak_oracle(b.build()), std::invalid_argument);
}
