#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "seqdac/sigmoid_env.hpp"
#include "support.hpp"

using namespace seqdac;
using namespace seqdac::testing;

TEST_CASE("sig: value at the inflection point is 0.5 for any slope") {
    for (double s : {-50.0, -1.0, 0.3, 7.0, 99.0})
        CHECK(sigmoid_target(3.0, s, 3.0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("sig: zero slope is flat at 0.5") {
    for (double t : {-4.0, 0.0, 2.5, 10.0})
        CHECK(sigmoid_target(t, 0.0, 5.0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("sig: unit slope one step past the inflection") {
    CHECK(sigmoid_target(6.0, 1.0, 5.0) ==
          doctest::Approx(1.0 / (1.0 + std::exp(-1.0))).epsilon(1e-15));
    CHECK(sigmoid_target(6.0, 1.0, 5.0) == doctest::Approx(0.7310585786300049));
}

TEST_CASE("alpha: first hyperparameter is unscaled") {
    CHECK(sigmoid_alpha(0, 0.0) == 1.0);
    CHECK(sigmoid_alpha(0, 0.9) == 1.0);
}

TEST_CASE("alpha: 0.5 boundary is inclusive") {
    CHECK(sigmoid_alpha(1, 0.5) == 10.0);
    CHECK(sigmoid_alpha(1, 0.4) == 0.1);
    CHECK(sigmoid_alpha(3, 0.7) == 10.0);
}

TEST_CASE("plain reward is 1 when actions hit the targets exactly") {
    SigmoidConfig cfg;
    cfg.variant = SigmoidVariant::Plain;
    cfg.hyperparams = 2;
    cfg.choices = 10;
    SigmoidEnv env(cfg);
    Rng rng(1);
    env.reset(rng);
    // craft an instance whose targets are exactly on the action grid
    SigmoidEnv crafted(cfg);
    Rng rng2(2);
    crafted.reset(rng2);
    // with slope 0 every target is 0.5, action value 5/10 matches exactly
    const_cast<SigmoidInstance&>(crafted.instance()).slopes = {0.0, 0.0};
    std::vector<int> actions = {5, 5};
    CHECK(crafted.reward_at(3, actions) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("seq reward is symmetric about 0.5 in each action") {
    SigmoidConfig cfg;
    cfg.variant = SigmoidVariant::Seq;
    cfg.hyperparams = 1;
    cfg.choices = 10;
    SigmoidEnv env(cfg);
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        env.reset(rng);
        for (int a = 0; a <= 5; ++a) {
            int mirrored = 10 - a; // a/10 and 1 - a/10 sit symmetric about 0.5
            if (mirrored > 9) continue;
            std::vector<int> low = {a}, high = {mirrored};
            CHECK(env.reward_at(4, low) ==
                  doctest::Approx(env.reward_at(4, high)).epsilon(1e-12));
        }
    }
}

TEST_CASE("seq reward hand case evaluates to 1") {
    // H=2, T=10, t=5, s=(1,1), p=(5,5), a=(0.5,0.5): both factors are exactly
    // 1 because sig(5,s,5) = 0.5 for any slope, including the alpha-scaled one.
    SigmoidConfig cfg;
    cfg.variant = SigmoidVariant::Seq;
    cfg.hyperparams = 2;
    cfg.choices = 10;
    cfg.horizon = 10;
    SigmoidEnv env(cfg);
    Rng rng(4);
    env.reset(rng);
    auto& instance = const_cast<SigmoidInstance&>(env.instance());
    instance.slopes = {1.0, 1.0};
    instance.inflections = {5.0, 5.0};
    std::vector<int> actions = {5, 5};
    CHECK(env.reward_at(5, actions) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("mask state is the normalized step alone") {
    SigmoidConfig cfg;
    cfg.variant = SigmoidVariant::SeqMask;
    cfg.hyperparams = 4;
    cfg.horizon = 10;
    SigmoidEnv env(cfg);
    CHECK(env.state_dim() == 1);
    Rng rng(5);
    std::vector<double> s0 = env.reset(rng);
    CHECK(s0 == std::vector<double>{0.0});
    std::vector<int> actions(4, 0);
    env.step(actions);
    env.step(actions);
    env.step(actions);
    StepResult sr = env.step(actions);
    CHECK(sr.next_state == std::vector<double>{0.4});
    // mask forces unit slopes
    for (double s : env.instance().slopes) CHECK(s == 1.0);
}

TEST_CASE("seq state is [slopes/100, inflections/T, t/T]") {
    SigmoidConfig cfg;
    cfg.variant = SigmoidVariant::Seq;
    cfg.hyperparams = 2;
    cfg.horizon = 10;
    SigmoidEnv env(cfg);
    CHECK(env.state_dim() == 5);
    Rng rng(6);
    std::vector<double> s = env.reset(rng);
    REQUIRE(s.size() == 5);
    CHECK(s[0] == doctest::Approx(env.instance().slopes[0] / 100.0));
    CHECK(s[1] == doctest::Approx(env.instance().slopes[1] / 100.0));
    CHECK(s[2] == doctest::Approx(env.instance().inflections[0] / 10.0));
    CHECK(s[3] == doctest::Approx(env.instance().inflections[1] / 10.0));
    CHECK(s[4] == 0.0);
}

TEST_CASE("same seed reproduces instance and state") {
    SigmoidConfig cfg;
    cfg.variant = SigmoidVariant::Seq;
    cfg.hyperparams = 3;
    SigmoidEnv a(cfg), b(cfg);
    Rng ra(777), rb(777);
    CHECK(a.reset(ra) == b.reset(rb));
    CHECK(a.instance().slopes == b.instance().slopes);
    CHECK(a.instance().inflections == b.instance().inflections);
}

TEST_CASE("reward stays within [0, 1] for all variants") {
    for (SigmoidVariant variant : {SigmoidVariant::Plain, SigmoidVariant::Seq,
                                   SigmoidVariant::SeqMask, SigmoidVariant::SeqRobust}) {
        SigmoidConfig cfg;
        cfg.variant = variant;
        cfg.hyperparams = 3;
        cfg.robust_n = 1;
        SigmoidEnv env(cfg);
        Rng rng(11);
        for (int e = 0; e < 10; ++e) {
            env.reset(rng);
            std::vector<int> actions(3);
            while (!env.done()) {
                for (int& a : actions) a = rng.uniform_int(cfg.choices);
                StepResult sr = env.step(actions);
                CHECK(sr.reward >= 0.0);
                CHECK(sr.reward <= 1.0);
            }
        }
    }
}

TEST_CASE("crossing the 0.5 boundary flips the follower's reward landscape") {
    // With alpha jumping from 0.1 to 10, the target sigmoid for agent 2
    // changes steepness. When the two scaled targets are numerically
    // distinguishable, the follower's reward landscape over a_2 must differ;
    // that has to be the typical case over random instances (it only fails
    // when both scalings saturate to the same 0/1 limit).
    SigmoidConfig cfg;
    cfg.variant = SigmoidVariant::Seq;
    cfg.hyperparams = 2;
    cfg.choices = 10;
    cfg.horizon = 10;
    SigmoidEnv env(cfg);
    Rng rng(12);
    int differing_instances = 0;
    const int trials = 30;
    for (int trial = 0; trial < trials; ++trial) {
        env.reset(rng);
        int t = 4; // near the mean inflection, never exactly on it w.p. 1
        double s2 = env.instance().slopes[1];
        double p2 = env.instance().inflections[1];
        if (std::fabs(p2 - t) < 1e-9) continue;
        double target_low = sigmoid_target(t, 0.1 * s2, p2);
        double target_high = sigmoid_target(t, 10.0 * s2, p2);
        bool targets_differ = std::fabs(target_low - target_high) > 1e-9;

        // follower factor with the leader on either side of the boundary
        auto follower_factor = [&](int lead_action, int a2) {
            double lead_target = sigmoid_target(t, env.instance().slopes[0],
                                                env.instance().inflections[0]);
            double lead_value = lead_action / 10.0;
            double lead_factor = 1.0 - std::min(std::fabs(lead_target - lead_value),
                                                std::fabs(1.0 - lead_target - lead_value));
            std::vector<int> joint = {lead_action, a2};
            return std::make_pair(env.reward_at(t, joint), lead_factor);
        };
        bool any_diff = false;
        for (int a2 = 0; a2 < cfg.choices; ++a2) {
            auto [r_low, lead_low] = follower_factor(4, a2);  // 0.4 -> alpha 0.1
            auto [r_high, lead_high] = follower_factor(5, a2); // 0.5 -> alpha 10
            if (lead_low < 1e-12 || lead_high < 1e-12) continue;
            if (std::fabs(r_low / lead_low - r_high / lead_high) > 1e-9) any_diff = true;
        }
        if (targets_differ) {
            CHECK(any_diff);
            ++differing_instances;
        }
    }
    CHECK(differing_instances >= trials * 2 / 3);
}

TEST_CASE("robust variant ignores the submitted action at randomized indices") {
    SigmoidConfig cfg;
    cfg.variant = SigmoidVariant::SeqRobust;
    cfg.hyperparams = 5;
    cfg.robust_n = 1;
    SigmoidEnv env(cfg);
    CHECK(env.config().robust_indices == std::vector<int>{2});

    Rng rng(13);
    std::vector<long> counts(cfg.choices, 0);
    long total = 0;
    while (total < 10000) {
        env.reset(rng);
        std::vector<int> actions(5, 0); // always submit action 0
        while (!env.done() && total < 10000) {
            env.step(actions);
            ++counts[env.last_realized_actions()[2]];
            ++total;
        }
    }
    // chi-square against uniform over 10 values; 27.88 is the 0.999 quantile
    // for 9 degrees of freedom
    double expected = static_cast<double>(total) / cfg.choices;
    double chi2 = 0.0;
    for (long c : counts) chi2 += (c - expected) * (c - expected) / expected;
    CHECK(chi2 < 27.88);
    // non-randomized indices keep the submitted action
    CHECK(env.last_realized_actions()[0] == 0);
    CHECK(env.last_realized_actions()[4] == 0);
}

TEST_CASE("robust(2) randomizes the two middle indices") {
    SigmoidConfig cfg;
    cfg.variant = SigmoidVariant::SeqRobust;
    cfg.hyperparams = 5;
    cfg.robust_n = 2;
    SigmoidEnv env(cfg);
    CHECK(env.config().robust_indices == std::vector<int>{2, 3});
}

TEST_CASE("stepping a finished episode throws until reset") {
    SigmoidConfig cfg;
    cfg.hyperparams = 2;
    cfg.horizon = 2;
    SigmoidEnv env(cfg);
    Rng rng(14);
    env.reset(rng);
    std::vector<int> actions = {0, 0};
    while (!env.done()) env.step(actions);
    CHECK_THROWS_AS(env.step(actions), std::logic_error);
    env.reset(rng);
    CHECK_NOTHROW(env.step(actions));
}
