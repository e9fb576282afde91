#include "lpsim/strategies.hpp"

#include "support.hpp"

#include <doctest.h>

using namespace lpsim;
using namespace lpsim::test;

TEST_CASE("liquidation avoidance thresholds on the worked example") {
    ProtocolParams params = demo_params();
    BlockchainState state = demo_after(6);  // H(B) = 0.89

    auto rep = liquidation_avoidance_threshold(params, state, addr("B"), AvoidanceAction::Rep,
                                               tok("T0"));
    REQUIRE(rep.ok());
    CHECK(rep.value().min_amount == Rat(577, 195));  // (37.18 - 100/3) / 1.3, about 2.959
    CHECK(rep.value().affordable);                   // B holds 25:T0 and owes 28.6

    auto dep = liquidation_avoidance_threshold(params, state, addr("B"), AvoidanceAction::Dep,
                                               tok("T1"));
    REQUIRE(dep.ok());
    CHECK(dep.value().min_amount == Rat(577, 100));  // 37.18 * 3/2 - 50 = 5.77

    auto healthy =
        liquidation_avoidance_threshold(params, demo_after(5), addr("B"), AvoidanceAction::Rep,
                                        tok("T0"));
    REQUIRE(!healthy.ok());
    CHECK(healthy.error().code == StepErrorCode::BorrowerHealthy);
}

TEST_CASE("paying the threshold disables the foreseen liquidation") {
    ProtocolParams params = demo_params();
    BlockchainState state = demo_after(6);
    Liquidate foreseen{addr("A"), addr("B"), Rat(11), tok("T0"), tok("T1")};
    REQUIRE(is_enabled(params, state, foreseen).enabled);

    Rat threshold = liquidation_avoidance_threshold(params, state, addr("B"),
                                                    AvoidanceAction::Rep, tok("T0"))
                        .value()
                        .min_amount;

    // rep(2.96) pushes health to 1 and turns the -1.43 loss into 0.
    for (const Rat& v : {threshold, rat("2.96"), Rat(5)}) {
        Trace defended{Repay{addr("B"), v, tok("T0")}, foreseen};
        GainReport report = gain(params, state, addr("B"), defended);
        CHECK(report.skipped_steps == std::vector<size_t>{1});
        CHECK(report.definitional_gain == Rat(0));
        auto mid = apply(params, state, Repay{addr("B"), v, tok("T0")});
        CHECK(health_factor(params, mid.value(), addr("B")) >= Rat(1));
    }
    CHECK(gain(params, state, addr("B"), {foreseen}).definitional_gain == rat("-1.43"));

    // Strictly below the threshold the user stays liquidatable: the original
    // 11-unit liquidation would now overshoot health 1, but a small one is
    // still enabled.
    Rat shy = threshold - Rat(1, 1000);
    auto mid = apply(params, state, Repay{addr("B"), shy, tok("T0")});
    REQUIRE(mid.ok());
    CHECK(health_factor(params, mid.value(), addr("B")) < Rat(1));
    CHECK(!is_enabled(params, mid.value(), foreseen).enabled);
    CHECK(is_enabled(params, mid.value(),
                     Liquidate{addr("A"), addr("B"), Rat(1, 1000), tok("T0"), tok("T1")})
              .enabled);

    // Same story for the deposit route (in the other token).
    Rat dep_threshold = liquidation_avoidance_threshold(params, state, addr("B"),
                                                        AvoidanceAction::Dep, tok("T1"))
                            .value()
                            .min_amount;
    // B holds no T1 in the wallet at this point; fund it first.
    BlockchainState funded = state;
    set_balance(funded.wallet.balances, tok("T1"), addr("B"), Rat(10));
    auto post = apply(params, funded, Deposit{addr("B"), dep_threshold, tok("T1")});
    REQUIRE(post.ok());
    CHECK(health_factor(params, post.value(), addr("B")) == Rat(1));
    CHECK(!is_enabled(params, post.value(), foreseen).enabled);
}

TEST_CASE("repay reaches the threshold with a smaller amount than deposit") {
    ProtocolParams params = demo_params();
    BlockchainState state = demo_after(6);
    auto choice = preferred_avoidance_action(params, state, addr("B"), tok("T0"));
    REQUIRE(choice.ok());
    CHECK(choice.value().action == AvoidanceAction::Rep);
    CHECK(choice.value().rep_amount < choice.value().dep_amount);

    // No debt in T1, so only a deposit can help there.
    auto t1 = preferred_avoidance_action(params, state, addr("B"), tok("T1"));
    REQUIRE(t1.ok());
    CHECK(t1.value().action == AvoidanceAction::Dep);
    CHECK(!t1.value().rep_possible);
}

TEST_CASE("px front-running deltas match definitional gains exactly") {
    ProtocolParams params = demo_params();
    BlockchainState state = demo_after(6);  // p(T0) = 1.3, p(T1) = 1
    Rat delta = rat("0.3");

    auto check_against_execution = [&](const Transaction& tx, const TokenId& token,
                                       const Rat& d) {
        auto predicted = px_frontrun_gain_delta(params, state, tx, d, token);
        REQUIRE(predicted.ok());
        AddressId user = *actor_of(tx);
        Rat with = gain(params, state, user, {tx, PriceUpdate{d, token}}).definitional_gain;
        Rat without = gain(params, state, user, {PriceUpdate{d, token}}).definitional_gain;
        CHECK(with - without == predicted.value().delta);
        return predicted.value();
    };

    // Buying T0 with T1 at ratio p(T1)/p(T0) = 1/1.3 before a T0 rise.
    BlockchainState funded = state;
    set_balance(funded.wallet.balances, tok("T1"), addr("B"), Rat(20));
    {
        auto saved = state;
        state = funded;
        auto buy = check_against_execution(Swap{addr("B"), Rat(10), tok("T1"), tok("T0")},
                                           tok("T0"), delta);
        CHECK(buy.delta == Rat(10) * delta * Rat(1) / rat("1.3"));
        CHECK(buy.relation == Relation::Greater);

        // Selling T0 before the same rise loses exactly v * delta.
        auto sell = check_against_execution(Swap{addr("B"), Rat(10), tok("T0"), tok("T1")},
                                            tok("T0"), delta);
        CHECK(sell.delta == Rat(-3));
        CHECK(sell.relation == Relation::Less);

        // And a falling price flips both relations.
        auto hedge = check_against_execution(Swap{addr("B"), Rat(10), tok("T0"), tok("T1")},
                                             tok("T0"), rat("-0.3"));
        CHECK(hedge.delta == Rat(3));
        CHECK(hedge.relation == Relation::Greater);
        state = saved;
    }

    // LP actions leave the exposure unchanged.
    for (const Transaction& tx : {Transaction(Deposit{addr("B"), Rat(5), tok("T0")}),
                                  Transaction(Repay{addr("B"), Rat(5), tok("T0")}),
                                  Transaction(Borrow{addr("A"), Rat(5), tok("T0")}),
                                  Transaction(Redeem{addr("A"), Rat(5), tok("T0")})}) {
        auto r = check_against_execution(tx, tok("T0"), delta);
        CHECK(r.delta == Rat(0));
        CHECK(r.relation == Relation::Equal);

        // Fire-then-update equals update-then-fire for these kinds.
        AddressId user = *actor_of(tx);
        Rat before = gain(params, state, user, {tx, PriceUpdate{delta, tok("T0")}}).definitional_gain;
        Rat after = gain(params, state, user, {PriceUpdate{delta, tok("T0")}, tx}).definitional_gain;
        CHECK(before == after);
    }

    auto unrelated = px_frontrun_gain_delta(params, state,
                                            Deposit{addr("B"), Rat(5), tok("T0")}, delta,
                                            tok("T1"));
    CHECK(!unrelated.ok());  // transaction does not mention the updated token
}

TEST_CASE("leverage strategy: dep + bor + swp ahead of a price rise") {
    ProtocolParams params = demo_params();
    BlockchainState state =
        initial_state({{addr("A"), Rat(100), tok("T1")}, {addr("C"), Rat(100), tok("T2")}},
                      {{tok("T1"), Rat(1)}, {tok("T2"), Rat(1)}})
            .value();
    state = apply(params, state, Deposit{addr("C"), Rat(60), tok("T2")}).value();

    auto plan = build_leverage_strategy(params, state, addr("A"), Rat(50), tok("T1"), Rat(20),
                                        tok("T2"), rat("0.3"));
    REQUIRE(plan.ok());
    CHECK(plan.value().relation == Relation::Greater);
    CHECK(*plan.value().gain_delta == Rat(6));  // 20 * p(T2)/p(T1) * 0.3

    Trace with = plan.value().prefix;
    with.push_back(plan.value().event);
    Rat g_with = gain(params, state, addr("A"), with).definitional_gain;
    Rat g_event = gain(params, state, addr("A"), {plan.value().event}).definitional_gain;
    CHECK(g_with - g_event == *plan.value().gain_delta);
    CHECK(g_with > g_event);

    // Linearity in delta.
    auto doubled = build_leverage_strategy(params, state, addr("A"), Rat(50), tok("T1"), Rat(20),
                                           tok("T2"), rat("0.6"));
    CHECK(*doubled.value().gain_delta == Rat(12));

    // Insufficient reserves disable the borrow leg.
    auto broke = build_leverage_strategy(params, state, addr("A"), Rat(50), tok("T1"), Rat(70),
                                         tok("T2"), rat("0.3"));
    REQUIRE(!broke.ok());
    CHECK(broke.error().code == StepErrorCode::InsufficientReserves);
}

TEST_CASE("accrual front-running classification table") {
    auto linear = [](const Rat& alpha) {
        return ProtocolParams::make(Rat(2, 3), Rat(11, 10),
                                    InterestRateModel(LinearUtilizationRate{alpha, Rat(1, 10)}));
    };
    ProtocolParams flat = linear(Rat(0));
    ProtocolParams sloped = linear(Rat(1, 2));

    CHECK(std::get<Relation>(accrual_frontrun_classification(flat, TxKind::Dep)) ==
          Relation::GreaterEqual);
    CHECK(std::get<Relation>(accrual_frontrun_classification(flat, TxKind::Rep)) ==
          Relation::GreaterEqual);
    CHECK(std::get<Relation>(accrual_frontrun_classification(flat, TxKind::Bor)) ==
          Relation::LessEqual);
    CHECK(std::get<Relation>(accrual_frontrun_classification(flat, TxKind::Rdm)) ==
          Relation::LessEqual);
    CHECK(std::get<Relation>(accrual_frontrun_classification(flat, TxKind::Liq)) ==
          Relation::Indeterminate);
    CHECK(std::get<Relation>(accrual_frontrun_classification(flat, TxKind::Swp)) ==
          Relation::Equal);

    for (TxKind kind : {TxKind::Dep, TxKind::Bor, TxKind::Rep, TxKind::Rdm, TxKind::Liq})
        CHECK(std::get<Relation>(accrual_frontrun_classification(sloped, kind)) ==
              Relation::Indeterminate);

    ProtocolParams custom = ProtocolParams::make(
        Rat(2, 3), Rat(11, 10),
        InterestRateModel(CustomRateFn(
            [](const Rat&, const Rat&, const Rat&) { return Rat(1, 100); })));
    auto unsupported = accrual_frontrun_classification(custom, TxKind::Dep);
    CHECK(std::get<StrategyError>(unsupported).code == StrategyErrorCode::UnsupportedRateFn);
}

TEST_CASE("liquidation before an accrual can help or hurt") {
    // Same liquidatable state, two constant rates: below R - 1 the reward
    // dominates, above it waiting for the debt to grow pays better.
    auto params_with_beta = [](const Rat& beta) {
        return ProtocolParams::make(Rat(2, 3), Rat(11, 10),
                                    InterestRateModel(LinearUtilizationRate{Rat(0), beta}));
    };
    BlockchainState state = demo_after(6);

    std::vector<Transaction> grid;
    for (long v = 1; v <= 11; ++v)
        grid.push_back(Liquidate{addr("A"), addr("B"), Rat(v), tok("T0"), tok("T1")});

    WitnessPair low = accrual_frontrun_witnesses(params_with_beta(rat("0.05")), state, addr("A"),
                                                 grid);
    CHECK(low.beneficial.has_value());
    CHECK(!low.detrimental.has_value());

    WitnessPair high = accrual_frontrun_witnesses(params_with_beta(rat("0.5")), state, addr("A"),
                                                  grid);
    CHECK(high.detrimental.has_value());
    CHECK(!high.beneficial.has_value());
}
