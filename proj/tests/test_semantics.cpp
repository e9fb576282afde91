#include "lpsim/semantics.hpp"

#include "support.hpp"

#include <doctest.h>

using namespace lpsim;
using namespace lpsim::test;

TEST_CASE("initial states start with an empty pool") {
    auto state = initial_state({{addr("A"), Rat(100), tok("T0")}, {addr("B"), Rat(50), tok("T1")}},
                               {{tok("T0"), Rat(1)}, {tok("T1"), Rat(1)}});
    REQUIRE(state.ok());
    CHECK(state.value().pool.reserves.empty());
    CHECK(state.value().pool.credits.empty());
    CHECK(state.value().pool.debits.empty());
    CHECK(lookup(state.value().wallet.balances, tok("T0"), addr("A")) == Rat(100));

    CHECK(initial_state({}, {{tok("T"), Rat(3)}}).ok());

    auto bad = initial_state({}, {{tok("T0"), Rat(0)}});
    REQUIRE(!bad.ok());
    CHECK(bad.error().code == StepErrorCode::NonPositivePrice);
}

TEST_CASE("the worked example replays step by step") {
    ProtocolParams params = demo_params();
    BlockchainState state = demo_initial();
    Trace trace = demo_trace();

    // Step 1: deposit into a fresh pool mints credits one-for-one.
    state = apply(params, state, trace[0]).value();
    CHECK(lookup(state.pool.credits, tok("T0"), addr("A")) == Rat(50));
    CHECK(lookup(state.pool.reserves, tok("T0")) == Rat(50));
    CHECK(lookup(state.wallet.balances, tok("T0"), addr("A")) == Rat(50));

    state = apply(params, state, trace[1]).value();
    state = apply(params, state, trace[2]).value();
    CHECK(lookup(state.wallet.balances, tok("T0"), addr("B")) == Rat(30));
    CHECK(lookup(state.pool.debits, tok("T0"), addr("B")) == Rat(30));
    CHECK(lookup(state.pool.reserves, tok("T0")) == Rat(20));
    CHECK(health_factor(params, state, addr("B")) == Rat(10, 9));

    // Step 4: 12% accrual on the 30-unit loan.
    state = apply(params, state, trace[3]).value();
    CHECK(lookup(state.pool.debits, tok("T0"), addr("B")) == rat("33.6"));
    CHECK(exchange_rate(state.pool, tok("T0")) == rat("1.072"));

    state = apply(params, state, trace[4]).value();
    CHECK(lookup(state.pool.debits, tok("T0"), addr("B")) == rat("28.6"));
    CHECK(health_factor(params, state, addr("B")) == Rat(500, 429));

    state = apply(params, state, trace[5]).value();
    CHECK(state.prices.price(tok("T0")) == rat("1.3"));
    CHECK(health_factor(params, state, addr("B")) == Rat(5000, 5577));

    // Step 7: the liquidation seizes 11 * 1.3 * 1.1 = 15.73 credits of T1.
    state = apply(params, state, trace[6]).value();
    CHECK(lookup(state.pool.credits, tok("T1"), addr("A")) == rat("15.73"));
    CHECK(lookup(state.pool.credits, tok("T1"), addr("B")) == rat("34.27"));
    CHECK(lookup(state.pool.debits, tok("T0"), addr("B")) == rat("17.6"));
    CHECK(lookup(state.pool.reserves, tok("T0")) == Rat(36));
    CHECK(lookup(state.wallet.balances, tok("T0"), addr("A")) == Rat(39));
    CHECK(health_factor(params, state, addr("B")) == Rat(3427, 3432));

    // Step 8: redeeming 10 credits returns 10 * 1.072 base units.
    state = apply(params, state, trace[7]).value();
    CHECK(lookup(state.wallet.balances, tok("T0"), addr("A")) == rat("49.72"));
    CHECK(lookup(state.pool.reserves, tok("T0")) == rat("25.28"));
    CHECK(lookup(state.pool.credits, tok("T0"), addr("A")) == Rat(40));
}

TEST_CASE("deposit requires wallet funds") {
    ProtocolParams params = demo_params();
    BlockchainState state = demo_initial();
    auto r = apply(params, state, Deposit{addr("A"), Rat(101), tok("T0")});
    REQUIRE(!r.ok());
    CHECK(r.error().code == StepErrorCode::InsufficientWallet);
}

TEST_CASE("borrow checks reserves and the post-state health factor") {
    ProtocolParams params = demo_params();
    BlockchainState state = demo_after(2);

    auto too_much = apply(params, state, Borrow{addr("B"), Rat(51), tok("T0")});
    REQUIRE(!too_much.ok());
    CHECK(too_much.error().code == StepErrorCode::InsufficientReserves);

    // Health cap: B may borrow at most creditval * T = 100/3 of T0.
    auto over = apply(params, state, Borrow{addr("B"), Rat(34), tok("T0")});
    REQUIRE(!over.ok());
    CHECK(over.error().code == StepErrorCode::HealthTooLowAfter);
    auto at_cap = apply(params, state, Borrow{addr("B"), Rat(100, 3), tok("T0")});
    CHECK(at_cap.ok());  // post health exactly 1
    CHECK(health_factor(params, at_cap.value(), addr("B")) == Rat(1));
}

TEST_CASE("repay needs both wallet funds and existing debt") {
    ProtocolParams params = demo_params();
    BlockchainState state = demo_after(3);
    BlockchainState rich = state;  // enough cash that only the debt bound can fail
    set_balance(rich.wallet.balances, tok("T0"), addr("B"), Rat(100));
    auto r = apply(params, rich, Repay{addr("B"), Rat(31), tok("T0")});
    REQUIRE(!r.ok());
    CHECK(r.error().code == StepErrorCode::InsufficientDebt);
    auto w = apply(params, state, Repay{addr("A"), Rat(1), tok("T1")});
    REQUIRE(!w.ok());
    CHECK(w.error().code == StepErrorCode::InsufficientWallet);
}

TEST_CASE("redeem checks credits, reserves and health") {
    ProtocolParams params = demo_params();
    BlockchainState state = demo_after(3);

    auto no_credits = apply(params, state, Redeem{addr("A"), Rat(51), tok("T0")});
    REQUIRE(!no_credits.ok());
    CHECK(no_credits.error().code == StepErrorCode::InsufficientCredits);

    // Only 20:T0 reserves remain after the borrow.
    auto dry = apply(params, state, Redeem{addr("A"), Rat(21), tok("T0")});
    REQUIRE(!dry.ok());
    CHECK(dry.error().code == StepErrorCode::InsufficientReserves);

    // B's credits back the loan: redeeming too many breaks the health check.
    auto unhealthy = apply(params, state, Redeem{addr("B"), Rat(10), tok("T1")});
    REQUIRE(!unhealthy.ok());
    CHECK(unhealthy.error().code == StepErrorCode::HealthTooLowAfter);
}

TEST_CASE("redeem that drains a token resets its exchange rate") {
    ProtocolParams params = demo_params();
    BlockchainState state =
        apply(params, demo_initial(), Deposit{addr("A"), Rat(50), tok("T0")}).value();
    auto drained = apply(params, state, Redeem{addr("A"), Rat(50), tok("T0")});
    REQUIRE(drained.ok());
    CHECK(credit_supply(drained.value().pool, tok("T0")) == Rat(0));
    CHECK(lookup(drained.value().pool.reserves, tok("T0")) == Rat(0));
    CHECK(exchange_rate(drained.value().pool, tok("T0")) == Rat(1));
    CHECK(lookup(drained.value().wallet.balances, tok("T0"), addr("A")) == Rat(100));
}

TEST_CASE("liquidation premises fire in rule order") {
    ProtocolParams params = demo_params();
    BlockchainState healthy = demo_after(5);
    BlockchainState unhealthy = demo_after(6);

    // At step 5 the borrower is healthy (H = 1.16), so nothing can be seized.
    auto blocked =
        apply(params, healthy, Liquidate{addr("A"), addr("B"), Rat(11), tok("T0"), tok("T1")});
    REQUIRE(!blocked.ok());
    CHECK(blocked.error().code == StepErrorCode::BorrowerHealthy);

    // Repaying 12 instead of 11 would lift B above health 1.
    auto over =
        apply(params, unhealthy, Liquidate{addr("A"), addr("B"), Rat(12), tok("T0"), tok("T1")});
    REQUIRE(!over.ok());
    CHECK(over.error().code == StepErrorCode::OverLiquidation);

    auto self =
        apply(params, unhealthy, Liquidate{addr("B"), addr("B"), Rat(11), tok("T0"), tok("T1")});
    REQUIRE(!self.ok());
    CHECK(self.error().code == StepErrorCode::MalformedTransaction);

    // The liquidation value identity: seized * X(t1) * p(t1) = v0 * p(t0) * R.
    auto done =
        apply(params, unhealthy, Liquidate{addr("A"), addr("B"), Rat(11), tok("T0"), tok("T1")});
    REQUIRE(done.ok());
    Rat seized = lookup(done.value().pool.credits, tok("T1"), addr("A"));
    CHECK(seized * exchange_rate(unhealthy.pool, tok("T1")) * unhealthy.prices.price(tok("T1")) ==
          Rat(11) * unhealthy.prices.price(tok("T0")) * params.liq_reward);
}

TEST_CASE("accrual applies the pre-state rate to every loan") {
    ProtocolParams params = ProtocolParams::make(
        Rat(2, 3), Rat(11, 10), InterestRateModel(LinearUtilizationRate{Rat(1, 10), Rat(1, 20)}));
    BlockchainState state = demo_after(3);
    set_balance(state.pool.debits, tok("T0"), addr("A"), Rat(10));  // second debtor

    Rat rate = interest_rate(params, state.pool, tok("T0"));
    auto next = apply(params, state, AccrueInterest{});
    REQUIRE(next.ok());
    CHECK(lookup(next.value().pool.debits, tok("T0"), addr("B")) == Rat(30) * (1 + rate));
    CHECK(lookup(next.value().pool.debits, tok("T0"), addr("A")) == Rat(10) * (1 + rate));
    CHECK(next.value().pool.reserves == state.pool.reserves);
    CHECK(next.value().wallet == state.wallet);
}

TEST_CASE("price updates keep prices positive and change nothing else") {
    ProtocolParams params = demo_params();
    BlockchainState state = demo_initial();

    auto drop = apply(params, state, PriceUpdate{Rat(-1), tok("T0")});
    REQUIRE(!drop.ok());
    CHECK(drop.error().code == StepErrorCode::NonPositivePrice);

    auto unknown = apply(params, state, PriceUpdate{Rat(1), tok("TX")});
    REQUIRE(!unknown.ok());
    CHECK(unknown.error().code == StepErrorCode::MissingPrice);

    auto zero = apply(params, state, PriceUpdate{Rat(0), tok("T0")});
    REQUIRE(!zero.ok());
    CHECK(zero.error().code == StepErrorCode::MalformedTransaction);

    auto ok = apply(params, state, PriceUpdate{rat("-0.5"), tok("T0")});
    REQUIRE(ok.ok());
    CHECK(ok.value().prices.price(tok("T0")) == rat("0.5"));
    CHECK(ok.value().wallet == state.wallet);
    CHECK(ok.value().pool == state.pool);
}

TEST_CASE("swap trades at the price ratio without touching the pool") {
    ProtocolParams params = demo_params();
    BlockchainState state = demo_after(6);  // p(T0) = 1.3, p(T1) = 1

    auto swapped = apply(params, state, Swap{addr("B"), Rat(10), tok("T0"), tok("T1")});
    REQUIRE(swapped.ok());
    CHECK(lookup(swapped.value().wallet.balances, tok("T0"), addr("B")) == Rat(15));
    CHECK(lookup(swapped.value().wallet.balances, tok("T1"), addr("B")) == Rat(13));
    CHECK(swapped.value().pool == state.pool);

    auto same = apply(params, state, Swap{addr("B"), Rat(1), tok("T0"), tok("T0")});
    REQUIRE(!same.ok());
    CHECK(same.error().code == StepErrorCode::MalformedTransaction);
}

TEST_CASE("zero or negative amounts are malformed") {
    ProtocolParams params = demo_params();
    BlockchainState state = demo_initial();
    for (const Transaction& tx :
         {Transaction(Deposit{addr("A"), Rat(0), tok("T0")}),
          Transaction(Borrow{addr("A"), Rat(-1), tok("T0")}),
          Transaction(Repay{addr("A"), Rat(0), tok("T0")}),
          Transaction(Redeem{addr("A"), Rat(0), tok("T0")}),
          Transaction(Liquidate{addr("A"), addr("B"), Rat(0), tok("T0"), tok("T1")}),
          Transaction(Swap{addr("A"), Rat(0), tok("T0"), tok("T1")})}) {
        auto r = apply(params, state, tx);
        REQUIRE(!r.ok());
        CHECK(r.error().code == StepErrorCode::MalformedTransaction);
    }
}

TEST_CASE("is_enabled mirrors apply without mutating") {
    ProtocolParams params = demo_params();
    BlockchainState step5 = demo_after(5);
    auto liq = is_enabled(params, step5, Liquidate{addr("A"), addr("B"), Rat(11), tok("T0"), tok("T1")});
    CHECK(!liq.enabled);
    CHECK(liq.violation->code == StepErrorCode::BorrowerHealthy);  // H = 1.16 >= 1

    CHECK(is_enabled(params, step5, AccrueInterest{}).enabled);

    auto px = is_enabled(params, step5, PriceUpdate{Rat(-1), tok("T0")});
    CHECK(!px.enabled);
    CHECK(px.violation->code == StepErrorCode::NonPositivePrice);
}

TEST_CASE("apply_trace strict vs skip") {
    ProtocolParams params = demo_params();
    BlockchainState state = demo_initial();

    auto full = apply_trace(params, state, demo_trace(), TraceMode::Strict);
    REQUIRE(full.ok());
    CHECK(lookup(full.value().final_state.wallet.balances, tok("T0"), addr("A")) == rat("49.72"));
    CHECK(lookup(full.value().final_state.pool.reserves, tok("T0")) == rat("25.28"));

    auto empty = apply_trace(params, state, {}, TraceMode::Strict);
    REQUIRE(empty.ok());
    CHECK(empty.value().final_state == state);

    Trace disabled{Borrow{addr("A"), Rat(1), tok("T0")}};  // empty pool
    auto strict = apply_trace(params, state, disabled, TraceMode::Strict);
    REQUIRE(!strict.ok());
    CHECK(strict.error().step == size_t(0));

    auto skipped = apply_trace(params, state, disabled, TraceMode::SkipDisabled);
    REQUIRE(skipped.ok());
    CHECK(skipped.value().final_state == state);
    CHECK(skipped.value().skipped_indices() == std::vector<size_t>{0});
}

TEST_CASE("application is deterministic") {
    ProtocolParams params = demo_params();
    BlockchainState state = demo_initial();
    for (const Transaction& tx : demo_trace()) {
        auto once = apply(params, state, tx);
        auto twice = apply(params, state, tx);
        REQUIRE(once.ok());
        REQUIRE(twice.ok());
        CHECK(once.value() == twice.value());
        state = std::move(once).value();
    }
}

TEST_CASE("transactions touching unpriced tokens are rejected") {
    ProtocolParams params = demo_params();
    BlockchainState state = demo_initial();
    auto swap = apply(params, state, Swap{addr("A"), Rat(1), tok("T0"), tok("TX")});
    REQUIRE(!swap.ok());
    CHECK(swap.error().code == StepErrorCode::MissingPrice);
    auto dep = apply(params, state, Deposit{addr("A"), Rat(1), tok("TX")});
    REQUIRE(!dep.ok());
    CHECK(dep.error().code == StepErrorCode::MissingPrice);
}
