#include "lpsim/semantics.hpp"

namespace lpsim {

namespace {

StepError err(StepErrorCode code, std::string detail) {
    return StepError{code, std::move(detail), std::nullopt};
}

std::optional<StepError> check_well_formed(const Transaction& tx) {
    switch (kind_of(tx)) {
        case TxKind::Dep:
            if (sgn(std::get<Deposit>(tx).amount) <= 0)
                return err(StepErrorCode::MalformedTransaction, "deposit amount must be positive");
            break;
        case TxKind::Bor:
            if (sgn(std::get<Borrow>(tx).amount) <= 0)
                return err(StepErrorCode::MalformedTransaction, "borrow amount must be positive");
            break;
        case TxKind::Rep:
            if (sgn(std::get<Repay>(tx).amount) <= 0)
                return err(StepErrorCode::MalformedTransaction, "repay amount must be positive");
            break;
        case TxKind::Rdm:
            if (sgn(std::get<Redeem>(tx).credit_amount) <= 0)
                return err(StepErrorCode::MalformedTransaction, "redeem amount must be positive");
            break;
        case TxKind::Liq: {
            const auto& liq = std::get<Liquidate>(tx);
            if (sgn(liq.repaid_amount) <= 0)
                return err(StepErrorCode::MalformedTransaction, "liquidation amount must be positive");
            if (liq.liquidator == liq.borrower)
                return err(StepErrorCode::MalformedTransaction, "liquidator must differ from borrower");
            break;
        }
        case TxKind::Int:
            break;
        case TxKind::Px:
            if (sgn(std::get<PriceUpdate>(tx).delta) == 0)
                return err(StepErrorCode::MalformedTransaction, "price delta must be nonzero");
            break;
        case TxKind::Swp: {
            const auto& swp = std::get<Swap>(tx);
            if (sgn(swp.amount) <= 0)
                return err(StepErrorCode::MalformedTransaction, "swap amount must be positive");
            if (swp.from_token == swp.to_token)
                return err(StepErrorCode::MalformedTransaction, "swap tokens must differ");
            break;
        }
    }
    return std::nullopt;
}

std::optional<StepError> check_priced(const BlockchainState& state,
                                      std::initializer_list<TokenId> tokens) {
    for (const auto& token : tokens)
        if (!state.prices.has_price(token))
            return err(StepErrorCode::MissingPrice, "no price for " + token.name);
    return std::nullopt;
}

Result<BlockchainState> apply_deposit(const BlockchainState& state, const Deposit& tx) {
    if (auto e = check_priced(state, {tx.token})) return *e;
    Rat held = lookup(state.wallet.balances, tx.token, tx.user);
    if (held < tx.amount)
        return err(StepErrorCode::InsufficientWallet,
                   tx.user.name + " holds " + to_canonical_string(held) + ":" + tx.token.name);
    Rat minted = tx.amount / exchange_rate(state.pool, tx.token);
    BlockchainState next = state;
    add_balance(next.wallet.balances, tx.token, tx.user, -tx.amount);
    add_balance(next.pool.reserves, tx.token, tx.amount);
    add_balance(next.pool.credits, tx.token, tx.user, minted);
    return next;
}

Result<BlockchainState> apply_borrow(const ProtocolParams& params, const BlockchainState& state,
                                     const Borrow& tx) {
    if (auto e = check_priced(state, {tx.token})) return *e;
    Rat reserves = lookup(state.pool.reserves, tx.token);
    if (reserves < tx.amount)
        return err(StepErrorCode::InsufficientReserves,
                   "pool holds " + to_canonical_string(reserves) + ":" + tx.token.name);
    BlockchainState next = state;
    add_balance(next.wallet.balances, tx.token, tx.user, tx.amount);
    add_balance(next.pool.reserves, tx.token, -tx.amount);
    add_balance(next.pool.debits, tx.token, tx.user, tx.amount);
    if (health_factor(params, next, tx.user) < Rat(1))
        return err(StepErrorCode::HealthTooLowAfter, "borrow would leave " + tx.user.name +
                                                         " undercollateralized");
    return next;
}

Result<BlockchainState> apply_repay(const BlockchainState& state, const Repay& tx) {
    if (auto e = check_priced(state, {tx.token})) return *e;
    Rat held = lookup(state.wallet.balances, tx.token, tx.user);
    if (held < tx.amount)
        return err(StepErrorCode::InsufficientWallet,
                   tx.user.name + " holds " + to_canonical_string(held) + ":" + tx.token.name);
    Rat debt = lookup(state.pool.debits, tx.token, tx.user);
    if (debt < tx.amount)
        return err(StepErrorCode::InsufficientDebt,
                   tx.user.name + " owes " + to_canonical_string(debt) + ":" + tx.token.name);
    BlockchainState next = state;
    add_balance(next.wallet.balances, tx.token, tx.user, -tx.amount);
    add_balance(next.pool.reserves, tx.token, tx.amount);
    add_balance(next.pool.debits, tx.token, tx.user, -tx.amount);
    return next;
}

Result<BlockchainState> apply_redeem(const ProtocolParams& params, const BlockchainState& state,
                                     const Redeem& tx) {
    if (auto e = check_priced(state, {tx.token})) return *e;
    Rat credits = lookup(state.pool.credits, tx.token, tx.user);
    if (credits < tx.credit_amount)
        return err(StepErrorCode::InsufficientCredits,
                   tx.user.name + " holds " + to_canonical_string(credits) + " credits of " +
                       tx.token.name);
    Rat base_amount = tx.credit_amount * exchange_rate(state.pool, tx.token);
    Rat reserves = lookup(state.pool.reserves, tx.token);
    if (reserves < base_amount)
        return err(StepErrorCode::InsufficientReserves,
                   "pool holds " + to_canonical_string(reserves) + ":" + tx.token.name);
    BlockchainState next = state;
    add_balance(next.pool.credits, tx.token, tx.user, -tx.credit_amount);
    add_balance(next.pool.reserves, tx.token, -base_amount);
    add_balance(next.wallet.balances, tx.token, tx.user, base_amount);
    // +inf for debt-free users, so the check only bites borrowers.
    if (health_factor(params, next, tx.user) < Rat(1))
        return err(StepErrorCode::HealthTooLowAfter, "redeem would leave " + tx.user.name +
                                                         " undercollateralized");
    return next;
}

Result<BlockchainState> apply_accrual(const ProtocolParams& params, const BlockchainState& state) {
    // Rates come from the pre-state, once per token.
    TokenMap rates;
    for (const auto& [key, _] : state.pool.debits)
        if (!rates.contains(key.first))
            rates[key.first] = interest_rate(params, state.pool, key.first);
    BlockchainState next = state;
    for (auto& [key, amount] : next.pool.debits) amount += amount * rates.at(key.first);
    return next;
}

Result<BlockchainState> apply_liquidate(const ProtocolParams& params, const BlockchainState& state,
                                        const Liquidate& tx) {
    if (auto e = check_priced(state, {tx.repaid_token, tx.seized_token})) return *e;
    Rat held = lookup(state.wallet.balances, tx.repaid_token, tx.liquidator);
    if (held < tx.repaid_amount)
        return err(StepErrorCode::InsufficientWallet, tx.liquidator.name + " holds " +
                                                          to_canonical_string(held) + ":" +
                                                          tx.repaid_token.name);
    Rat borrower_debt = lookup(state.pool.debits, tx.repaid_token, tx.borrower);
    if (borrower_debt < tx.repaid_amount)
        return err(StepErrorCode::InsufficientDebt,
                   tx.borrower.name + " owes " + to_canonical_string(borrower_debt) + ":" +
                       tx.repaid_token.name);
    // Seized credits carry the repaid value scaled by the reward factor:
    // seized * X(t1) * p(t1) = repaid * p(t0) * R.
    Rat seized = tx.repaid_amount / exchange_rate(state.pool, tx.seized_token) *
                 (state.prices.price(tx.repaid_token) / state.prices.price(tx.seized_token)) *
                 params.liq_reward;
    Rat borrower_credits = lookup(state.pool.credits, tx.seized_token, tx.borrower);
    if (borrower_credits < seized)
        return err(StepErrorCode::InsufficientCredits,
                   tx.borrower.name + " holds " + to_canonical_string(borrower_credits) +
                       " credits of " + tx.seized_token.name);
    if (health_factor(params, state, tx.borrower) >= Rat(1))
        return err(StepErrorCode::BorrowerHealthy, tx.borrower.name + " is not liquidatable");
    BlockchainState next = state;
    add_balance(next.wallet.balances, tx.repaid_token, tx.liquidator, -tx.repaid_amount);
    add_balance(next.pool.reserves, tx.repaid_token, tx.repaid_amount);
    add_balance(next.pool.debits, tx.repaid_token, tx.borrower, -tx.repaid_amount);
    add_balance(next.pool.credits, tx.seized_token, tx.borrower, -seized);
    add_balance(next.pool.credits, tx.seized_token, tx.liquidator, seized);
    if (health_factor(params, next, tx.borrower) > Rat(1))
        return err(StepErrorCode::OverLiquidation,
                   "liquidation would push " + tx.borrower.name + " above health 1");
    return next;
}

Result<BlockchainState> apply_price_update(const BlockchainState& state, const PriceUpdate& tx) {
    if (auto e = check_priced(state, {tx.token})) return *e;
    Rat updated = state.prices.price(tx.token) + tx.delta;
    if (sgn(updated) <= 0)
        return err(StepErrorCode::NonPositivePrice,
                   tx.token.name + " price would become " + to_canonical_string(updated));
    BlockchainState next = state;
    next.prices.set_price(tx.token, updated);
    return next;
}

Result<BlockchainState> apply_swap(const BlockchainState& state, const Swap& tx) {
    if (auto e = check_priced(state, {tx.from_token, tx.to_token})) return *e;
    Rat held = lookup(state.wallet.balances, tx.from_token, tx.user);
    if (held < tx.amount)
        return err(StepErrorCode::InsufficientWallet,
                   tx.user.name + " holds " + to_canonical_string(held) + ":" + tx.from_token.name);
    Rat received =
        tx.amount * state.prices.price(tx.from_token) / state.prices.price(tx.to_token);
    BlockchainState next = state;
    add_balance(next.wallet.balances, tx.from_token, tx.user, -tx.amount);
    add_balance(next.wallet.balances, tx.to_token, tx.user, received);
    return next;
}

}  // namespace

Result<BlockchainState> initial_state(
    const std::vector<std::tuple<AddressId, Rat, TokenId>>& wallet_entries,
    const std::vector<std::pair<TokenId, Rat>>& price_entries) {
    BlockchainState state;
    for (const auto& [token, price] : price_entries) {
        if (sgn(price) <= 0)
            return err(StepErrorCode::NonPositivePrice,
                       token.name + " priced " + to_canonical_string(price));
        state.prices.set_price(token, price);
    }
    for (const auto& [addr, amount, token] : wallet_entries) {
        if (sgn(amount) < 0)
            return err(StepErrorCode::MalformedTransaction,
                       "negative balance for " + addr.name + ":" + token.name);
        if (!state.prices.has_price(token))
            return err(StepErrorCode::MissingPrice, "no price for " + token.name);
        add_balance(state.wallet.balances, token, addr, amount);
    }
    return state;
}

Result<BlockchainState> apply(const ProtocolParams& params, const BlockchainState& state,
                              const Transaction& tx) {
    if (auto e = check_well_formed(tx)) return *e;
    switch (kind_of(tx)) {
        case TxKind::Dep: return apply_deposit(state, std::get<Deposit>(tx));
        case TxKind::Bor: return apply_borrow(params, state, std::get<Borrow>(tx));
        case TxKind::Rep: return apply_repay(state, std::get<Repay>(tx));
        case TxKind::Rdm: return apply_redeem(params, state, std::get<Redeem>(tx));
        case TxKind::Liq: return apply_liquidate(params, state, std::get<Liquidate>(tx));
        case TxKind::Int: return apply_accrual(params, state);
        case TxKind::Px: return apply_price_update(state, std::get<PriceUpdate>(tx));
        case TxKind::Swp: return apply_swap(state, std::get<Swap>(tx));
    }
    return err(StepErrorCode::MalformedTransaction, "unknown transaction kind");
}

EnabledCheck is_enabled(const ProtocolParams& params, const BlockchainState& state,
                        const Transaction& tx) {
    auto r = apply(params, state, tx);
    if (r.ok()) return {true, std::nullopt};
    return {false, r.error()};
}

Result<TraceRun> apply_trace(const ProtocolParams& params, const BlockchainState& state,
                             const Trace& trace, TraceMode mode) {
    TraceRun run{state, {}, {}};
    run.applied.reserve(trace.size());
    run.skips.reserve(trace.size());
    for (size_t i = 0; i < trace.size(); ++i) {
        auto r = apply(params, run.final_state, trace[i]);
        if (r.ok()) {
            run.final_state = std::move(r).value();
            run.applied.push_back(true);
            run.skips.emplace_back();
        } else if (mode == TraceMode::Strict) {
            StepError e = r.error();
            e.step = i;
            return e;
        } else {
            run.applied.push_back(false);
            run.skips.emplace_back(r.error());
        }
    }
    return run;
}

}  // namespace lpsim
