#include "lpsim/analysis.hpp"

namespace lpsim {

GainReport gain(const ProtocolParams& params, const BlockchainState& state, const AddressId& user,
                const Trace& trace) {
    auto run = apply_trace(params, state, trace, TraceMode::SkipDisabled);
    const BlockchainState& final_state = run.value().final_state;

    GainReport report{user, net_worth(final_state, user) - net_worth(state, user), {},
                      run.value().skipped_indices()};
    std::set<TokenId> tokens = tokens_of(state);
    std::set<TokenId> post_tokens = tokens_of(final_state);
    tokens.insert(post_tokens.begin(), post_tokens.end());
    for (const auto& token : tokens) {
        Rat before = state.prices.has_price(token) ? net_worth_restricted(state, user, token) : Rat(0);
        Rat after = final_state.prices.has_price(token)
                        ? net_worth_restricted(final_state, user, token)
                        : Rat(0);
        Rat delta = after - before;
        if (sgn(delta) != 0) report.breakdown[token] = delta;
    }
    return report;
}

Result<LiquidationGains> predicted_gain_liquidation(const ProtocolParams& params,
                                                    const BlockchainState& state,
                                                    const Liquidate& tx) {
    if (auto check = is_enabled(params, state, Transaction(tx)); !check) return *check.violation;
    Rat liquidator = (params.liq_reward - 1) * tx.repaid_amount * state.prices.price(tx.repaid_token);
    return LiquidationGains{liquidator, -liquidator};
}

Result<Rat> predicted_gain_liquidation_for(const ProtocolParams& params,
                                           const BlockchainState& state, const Liquidate& tx,
                                           const AddressId& user) {
    auto gains = predicted_gain_liquidation(params, state, tx);
    if (!gains) return gains.error();
    if (user == tx.liquidator) return gains.value().liquidator_gain;
    if (user == tx.borrower) return gains.value().borrower_gain;
    return Rat(0);
}

Result<Rat> predicted_gain_price_update(const BlockchainState& state, const AddressId& user,
                                        const Rat& delta, const TokenId& token) {
    if (!state.prices.has_price(token))
        return StepError{StepErrorCode::MissingPrice, "no price for " + token.name, std::nullopt};
    if (sgn(state.prices.price(token) + delta) <= 0)
        return StepError{StepErrorCode::NonPositivePrice,
                         "update would make " + token.name + " non-positive", std::nullopt};
    Rat exposure = lookup(state.wallet.balances, token, user) +
                   lookup(state.pool.credits, token, user) * exchange_rate(state.pool, token) -
                   lookup(state.pool.debits, token, user);
    return Rat(exposure * delta);
}

Rat predicted_gain_interest_accrual(const ProtocolParams& params, const BlockchainState& state,
                                    const AddressId& user) {
    Rat total(0);
    for (const auto& token : tokens_of(state)) {
        Rat credits = credit_supply(state.pool, token);
        if (sgn(credits) == 0) continue;  // no creditors, nothing to distribute
        Rat share = lookup(state.pool.credits, token, user) / credits *
                        debt_supply(state.pool, token) -
                    lookup(state.pool.debits, token, user);
        if (sgn(share) == 0) continue;
        total += share * interest_rate(params, state.pool, token) * state.prices.price(token);
    }
    return total;
}

Result<HealthDelta> health_delta_direction(const ProtocolParams& params,
                                           const BlockchainState& state, const Transaction& tx) {
    auto actor = actor_of(tx);
    if (!actor)
        return StepError{StepErrorCode::MalformedTransaction,
                         "health direction applies to user actions only", std::nullopt};
    if (auto check = is_enabled(params, state, tx); !check) return *check.violation;
    bool strict = sgn(portfolio_values(state, *actor).debt_value) > 0;
    switch (kind_of(tx)) {
        case TxKind::Dep:
        case TxKind::Rep:
        case TxKind::Liq: return HealthDelta{HealthDirection::NonDecreasing, strict};
        case TxKind::Bor:
        case TxKind::Rdm: return HealthDelta{HealthDirection::NonIncreasing, strict};
        default: return HealthDelta{HealthDirection::Equal, false};
    }
}

Result<Rat> borrower_liq_health_delta(const ProtocolParams& params, const BlockchainState& state,
                                      const Liquidate& tx) {
    if (auto check = is_enabled(params, state, Transaction(tx)); !check) return *check.violation;
    PortfolioValues borrower = portfolio_values(state, tx.borrower);
    Rat repaid_value = tx.repaid_amount * state.prices.price(tx.repaid_token);
    // Enabledness rules out a fully repaid debt (post health would be +inf),
    // so the denominator is positive.
    return Rat((borrower.credit_value - borrower.debt_value * params.liq_reward) * repaid_value *
               params.liq_threshold /
               (borrower.debt_value * (borrower.debt_value - repaid_value)));
}

Result<DepositVsRepayVerdict> deposit_vs_repay(const ProtocolParams& params,
                                               const BlockchainState& state, const AddressId& user,
                                               const Rat& amount, const TokenId& token) {
    if (auto check = is_enabled(params, state, Transaction(Deposit{user, amount, token})); !check)
        return *check.violation;
    if (auto check = is_enabled(params, state, Transaction(Repay{user, amount, token})); !check)
        return *check.violation;
    PortfolioValues v = portfolio_values(state, user);
    Rat threshold = amount * state.prices.price(token) - (v.debt_value - v.credit_value);
    return DepositVsRepayVerdict{sgn(threshold) >= 0 ? DepositVsRepay::RepayBetterOrEqual
                                                     : DepositVsRepay::DepositBetter,
                                 threshold};
}

}  // namespace lpsim
