#include "lpsim/metrics.hpp"

namespace lpsim {

namespace {

Rat sum_over_addresses(const BalanceMap& m, const TokenId& token) {
    Rat total(0);
    for (const auto& [key, amount] : m)
        if (key.first == token) total += amount;
    return total;
}

}  // namespace

Rat wallet_supply(const WalletState& wallet, const TokenId& token) {
    return sum_over_addresses(wallet.balances, token);
}

Rat credit_supply(const LendingPoolState& pool, const TokenId& token) {
    return sum_over_addresses(pool.credits, token);
}

Rat debt_supply(const LendingPoolState& pool, const TokenId& token) {
    return sum_over_addresses(pool.debits, token);
}

Rat supply(const BlockchainState& state, SupplyKind kind, const TokenId& token) {
    switch (kind) {
        case SupplyKind::Base: return wallet_supply(state.wallet, token);
        case SupplyKind::Credit: return credit_supply(state.pool, token);
        case SupplyKind::Debt: return debt_supply(state.pool, token);
    }
    return Rat(0);
}

Rat exchange_rate(const LendingPoolState& pool, const TokenId& token) {
    Rat credits = credit_supply(pool, token);
    if (sgn(credits) == 0) return Rat(1);
    return (lookup(pool.reserves, token) + debt_supply(pool, token)) / credits;
}

Rat credit_token_price(const LendingPoolState& pool, const PriceOracle& prices,
                       const TokenId& token) {
    return exchange_rate(pool, token) * prices.price(token);
}

PortfolioValues portfolio_values(const BlockchainState& state, const AddressId& user) {
    PortfolioValues v{Rat(0), Rat(0), Rat(0)};
    for (const auto& [key, amount] : state.wallet.balances)
        if (key.second == user) v.wallet_value += amount * state.prices.price(key.first);
    for (const auto& [key, amount] : state.pool.credits)
        if (key.second == user)
            v.credit_value += amount * credit_token_price(state.pool, state.prices, key.first);
    for (const auto& [key, amount] : state.pool.debits)
        if (key.second == user) v.debt_value += amount * state.prices.price(key.first);
    return v;
}

Rat net_worth(const BlockchainState& state, const AddressId& user) {
    PortfolioValues v = portfolio_values(state, user);
    return v.wallet_value + v.credit_value - v.debt_value;
}

Rat net_worth_restricted(const BlockchainState& state, const AddressId& user,
                         const TokenId& token) {
    Rat units = lookup(state.wallet.balances, token, user) +
                lookup(state.pool.credits, token, user) * exchange_rate(state.pool, token) -
                lookup(state.pool.debits, token, user);
    return units * state.prices.price(token);
}

Rat net_position(const BlockchainState& state, const AddressId& user) {
    PortfolioValues v = portfolio_values(state, user);
    return v.credit_value - v.debt_value;
}

ExtRat collateralization(const BlockchainState& state, const AddressId& user) {
    PortfolioValues v = portfolio_values(state, user);
    if (sgn(v.debt_value) == 0) return ExtRat::infinity();
    return ExtRat(v.credit_value / v.debt_value);
}

ExtRat health_factor(const ProtocolParams& params, const BlockchainState& state,
                     const AddressId& user) {
    ExtRat coll = collateralization(state, user);
    if (coll.is_infinite()) return coll;
    return ExtRat(coll.value() * params.liq_threshold);
}

Rat utilization(const LendingPoolState& pool, const TokenId& token) {
    Rat debts = debt_supply(pool, token);
    if (sgn(debts) == 0) return Rat(0);
    return debts / (lookup(pool.reserves, token) + debts);
}

Rat interest_rate(const ProtocolParams& params, const LendingPoolState& pool,
                  const TokenId& token) {
    return params.rate_model.rate(lookup(pool.reserves, token), credit_supply(pool, token),
                                  debt_supply(pool, token));
}

}  // namespace lpsim
