#include "lpsim/state.hpp"

namespace lpsim {

Rat lookup(const BalanceMap& m, const TokenId& token, const AddressId& addr) {
    auto it = m.find({token, addr});
    return it == m.end() ? Rat(0) : it->second;
}

Rat lookup(const TokenMap& m, const TokenId& token) {
    auto it = m.find(token);
    return it == m.end() ? Rat(0) : it->second;
}

void set_balance(BalanceMap& m, const TokenId& token, const AddressId& addr, const Rat& value) {
    if (sgn(value) < 0) throw std::invalid_argument("negative balance for " + token.name);
    if (sgn(value) == 0)
        m.erase({token, addr});
    else
        m[{token, addr}] = value;
}

void set_balance(TokenMap& m, const TokenId& token, const Rat& value) {
    if (sgn(value) < 0) throw std::invalid_argument("negative balance for " + token.name);
    if (sgn(value) == 0)
        m.erase(token);
    else
        m[token] = value;
}

void add_balance(BalanceMap& m, const TokenId& token, const AddressId& addr, const Rat& delta) {
    set_balance(m, token, addr, lookup(m, token, addr) + delta);
}

void add_balance(TokenMap& m, const TokenId& token, const Rat& delta) {
    set_balance(m, token, lookup(m, token) + delta);
}

void PriceOracle::set_price(const TokenId& token, const Rat& price) {
    if (sgn(price) <= 0) throw std::invalid_argument("price must be positive for " + token.name);
    prices_[token] = price;
}

const Rat& PriceOracle::price(const TokenId& token) const {
    auto it = prices_.find(token);
    if (it == prices_.end()) throw MissingPriceError(token);
    return it->second;
}

std::set<AddressId> addresses_of(const BlockchainState& state) {
    std::set<AddressId> out;
    for (const auto& [key, _] : state.wallet.balances) out.insert(key.second);
    for (const auto& [key, _] : state.pool.credits) out.insert(key.second);
    for (const auto& [key, _] : state.pool.debits) out.insert(key.second);
    return out;
}

std::set<TokenId> tokens_of(const BlockchainState& state) {
    std::set<TokenId> out;
    for (const auto& [key, _] : state.wallet.balances) out.insert(key.first);
    for (const auto& [token, _] : state.pool.reserves) out.insert(token);
    for (const auto& [key, _] : state.pool.credits) out.insert(key.first);
    for (const auto& [key, _] : state.pool.debits) out.insert(key.first);
    for (const auto& [token, _] : state.prices.prices()) out.insert(token);
    return out;
}

InterestRateModel::InterestRateModel(LinearUtilizationRate linear) : impl_(std::move(linear)) {
    const auto& l = std::get<LinearUtilizationRate>(impl_);
    if (sgn(l.alpha) < 0) throw std::invalid_argument("rate alpha must be >= 0");
    if (sgn(l.beta) <= 0) throw std::invalid_argument("rate beta must be > 0");
}

Rat InterestRateModel::rate(const Rat& reserves, const Rat& credit_supply,
                            const Rat& debt_supply) const {
    if (const auto* linear = std::get_if<LinearUtilizationRate>(&impl_)) {
        Rat util(0);
        if (sgn(debt_supply) > 0) util = debt_supply / (reserves + debt_supply);
        return linear->alpha * util + linear->beta;
    }
    Rat r = std::get<CustomRateFn>(impl_)(reserves, credit_supply, debt_supply);
    if (sgn(r) <= 0) throw std::domain_error("interest rate model returned a non-positive rate");
    return r;
}

ProtocolParams ProtocolParams::make(Rat liq_threshold, Rat liq_reward, InterestRateModel model) {
    if (sgn(liq_threshold) <= 0 || liq_threshold >= 1)
        throw std::invalid_argument("liquidation threshold must lie in (0,1)");
    if (liq_reward <= 1) throw std::invalid_argument("liquidation reward must exceed 1");
    return ProtocolParams{std::move(liq_threshold), std::move(liq_reward), std::move(model)};
}

}  // namespace lpsim
