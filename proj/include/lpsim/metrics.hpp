#pragma once

#include "lpsim/state.hpp"

namespace lpsim {

// Pure economic metrics over pool and blockchain states. All functions are
// total in the absence of missing prices; missing prices throw
// MissingPriceError.

enum class SupplyKind { Base, Credit, Debt };

// Sum over all addresses of the chosen balance for `token`. Base sums the
// wallet, credit/debt sum the pool books.
Rat supply(const BlockchainState& state, SupplyKind kind, const TokenId& token);
Rat credit_supply(const LendingPoolState& pool, const TokenId& token);
Rat debt_supply(const LendingPoolState& pool, const TokenId& token);
Rat wallet_supply(const WalletState& wallet, const TokenId& token);

// (reserves + debt supply) / credit supply, or 1 when there are no credits.
Rat exchange_rate(const LendingPoolState& pool, const TokenId& token);

// exchange rate times the base token price.
Rat credit_token_price(const LendingPoolState& pool, const PriceOracle& prices,
                       const TokenId& token);

struct PortfolioValues {
    Rat wallet_value;
    Rat credit_value;
    Rat debt_value;
};

// Value of the user's wallet holdings, credit tokens (at exchange-rate
// adjusted prices) and debts (at base prices).
PortfolioValues portfolio_values(const BlockchainState& state, const AddressId& user);

// wallet value + credit value - debt value.
Rat net_worth(const BlockchainState& state, const AddressId& user);

// The terms of net worth that mention `token`:
// (wallet + credits * exchange rate - debits) * price.
Rat net_worth_restricted(const BlockchainState& state, const AddressId& user,
                         const TokenId& token);

// credit value - debt value; negative means the pool cannot recover the debt.
Rat net_position(const BlockchainState& state, const AddressId& user);

// credit value / debt value, +inf for debt-free users.
ExtRat collateralization(const BlockchainState& state, const AddressId& user);

// collateralization * liquidation threshold; +inf propagates.
ExtRat health_factor(const ProtocolParams& params, const BlockchainState& state,
                     const AddressId& user);

// debt supply / (reserves + debt supply), 0 when there is no debt.
Rat utilization(const LendingPoolState& pool, const TokenId& token);

Rat interest_rate(const ProtocolParams& params, const LendingPoolState& pool,
                  const TokenId& token);

}  // namespace lpsim
