#pragma once

#include "lpsim/semantics.hpp"

namespace lpsim {

// Gain bookkeeping and the closed-form per-transaction economics: predictors
// for liquidation, price-update and accrual gains, plus the health-factor
// change laws. Every closed form here is cross-checked against definitional
// (execute-and-diff) gains by the test suites.

struct GainReport {
    AddressId user;
    Rat definitional_gain;                 // net worth after minus before
    std::map<TokenId, Rat> breakdown;      // via restricted net worth; sums to the gain
    std::vector<size_t> skipped_steps;     // disabled transactions dropped from the trace
};

// Gain of `user` across `trace`, with disabled transactions removed (the
// trace-with-skips convention). Throws MissingPriceError only if the states
// involve unpriced tokens.
GainReport gain(const ProtocolParams& params, const BlockchainState& state, const AddressId& user,
                const Trace& trace);

struct LiquidationGains {
    Rat liquidator_gain;  // (R - 1) * repaid * price(repaid token)
    Rat borrower_gain;    // exactly the opposite
};

// Requires the liquidation to be enabled; the error is the violated premise.
Result<LiquidationGains> predicted_gain_liquidation(const ProtocolParams& params,
                                                    const BlockchainState& state,
                                                    const Liquidate& tx);

// Gain of a single liquidation for an arbitrary user: zero unless the user is
// the liquidator or the borrower.
Result<Rat> predicted_gain_liquidation_for(const ProtocolParams& params,
                                           const BlockchainState& state, const Liquidate& tx,
                                           const AddressId& user);

// (wallet + credits * X - debits) * delta for the updated token.
Result<Rat> predicted_gain_price_update(const BlockchainState& state, const AddressId& user,
                                        const Rat& delta, const TokenId& token);

// Sum over tokens with credit supply > 0 of
// (credits/credit-supply * debt-supply - debits) * rate * price.
Rat predicted_gain_interest_accrual(const ProtocolParams& params, const BlockchainState& state,
                                    const AddressId& user);

enum class HealthDirection { NonDecreasing, NonIncreasing, Equal };

struct HealthDelta {
    HealthDirection direction;
    bool strict;  // guaranteed strict change iff the actor has debt value > 0
};

// Direction of the actor's own health change: dep/rep/liq never lower it,
// bor/rdm never raise it, swp leaves it unchanged.
Result<HealthDelta> health_delta_direction(const ProtocolParams& params,
                                           const BlockchainState& state, const Transaction& tx);

// Exact health change of the borrower under a liquidation:
// (C - D*R) * repaid_value * T / (D * (D - repaid_value)).
Result<Rat> borrower_liq_health_delta(const ProtocolParams& params, const BlockchainState& state,
                                      const Liquidate& tx);

enum class DepositVsRepay { RepayBetterOrEqual, DepositBetter };

struct DepositVsRepayVerdict {
    DepositVsRepay verdict;
    Rat threshold;  // v*p - (debt value - credit value); >= 0 iff repay wins
};

// Which of dep(v:token) / rep(v:token) improves the user's health factor more.
// Requires both transactions to be enabled.
Result<DepositVsRepayVerdict> deposit_vs_repay(const ProtocolParams& params,
                                               const BlockchainState& state, const AddressId& user,
                                               const Rat& amount, const TokenId& token);

}  // namespace lpsim
