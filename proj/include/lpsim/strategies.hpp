#pragma once

#include "lpsim/analysis.hpp"

namespace lpsim {

// Front-running strategy constructors. Each returns a concrete plan together
// with the predicted gain relation, which the test suites verify by executing
// both traces and diffing definitional gains.

enum class Relation { Greater, Less, Equal, GreaterEqual, LessEqual, Indeterminate };

const char* relation_name(Relation r);

struct StrategyPlan {
    Trace prefix;             // the user's own transactions, fired first
    Transaction event;        // the foreseen event
    Relation relation;        // gain(prefix + event) vs gain(event)
    std::optional<Rat> gain_delta;  // exact difference, when closed-form
};

enum class AvoidanceAction { Dep, Rep };

struct AvoidanceThreshold {
    Rat min_amount;   // smallest v restoring health >= 1 (liquidations disabled)
    bool affordable;  // wallet (and for rep, own debt) can cover min_amount
    std::string note;
};

// Minimal dep/rep amount that lifts an unhealthy user back to health >= 1.
// dep: v = (D / T - C) / p;  rep: v = (D - C * T) / p.
Result<AvoidanceThreshold> liquidation_avoidance_threshold(const ProtocolParams& params,
                                                           const BlockchainState& state,
                                                           const AddressId& user,
                                                           AvoidanceAction action,
                                                           const TokenId& token);

struct AvoidanceChoice {
    AvoidanceAction action;  // the action needing the smaller amount
    Rat dep_amount;
    Rat rep_amount;  // meaningful only when repay can reach the threshold
    bool rep_possible;
};

// For a single token: repay reaches health 1 with a (weakly) smaller amount
// whenever the user has enough debt in that token to repay; otherwise deposit
// is the only option.
Result<AvoidanceChoice> preferred_avoidance_action(const ProtocolParams& params,
                                                   const BlockchainState& state,
                                                   const AddressId& user, const TokenId& token);

struct PxFrontrunDelta {
    Rat delta;  // gain(tx then px) - gain(px), exact
    Relation relation;
};

// Closed-form effect of firing `tx` before px(delta: token). Swaps buying the
// token gain v * delta * p(from)/p(token); swaps selling it lose v * delta;
// dep/rep/bor/rdm change nothing.
Result<PxFrontrunDelta> px_frontrun_gain_delta(const ProtocolParams& params,
                                               const BlockchainState& state, const Transaction& tx,
                                               const Rat& delta, const TokenId& token);

// dep(v1:t1) bor(v2:t2) swp(v2:t2,t1) before px(+delta:t1): the swap output
// v2 * p(t2)/p(t1) of extra t1 units appreciates by delta each.
Result<StrategyPlan> build_leverage_strategy(const ProtocolParams& params,
                                             const BlockchainState& state, const AddressId& user,
                                             const Rat& v1, const TokenId& t1, const Rat& v2,
                                             const TokenId& t2, const Rat& delta);

enum class StrategyErrorCode { UserHealthy, DisabledTransaction, UnsupportedRateFn };

struct StrategyError {
    StrategyErrorCode code;
    std::string detail;
    std::optional<StepError> cause;
};

// Whether firing a transaction of the given kind before an interest accrual
// can only help (>=), only hurt (<=), has no effect (=), or depends on the
// state. Only defined for the linear utilization rate model.
std::variant<Relation, StrategyError> accrual_frontrun_classification(const ProtocolParams& params,
                                                                      TxKind kind);

struct FrontrunWitness {
    Transaction tx;
    Rat with_frontrun;  // gain(tx then int)
    Rat without;        // gain(int)
};

struct WitnessPair {
    std::optional<FrontrunWitness> beneficial;   // with > without
    std::optional<FrontrunWitness> detrimental;  // with < without
};

// Grid search companion for Indeterminate classifications: executes each
// candidate before an accrual and keeps one witness per direction.
WitnessPair accrual_frontrun_witnesses(const ProtocolParams& params, const BlockchainState& state,
                                       const AddressId& user,
                                       const std::vector<Transaction>& candidates);

}  // namespace lpsim
