#include "lpsim/strategies.hpp"

namespace lpsim {

const char* relation_name(Relation r) {
    switch (r) {
        case Relation::Greater: return ">";
        case Relation::Less: return "<";
        case Relation::Equal: return "=";
        case Relation::GreaterEqual: return ">=";
        case Relation::LessEqual: return "<=";
        case Relation::Indeterminate: return "indeterminate";
    }
    return "?";
}

Result<AvoidanceThreshold> liquidation_avoidance_threshold(const ProtocolParams& params,
                                                           const BlockchainState& state,
                                                           const AddressId& user,
                                                           AvoidanceAction action,
                                                           const TokenId& token) {
    if (health_factor(params, state, user) >= Rat(1))
        return StepError{StepErrorCode::BorrowerHealthy, user.name + " is already healthy",
                         std::nullopt};
    if (!state.prices.has_price(token))
        return StepError{StepErrorCode::MissingPrice, "no price for " + token.name, std::nullopt};
    PortfolioValues v = portfolio_values(state, user);
    const Rat& price = state.prices.price(token);
    AvoidanceThreshold out{Rat(0), true, ""};
    if (action == AvoidanceAction::Dep) {
        // A deposit of v adds exactly v * p of collateral value (the minted
        // v / X credits are valued at X * p each).
        out.min_amount = (v.debt_value / params.liq_threshold - v.credit_value) / price;
        if (lookup(state.wallet.balances, token, user) < out.min_amount) {
            out.affordable = false;
            out.note = "wallet below required deposit";
        }
    } else {
        out.min_amount = (v.debt_value - v.credit_value * params.liq_threshold) / price;
        Rat own_debt = lookup(state.pool.debits, token, user);
        if (own_debt < out.min_amount) {
            out.affordable = false;
            out.note = "debt in " + token.name + " below required repayment";
        } else if (lookup(state.wallet.balances, token, user) < out.min_amount) {
            out.affordable = false;
            out.note = "wallet below required repayment";
        }
    }
    if (sgn(out.min_amount) < 0) out.min_amount = Rat(0);  // boundary: already at D = C*T
    return out;
}

Result<AvoidanceChoice> preferred_avoidance_action(const ProtocolParams& params,
                                                   const BlockchainState& state,
                                                   const AddressId& user, const TokenId& token) {
    auto dep = liquidation_avoidance_threshold(params, state, user, AvoidanceAction::Dep, token);
    if (!dep) return dep.error();
    auto rep = liquidation_avoidance_threshold(params, state, user, AvoidanceAction::Rep, token);
    if (!rep) return rep.error();
    AvoidanceChoice out{AvoidanceAction::Rep, dep.value().min_amount, rep.value().min_amount,
                        lookup(state.pool.debits, token, user) >= rep.value().min_amount};
    if (!out.rep_possible || out.dep_amount < out.rep_amount) out.action = AvoidanceAction::Dep;
    return out;
}

Result<PxFrontrunDelta> px_frontrun_gain_delta(const ProtocolParams& params,
                                               const BlockchainState& state, const Transaction& tx,
                                               const Rat& delta, const TokenId& token) {
    if (!mentions(tx, token))
        return StepError{StepErrorCode::MalformedTransaction,
                         "transaction does not mention " + token.name, std::nullopt};
    if (auto check = is_enabled(params, state, tx); !check) return *check.violation;
    if (auto check = is_enabled(params, state, Transaction(PriceUpdate{delta, token})); !check)
        return *check.violation;

    switch (kind_of(tx)) {
        case TxKind::Dep:
        case TxKind::Bor:
        case TxKind::Rep:
        case TxKind::Rdm:
            // The user's exposure to the token is unchanged by these actions.
            return PxFrontrunDelta{Rat(0), Relation::Equal};
        case TxKind::Swp: {
            const auto& swp = std::get<Swap>(tx);
            Rat d;
            if (swp.to_token == token) {
                // Buying: the swap yields v * p(from)/p(token) extra units.
                d = swp.amount * delta * state.prices.price(swp.from_token) /
                    state.prices.price(token);
            } else {
                // Selling: v units stop being exposed to the update.
                d = -swp.amount * delta;
            }
            Relation rel = sgn(d) > 0   ? Relation::Greater
                           : sgn(d) < 0 ? Relation::Less
                                        : Relation::Equal;
            return PxFrontrunDelta{d, rel};
        }
        default:
            return StepError{StepErrorCode::MalformedTransaction,
                             "px front-running is defined for dep/bor/rep/rdm/swp", std::nullopt};
    }
}

Result<StrategyPlan> build_leverage_strategy(const ProtocolParams& params,
                                             const BlockchainState& state, const AddressId& user,
                                             const Rat& v1, const TokenId& t1, const Rat& v2,
                                             const TokenId& t2, const Rat& delta) {
    if (sgn(delta) <= 0)
        return StepError{StepErrorCode::MalformedTransaction, "leverage needs a price increase",
                         std::nullopt};
    Trace prefix{Deposit{user, v1, t1}, Borrow{user, v2, t2}, Swap{user, v2, t2, t1}};
    auto run = apply_trace(params, state, prefix, TraceMode::Strict);
    if (!run) return run.error();
    Rat received_t1 = v2 * state.prices.price(t2) / state.prices.price(t1);
    return StrategyPlan{std::move(prefix), PriceUpdate{delta, t1}, Relation::Greater,
                        received_t1 * delta};
}

std::variant<Relation, StrategyError> accrual_frontrun_classification(const ProtocolParams& params,
                                                                      TxKind kind) {
    if (!params.rate_model.is_linear())
        return StrategyError{StrategyErrorCode::UnsupportedRateFn,
                             "classification requires the linear utilization model", std::nullopt};
    if (kind == TxKind::Swp) return Relation::Equal;  // swaps never touch the pool
    if (kind == TxKind::Int || kind == TxKind::Px)
        return StrategyError{StrategyErrorCode::DisabledTransaction,
                             "classification covers user actions only", std::nullopt};
    if (sgn(params.rate_model.linear().alpha) != 0) return Relation::Indeterminate;
    switch (kind) {
        case TxKind::Dep:
        case TxKind::Rep: return Relation::GreaterEqual;
        case TxKind::Bor:
        case TxKind::Rdm: return Relation::LessEqual;
        default: return Relation::Indeterminate;  // liq: both directions occur
    }
}

WitnessPair accrual_frontrun_witnesses(const ProtocolParams& params, const BlockchainState& state,
                                       const AddressId& user,
                                       const std::vector<Transaction>& candidates) {
    WitnessPair out;
    Rat without = gain(params, state, user, {AccrueInterest{}}).definitional_gain;
    for (const auto& tx : candidates) {
        if (!is_enabled(params, state, tx)) continue;
        Rat with = gain(params, state, user, {tx, AccrueInterest{}}).definitional_gain;
        if (!out.beneficial && with > without) out.beneficial = FrontrunWitness{tx, with, without};
        if (!out.detrimental && with < without) out.detrimental = FrontrunWitness{tx, with, without};
        if (out.beneficial && out.detrimental) break;
    }
    return out;
}

}  // namespace lpsim
