#include "lpsim/invariants.hpp"

namespace lpsim {

namespace {

void report(InvariantReport& r, std::string id, bool pass, std::string witness = "") {
    r.checks.push_back(
        {std::move(id), pass ? InvariantStatus::Pass : InvariantStatus::Fail, std::move(witness)});
}

void not_applicable(InvariantReport& r, std::string id) {
    r.checks.push_back({std::move(id), InvariantStatus::NotApplicable, ""});
}

std::string vs(const Rat& left, const Rat& right) {
    return to_fraction_string(left) + " vs " + to_fraction_string(right);
}

Rat total_net_worth(const BlockchainState& state) {
    Rat total(0);
    for (const auto& user : addresses_of(state)) total += net_worth(state, user);
    return total;
}

}  // namespace

InvariantReport check_step(const ProtocolParams& params, const BlockchainState& pre,
                           const Transaction& tx, const BlockchainState& post) {
    InvariantReport r;
    TxKind kind = kind_of(tx);

    // Determinism: re-application reaches a structurally equal state.
    {
        auto again = apply(params, pre, tx);
        report(r, "determinism", again.ok() && again.value() == post,
               again.ok() ? "" : again.error().str());
    }

    // Base token conservation (swap exchanges with the environment).
    if (kind == TxKind::Swp) {
        not_applicable(r, "base-token-conservation");
    } else {
        bool pass = true;
        std::string witness;
        std::set<TokenId> tokens = tokens_of(pre);
        auto post_tokens = tokens_of(post);
        tokens.insert(post_tokens.begin(), post_tokens.end());
        for (const auto& token : tokens) {
            Rat before = wallet_supply(pre.wallet, token) + lookup(pre.pool.reserves, token);
            Rat after = wallet_supply(post.wallet, token) + lookup(post.pool.reserves, token);
            if (before != after) {
                pass = false;
                witness = token.name + ": " + vs(before, after);
                break;
            }
        }
        report(r, "base-token-conservation", pass, witness);
    }

    // Exchange rate step law: accruals raise it by debt/credits * rate, a
    // credit-draining redeem resets it to 1, everything else preserves it.
    {
        bool pass = true;
        std::string witness;
        for (const auto& token : tokens_of(pre)) {
            Rat before = exchange_rate(pre.pool, token);
            Rat after = exchange_rate(post.pool, token);
            Rat expected = before;
            if (kind == TxKind::Int && sgn(debt_supply(pre.pool, token)) > 0) {
                expected = before + debt_supply(pre.pool, token) / credit_supply(pre.pool, token) *
                                        interest_rate(params, pre.pool, token);
            } else if (kind == TxKind::Rdm && std::get<Redeem>(tx).token == token &&
                       sgn(credit_supply(post.pool, token)) == 0) {
                expected = Rat(1);
            }
            if (after != expected) {
                pass = false;
                witness = token.name + ": " + vs(after, expected);
                break;
            }
        }
        report(r, "exchange-rate-step-law", pass, witness);
    }

    // Reachable-state bounds.
    {
        bool pass = true;
        std::string witness;
        for (const auto& token : tokens_of(post)) {
            Rat x = exchange_rate(post.pool, token);
            if (x < 1) {
                pass = false;
                witness = token.name + ": X = " + to_fraction_string(x);
                break;
            }
        }
        report(r, "exchange-rate-geq-1", pass, witness);
    }
    {
        bool pass = true;
        std::string witness;
        for (const auto& token : tokens_of(post)) {
            if (sgn(credit_supply(post.pool, token)) != 0) continue;
            if (sgn(lookup(post.pool.reserves, token)) != 0 ||
                sgn(debt_supply(post.pool, token)) != 0) {
                pass = false;
                witness = token.name + " has reserves or debt without credits";
                break;
            }
        }
        report(r, "no-credits-implies-empty", pass, witness);
    }
    {
        bool pass = true;
        std::string witness;
        for (const auto& token : tokens_of(post)) {
            Rat credits = credit_supply(post.pool, token);
            Rat bound = lookup(post.pool.reserves, token) + debt_supply(post.pool, token);
            if (credits > bound) {
                pass = false;
                witness = token.name + ": " + vs(credits, bound);
                break;
            }
        }
        report(r, "credit-supply-bound", pass, witness);
    }

    // Total net worth is preserved by everything but price updates.
    if (kind == TxKind::Px) {
        not_applicable(r, "net-worth-preservation");
    } else {
        Rat before = total_net_worth(pre);
        Rat after = total_net_worth(post);
        report(r, "net-worth-preservation", before == after, vs(before, after));
    }

    // Health direction of the acting user.
    if (auto actor = actor_of(tx)) {
        ExtRat before = health_factor(params, pre, *actor);
        ExtRat after = health_factor(params, post, *actor);
        bool strict = sgn(portfolio_values(pre, *actor).debt_value) > 0;
        bool pass = true;
        switch (kind) {
            case TxKind::Dep:
            case TxKind::Rep:
            case TxKind::Liq: pass = strict ? after > before : after >= before; break;
            case TxKind::Bor:
            case TxKind::Rdm: pass = strict ? after < before : after <= before; break;
            case TxKind::Swp: pass = after == before; break;
            default: break;
        }
        report(r, "health-direction", pass,
               pass ? "" : before.str(6) + " -> " + after.str(6));
    } else {
        not_applicable(r, "health-direction");
    }

    return r;
}

Result<InvariantReport> check_trace(const ProtocolParams& params, const BlockchainState& initial,
                                    const Trace& trace) {
    InvariantReport total;
    BlockchainState state = initial;
    for (size_t i = 0; i < trace.size(); ++i) {
        auto next = apply(params, state, trace[i]);
        if (!next) {
            StepError e = next.error();
            e.step = i;
            return e;
        }
        total.merge(check_step(params, state, trace[i], next.value()));
        state = std::move(next).value();
    }
    return total;
}

Result<InvariantReport> differential_gain_check(const ProtocolParams& params,
                                                const BlockchainState& state,
                                                const Transaction& tx) {
    if (auto check = is_enabled(params, state, tx); !check) return *check.violation;
    InvariantReport r;
    TxKind kind = kind_of(tx);
    Rat sum(0);
    for (const auto& user : addresses_of(state)) {
        Rat definitional = gain(params, state, user, {tx}).definitional_gain;
        sum += definitional;
        Rat predicted(0);
        switch (kind) {
            case TxKind::Px: {
                const auto& px = std::get<PriceUpdate>(tx);
                predicted = predicted_gain_price_update(state, user, px.delta, px.token).value();
                break;
            }
            case TxKind::Int:
                predicted = predicted_gain_interest_accrual(params, state, user);
                break;
            case TxKind::Liq:
                predicted =
                    predicted_gain_liquidation_for(params, state, std::get<Liquidate>(tx), user)
                        .value();
                break;
            default:
                break;  // user actions other than liquidation have zero gain
        }
        report(r, "gain-closed-form/" + user.name, definitional == predicted,
               vs(definitional, predicted));
    }
    if (kind == TxKind::Px) {
        not_applicable(r, "gain-sums-to-zero");
    } else {
        report(r, "gain-sums-to-zero", sgn(sum) == 0, to_fraction_string(sum));
    }
    return r;
}

}  // namespace lpsim
