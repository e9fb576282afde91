#pragma once

#include "lpsim/analysis.hpp"

namespace lpsim {

// Constructors for the four capital-based attacks. Each derives the attack
// parameters from the target state, emits the trace, executes it, and checks
// the predicted outcome against definitional gains. ClaimViolated means an
// instance satisfied the hypotheses but the predicted outcome failed on
// execution; the test suites treat any such occurrence as a failure.

enum class AttackVerdict { Succeeded, PreconditionFailed, ClaimViolated };

const char* attack_verdict_name(AttackVerdict v);

struct AttackOutcome {
    Trace trace;
    bool enabled = false;                  // all steps enabled in order
    Rat adversary_gain;                    // definitional, over the full trace
    std::optional<Rat> victim_gain;
    Rat adversary_net_position;            // in the post-attack state
    AttackVerdict verdict = AttackVerdict::PreconditionFailed;
    std::string detail;
};

// dep(v1:t1) px(-delta:t2) bor(v2:t2) px(+delta:t2) with
// v2 = v1/X(t1) * p(t1)/(p(t2)-delta) * T. The round trip leaves the
// adversary's gain at exactly zero while the borrowed debt may exceed the
// collateral: net position goes negative iff delta > p(t2) * (1 - T/X(t1)).
AttackOutcome build_undercollateralized_loan_attack(const ProtocolParams& params,
                                                    const BlockchainState& state,
                                                    const AddressId& adversary, const Rat& v1,
                                                    const TokenId& t1, const TokenId& t2,
                                                    const Rat& delta);

// px((-p(t1)+delta):t1) liq(victim, vl:t2, t1-credits) px((p(t1)-delta):t1).
// Crashing the collateral price makes the victim liquidatable; the restored
// price re-values the seized credits, so the adversary's gain is positive.
// delta is searched geometrically downward from delta0 until the whole trace
// is enabled.
AttackOutcome build_liquidation_attack(const ProtocolParams& params, const BlockchainState& state,
                                       const AddressId& adversary, const AddressId& victim,
                                       const TokenId& t1, const TokenId& t2, const Rat& delta0,
                                       const Rat& vl, int max_halvings = 24);

// dep(v:t) int rdm(minted:t): the deposit lowers utilization, shrinking both
// the adversary's interest bill and the victim creditor's appreciation.
AttackOutcome build_underutilization_attack(const ProtocolParams& params,
                                            const BlockchainState& state,
                                            const AddressId& adversary, const AddressId& victim,
                                            const TokenId& token, const Rat& amount);

// bor(v:t) int rep(v:t): the borrow raises utilization; the adversary owns all
// credits, so the extra interest flows back to the adversary while the victim debtor
// pays more.
AttackOutcome build_overutilization_attack(const ProtocolParams& params,
                                           const BlockchainState& state,
                                           const AddressId& adversary, const AddressId& victim,
                                           const TokenId& token, const Rat& amount);

}  // namespace lpsim
