#pragma once

#include "lpsim/analysis.hpp"

namespace lpsim {

// Runnable form of the protocol's structural laws: every applied step is checked for
// determinism, conservation, the exchange-rate step law, the reachable-state
// bounds, net-worth preservation and the health direction law.

enum class InvariantStatus { Pass, Fail, NotApplicable };

struct InvariantCheck {
    std::string id;
    InvariantStatus status;
    std::string witness;  // exact left/right values when failing
};

struct InvariantReport {
    std::vector<InvariantCheck> checks;

    bool all_passed() const {
        for (const auto& c : checks)
            if (c.status == InvariantStatus::Fail) return false;
        return true;
    }
    size_t failures() const {
        size_t n = 0;
        for (const auto& c : checks)
            if (c.status == InvariantStatus::Fail) ++n;
        return n;
    }
    void merge(InvariantReport other) {
        checks.insert(checks.end(), std::make_move_iterator(other.checks.begin()),
                      std::make_move_iterator(other.checks.end()));
    }
};

// Precondition: post == apply(params, pre, tx). Reports, never throws on a
// violated invariant.
InvariantReport check_step(const ProtocolParams& params, const BlockchainState& pre,
                           const Transaction& tx, const BlockchainState& post);

// Applies the trace strictly, checking every step. A disabled transaction is
// reported through the Result error.
Result<InvariantReport> check_trace(const ProtocolParams& params, const BlockchainState& initial,
                                    const Trace& trace);

// For one enabled transaction, compares the definitional gain of every user
// against the applicable closed form, and checks that gains sum to zero for
// non-price-update transactions.
Result<InvariantReport> differential_gain_check(const ProtocolParams& params,
                                                const BlockchainState& state,
                                                const Transaction& tx);

}  // namespace lpsim
