#pragma once

#include "lpsim/metrics.hpp"
#include "lpsim/tx.hpp"

#include <utility>
#include <vector>

namespace lpsim {

// Lightweight success-or-StepError carrier; states are values, so apply
// returns a fresh state and never mutates its input.
template <typename T>
class Result {
  public:
    Result(T value) : data_(std::move(value)) {}
    Result(StepError error) : data_(std::move(error)) {}

    bool ok() const { return std::holds_alternative<T>(data_); }
    explicit operator bool() const { return ok(); }
    const T& value() const& { return std::get<T>(data_); }
    T&& value() && { return std::get<T>(std::move(data_)); }
    const StepError& error() const { return std::get<StepError>(data_); }

  private:
    std::variant<T, StepError> data_;
};

// Builds a state with an empty pool. Throws-free: bad prices or negative
// balances are reported as StepErrors.
Result<BlockchainState> initial_state(
    const std::vector<std::tuple<AddressId, Rat, TokenId>>& wallet_entries,
    const std::vector<std::pair<TokenId, Rat>>& price_entries);

// One deterministic step of the transition relation. All-or-nothing: on error
// the input state is untouched and returned errors name the violated premise.
Result<BlockchainState> apply(const ProtocolParams& params, const BlockchainState& state,
                              const Transaction& tx);

struct EnabledCheck {
    bool enabled;
    std::optional<StepError> violation;  // first violated premise when disabled
    explicit operator bool() const { return enabled; }
};

EnabledCheck is_enabled(const ProtocolParams& params, const BlockchainState& state,
                        const Transaction& tx);

enum class TraceMode { Strict, SkipDisabled };

struct TraceRun {
    BlockchainState final_state;
    std::vector<bool> applied;                     // one flag per input transaction
    std::vector<std::optional<StepError>> skips;   // reason when not applied

    std::vector<size_t> skipped_indices() const {
        std::vector<size_t> out;
        for (size_t i = 0; i < applied.size(); ++i)
            if (!applied[i]) out.push_back(i);
        return out;
    }
};

// Strict mode fails on the first disabled transaction (error carries the step
// index); skip mode drops disabled transactions and records why.
Result<TraceRun> apply_trace(const ProtocolParams& params, const BlockchainState& state,
                             const Trace& trace, TraceMode mode);

}  // namespace lpsim
