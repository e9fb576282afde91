#pragma once

#include "lpsim/semantics.hpp"

namespace lpsim {

// Line-oriented scenario files: protocol parameters, initial wallets and
// prices, one transaction per line, optional exact expectations checked after
// a given step. `#` starts a comment. Rendering emits the canonical form, so
// parse(render(x)) == x.

enum class ExpectKind { Health, NetWorth, Wallet, Credit, Debt, Reserves, XRate, Price };

struct Expectation {
    size_t step;  // 1-based; 0 checks the initial state
    ExpectKind kind;
    std::optional<AddressId> addr;
    std::optional<TokenId> token;
    ExtRat value;  // health may be "inf"
    bool operator==(const Expectation&) const = default;
};

struct Scenario {
    Rat liq_threshold{2, 3};
    Rat liq_reward{11, 10};
    Rat rate_alpha{0};
    Rat rate_beta{3, 25};
    std::vector<std::tuple<AddressId, Rat, TokenId>> wallets;
    std::vector<std::pair<TokenId, Rat>> prices;
    Trace trace;
    std::vector<Expectation> expects;

    ProtocolParams params() const;
    Result<BlockchainState> initial() const;
    bool operator==(const Scenario&) const = default;
};

struct ParseError {
    size_t line;    // 1-based
    size_t column;  // 1-based
    std::string expected;
    std::string str() const;
};

std::variant<Scenario, ParseError> parse_scenario(const std::string& text);
std::variant<Scenario, ParseError> load_scenario(const std::string& path);

std::string render_scenario(const Scenario& scenario);

struct ReportOptions {
    int precision = 2;
    bool exact = false;  // append exact rationals next to rounded values
};

// Human-readable state dump in the sugared trace-listing style: per-user
// holdings, pool reserves, prices, health factors and net worths, all in
// deterministic (token, then address) order.
std::string render_state_report(const ProtocolParams& params, const BlockchainState& state,
                                const ReportOptions& options = {});

struct ExpectFailure {
    Expectation expectation;
    std::string actual;
};

// Runs the scenario strictly and evaluates all expectations with exact
// rational comparison.
struct ScenarioRun {
    std::vector<BlockchainState> states;  // states[i] = after step i; states[0] = initial
    std::vector<ExpectFailure> failures;
};

Result<ScenarioRun> run_scenario(const Scenario& scenario);

}  // namespace lpsim
