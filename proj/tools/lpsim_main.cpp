#include "lpsim/attacks.hpp"
#include "lpsim/fuzz.hpp"
#include "lpsim/invariants.hpp"
#include "lpsim/scenario.hpp"
#include "lpsim/strategies.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <future>
#include <iostream>

using nlohmann::json;

namespace {

using namespace lpsim;

std::optional<Scenario> load_or_complain(const std::string& path) {
    auto parsed = load_scenario(path);
    if (auto* err = std::get_if<ParseError>(&parsed)) {
        std::cerr << path << ": " << err->str() << "\n";
        return std::nullopt;
    }
    return std::get<Scenario>(parsed);
}

json rat_json(const Rat& q) { return to_fraction_string(q); }

json state_json(const ProtocolParams& params, const BlockchainState& state) {
    json j;
    for (const auto& [token, amount] : state.pool.reserves)
        j["reserves"][token.name] = rat_json(amount);
    for (const auto& [token, price] : state.prices.prices()) {
        j["prices"][token.name] = rat_json(price);
        j["xrate"][token.name] = rat_json(exchange_rate(state.pool, token));
    }
    for (const auto& [key, amount] : state.wallet.balances)
        j["wallets"][key.second.name][key.first.name] = rat_json(amount);
    for (const auto& [key, amount] : state.pool.credits)
        j["credits"][key.second.name][key.first.name] = rat_json(amount);
    for (const auto& [key, amount] : state.pool.debits)
        j["debits"][key.second.name][key.first.name] = rat_json(amount);
    for (const auto& user : addresses_of(state)) {
        ExtRat h = health_factor(params, state, user);
        j["health"][user.name] = h.is_infinite() ? json("inf") : rat_json(h.value());
        j["networth"][user.name] = rat_json(net_worth(state, user));
    }
    return j;
}

int cmd_run(const std::string& path, int precision, bool exact, const std::string& format) {
    auto scenario = load_or_complain(path);
    if (!scenario) return 2;
    auto run = run_scenario(*scenario);
    if (!run) {
        std::cerr << "trace failed: " << run.error().str() << "\n";
        return 1;
    }
    ProtocolParams params = scenario->params();
    ReportOptions options{precision, exact};
    if (format == "json") {
        json steps = json::array();
        for (size_t i = 0; i < run.value().states.size(); ++i) {
            json j = state_json(params, run.value().states[i]);
            j["step"] = i;
            j["tx"] = i == 0 ? "initial" : tx_label(scenario->trace[i - 1]);
            j["applied"] = i > 0;
            steps.push_back(std::move(j));
        }
        std::cout << steps.dump(2) << "\n";
    } else {
        for (size_t i = 0; i < run.value().states.size(); ++i) {
            if (i == 0)
                std::cout << "initial\n";
            else
                std::cout << "step " << i << ": " << tx_label(scenario->trace[i - 1]) << "\n";
            std::cout << render_state_report(params, run.value().states[i], options);
        }
    }
    for (const auto& f : run.value().failures) {
        std::cerr << "expect mismatch at step " << f.expectation.step << ": got " << f.actual
                  << "\n";
    }
    return run.value().failures.empty() ? 0 : 1;
}

int cmd_check(const std::string& path) {
    auto scenario = load_or_complain(path);
    if (!scenario) return 2;
    auto initial = scenario->initial();
    if (!initial) {
        std::cerr << "bad initial state: " << initial.error().str() << "\n";
        return 2;
    }
    auto report = check_trace(scenario->params(), initial.value(), scenario->trace);
    if (!report) {
        std::cerr << "trace failed: " << report.error().str() << "\n";
        return 1;
    }
    size_t failures = report.value().failures();
    for (const auto& check : report.value().checks)
        if (check.status == InvariantStatus::Fail)
            std::cerr << "FAIL " << check.id << ": " << check.witness << "\n";
    std::cout << report.value().checks.size() << " checks, " << failures << " failures\n";
    return failures == 0 ? 0 : 1;
}

int cmd_gain(const std::string& path, const std::string& user, size_t vs_suffix, int precision) {
    auto scenario = load_or_complain(path);
    if (!scenario) return 2;
    auto initial = scenario->initial();
    if (!initial) {
        std::cerr << "bad initial state: " << initial.error().str() << "\n";
        return 2;
    }
    ProtocolParams params = scenario->params();
    AddressId addr{user};
    GainReport full = gain(params, initial.value(), addr, scenario->trace);
    std::cout << "gain(" << user << ") = " << to_decimal_string(full.definitional_gain, precision)
              << "  [" << to_fraction_string(full.definitional_gain) << "]\n";
    for (const auto& [token, value] : full.breakdown)
        std::cout << "  " << token.name << ": " << to_decimal_string(value, precision) << "\n";
    for (size_t idx : full.skipped_steps)
        std::cout << "  skipped step " << idx + 1 << " (disabled)\n";
    if (vs_suffix > 0) {
        Trace suffix(scenario->trace.begin() +
                         static_cast<long>(std::min(vs_suffix, scenario->trace.size())),
                     scenario->trace.end());
        GainReport alone = gain(params, initial.value(), addr, suffix);
        Rat delta = full.definitional_gain - alone.definitional_gain;
        std::cout << "gain without first " << vs_suffix
                  << " step(s) = " << to_decimal_string(alone.definitional_gain, precision)
                  << "\nfront-running delta = " << to_decimal_string(delta, precision) << "  ["
                  << to_fraction_string(delta) << "]\n";
    }
    return 0;
}

int cmd_attack(const std::string& kind, const std::string& path, const std::string& adversary,
               const std::string& victim, const std::string& token1, const std::string& token2,
               const std::string& amount_text, const std::string& delta_text,
               const std::string& vl_text, int precision) {
    auto scenario = load_or_complain(path);
    if (!scenario) return 2;
    auto initial = scenario->initial();
    if (!initial) {
        std::cerr << "bad initial state: " << initial.error().str() << "\n";
        return 2;
    }
    ProtocolParams params = scenario->params();
    auto run = apply_trace(params, initial.value(), scenario->trace, TraceMode::Strict);
    if (!run) {
        std::cerr << "scenario trace failed: " << run.error().str() << "\n";
        return 1;
    }
    const BlockchainState& state = run.value().final_state;

    auto need = [&](const std::string& text, const char* what) {
        auto q = parse_rational(text);
        if (!q) {
            std::cerr << "missing or malformed --" << what << "\n";
            exit(2);
        }
        return *q;
    };

    AttackOutcome outcome;
    if (kind == "undercoll") {
        outcome = build_undercollateralized_loan_attack(
            params, state, AddressId(adversary), need(amount_text, "amount"), TokenId(token1),
            TokenId(token2), need(delta_text, "delta"));
    } else if (kind == "liq") {
        outcome = build_liquidation_attack(params, state, AddressId(adversary), AddressId(victim),
                                           TokenId(token1), TokenId(token2),
                                           need(delta_text, "delta"), need(vl_text, "vl"));
    } else if (kind == "underutil") {
        outcome = build_underutilization_attack(params, state, AddressId(adversary),
                                                AddressId(victim), TokenId(token1),
                                                need(amount_text, "amount"));
    } else {
        outcome = build_overutilization_attack(params, state, AddressId(adversary),
                                               AddressId(victim), TokenId(token1),
                                               need(amount_text, "amount"));
    }

    std::cout << "verdict: " << attack_verdict_name(outcome.verdict);
    if (!outcome.detail.empty()) std::cout << " (" << outcome.detail << ")";
    std::cout << "\n";
    for (const auto& tx : outcome.trace) std::cout << "  " << tx_label(tx) << "\n";
    if (outcome.enabled) {
        std::cout << "adversary gain: " << to_decimal_string(outcome.adversary_gain, precision)
                  << "  [" << to_fraction_string(outcome.adversary_gain) << "]\n";
        if (outcome.victim_gain)
            std::cout << "victim gain: " << to_decimal_string(*outcome.victim_gain, precision)
                      << "\n";
        std::cout << "adversary net position: "
                  << to_decimal_string(outcome.adversary_net_position, precision) << "\n";
    }
    return outcome.verdict == AttackVerdict::Succeeded ? 0 : 1;
}

int cmd_fuzz(uint64_t seed, size_t seeds, size_t steps, size_t users, size_t tokens, size_t jobs,
             bool verbose) {
    auto run_range = [&](uint64_t from, uint64_t to) {
        size_t failures = 0;
        size_t checked_steps = 0;
        for (uint64_t s = from; s < to; ++s) {
            FuzzConfig config;
            config.seed = s;
            config.steps = steps;
            config.users = users;
            config.tokens = tokens;
            FuzzResult result = generate_trace(config);
            auto report = check_trace(result.params, result.initial, result.trace);
            if (!report) {
                ++failures;  // generated traces must replay strictly
                if (verbose) std::cerr << "seed " << s << ": " << report.error().str() << "\n";
                continue;
            }
            checked_steps += result.trace.size();
            if (!report.value().all_passed()) {
                failures += report.value().failures();
                if (verbose)
                    for (const auto& check : report.value().checks)
                        if (check.status == InvariantStatus::Fail)
                            std::cerr << "seed " << s << ": " << check.id << " " << check.witness
                                      << "\n";
            }
        }
        return std::pair{failures, checked_steps};
    };

    size_t failures = 0, total_steps = 0;
    if (jobs <= 1) {
        auto [f, n] = run_range(seed, seed + seeds);
        failures = f;
        total_steps = n;
    } else {
        std::vector<std::future<std::pair<size_t, size_t>>> futures;
        uint64_t chunk = (seeds + jobs - 1) / jobs;
        for (size_t j = 0; j < jobs; ++j) {
            uint64_t from = seed + j * chunk;
            uint64_t to = std::min<uint64_t>(seed + seeds, from + chunk);
            if (from >= to) break;
            futures.push_back(std::async(std::launch::async, run_range, from, to));
        }
        for (auto& f : futures) {
            auto [fails, n] = f.get();
            failures += fails;
            total_steps += n;
        }
    }
    std::cout << seeds << " seeds, " << total_steps << " steps, " << failures << " failures\n";
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lending pool transition-system simulator"};
    app.require_subcommand(1);

    std::string path, format = "text", user;
    int precision = 2;
    bool exact = false;
    size_t vs_suffix = 0;

    auto* run = app.add_subcommand("run", "replay a scenario and print per-step reports");
    run->add_option("file", path)->required();
    run->add_option("--precision", precision);
    run->add_flag("--exact", exact);
    run->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

    auto* check = app.add_subcommand("check", "run the invariant suite over a scenario");
    check->add_option("file", path)->required();

    auto* gain_cmd = app.add_subcommand("gain", "gain of a user across the scenario trace");
    gain_cmd->add_option("file", path)->required();
    gain_cmd->add_option("--user", user)->required();
    gain_cmd->add_option("--vs-suffix", vs_suffix,
                         "also report the gain of the trace without its first K steps");
    gain_cmd->add_option("--precision", precision);

    std::string attack_kind, adversary, victim, token1, token2, amount_text, delta_text, vl_text;
    auto* attack = app.add_subcommand("attack", "construct and verify an attack on the final state");
    attack->add_option("kind", attack_kind)
        ->required()
        ->check(CLI::IsMember({"undercoll", "liq", "underutil", "overutil"}));
    attack->add_option("file", path)->required();
    attack->add_option("--adversary", adversary)->required();
    attack->add_option("--victim", victim);
    attack->add_option("--token1", token1)->required();
    attack->add_option("--token2", token2);
    attack->add_option("--amount", amount_text);
    attack->add_option("--delta", delta_text);
    attack->add_option("--vl", vl_text);
    attack->add_option("--precision", precision);

    uint64_t seed = 0;
    size_t seeds = 1, steps = 40, users = 3, tokens = 2, jobs = 1;
    bool verbose = false;
    auto* fuzz = app.add_subcommand("fuzz", "generate seeded traces and check all invariants");
    fuzz->add_option("--seed", seed);
    fuzz->add_option("--seeds", seeds, "number of consecutive seeds to run");
    fuzz->add_option("--steps", steps);
    fuzz->add_option("--users", users);
    fuzz->add_option("--tokens", tokens);
    fuzz->add_option("--jobs", jobs);
    fuzz->add_flag("--verbose", verbose);

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return cmd_run(path, precision, exact, format);
    if (check->parsed()) return cmd_check(path);
    if (gain_cmd->parsed()) return cmd_gain(path, user, vs_suffix, precision);
    if (attack->parsed())
        return cmd_attack(attack_kind, path, adversary, victim, token1, token2, amount_text,
                          delta_text, vl_text, precision);
    if (fuzz->parsed()) return cmd_fuzz(seed, seeds, steps, users, tokens, jobs, verbose);
    return 0;
}
