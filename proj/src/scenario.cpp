#include "lpsim/scenario.hpp"

#include "lpsim/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace lpsim {

namespace {

// Cursor over one line; columns are 1-based for error reporting.
struct LineCursor {
    const std::string& text;
    size_t line_no;
    size_t pos = 0;

    struct Error {
        ParseError err;
    };

    [[noreturn]] void fail(const std::string& expected) const {
        throw Error{ParseError{line_no, pos + 1, expected}};
    }
    bool done() const { return pos >= text.size(); }
    char peek() const { return done() ? '\0' : text[pos]; }
    void skip_spaces() {
        while (!done() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    }
    void expect_char(char c) {
        if (peek() != c) fail(std::string("'") + c + "'");
        ++pos;
    }
    bool try_char(char c) {
        if (peek() != c) return false;
        ++pos;
        return true;
    }
    std::string word() {  // identifier: up to a delimiter
        size_t start = pos;
        while (!done() && std::string(" \t:,()").find(text[pos]) == std::string::npos) ++pos;
        if (pos == start) fail("identifier");
        return text.substr(start, pos - start);
    }
    Rat rational(const char* what = "number") {
        size_t start = pos;
        if (peek() == '+' || peek() == '-') ++pos;
        while (!done() && (std::isdigit(static_cast<unsigned char>(text[pos])) ||
                           text[pos] == '.' || text[pos] == '/'))
            ++pos;
        auto parsed = parse_rational(text.substr(start, pos - start));
        if (!parsed) {
            pos = start;
            fail(what);
        }
        return *parsed;
    }
    void end_of_line() {
        skip_spaces();
        if (!done()) fail("end of line");
    }
};

std::pair<Rat, TokenId> amount_colon_token(LineCursor& c) {
    Rat amount = c.rational("amount");
    c.expect_char(':');
    return {std::move(amount), TokenId(c.word())};
}

Transaction parse_tx(LineCursor& c) {
    std::string head = c.word();
    if (head == "int") {
        c.end_of_line();
        return AccrueInterest{};
    }
    if (head == "px") {
        c.expect_char('(');
        auto [delta, token] = amount_colon_token(c);
        c.expect_char(')');
        c.end_of_line();
        return PriceUpdate{std::move(delta), std::move(token)};
    }
    AddressId actor(head);
    c.expect_char(':');
    std::string kind = c.word();
    c.expect_char('(');
    Transaction tx = AccrueInterest{};
    if (kind == "dep" || kind == "bor" || kind == "rep" || kind == "rdm") {
        auto [amount, token] = amount_colon_token(c);
        if (kind == "dep") tx = Deposit{actor, std::move(amount), std::move(token)};
        else if (kind == "bor") tx = Borrow{actor, std::move(amount), std::move(token)};
        else if (kind == "rep") tx = Repay{actor, std::move(amount), std::move(token)};
        else tx = Redeem{actor, std::move(amount), std::move(token)};
    } else if (kind == "liq") {
        AddressId borrower(c.word());
        c.expect_char(',');
        auto [amount, repaid] = amount_colon_token(c);
        c.expect_char(',');
        TokenId seized(c.word());
        tx = Liquidate{actor, std::move(borrower), std::move(amount), std::move(repaid),
                       std::move(seized)};
    } else if (kind == "swp") {
        auto [amount, from] = amount_colon_token(c);
        c.expect_char(',');
        TokenId to(c.word());
        tx = Swap{actor, std::move(amount), std::move(from), std::move(to)};
    } else {
        c.fail("transaction kind (dep|bor|rep|rdm|liq|swp)");
    }
    c.expect_char(')');
    c.end_of_line();
    return tx;
}

Expectation parse_expect(LineCursor& c) {
    c.skip_spaces();
    if (c.word() != "step") c.fail("'step'");
    c.skip_spaces();
    Rat step = c.rational("step number");
    if (step.get_den() != 1 || sgn(step) < 0) c.fail("step number");
    Expectation e{step.get_num().get_ui(), ExpectKind::Health, {}, {}, ExtRat(Rat(0))};
    c.skip_spaces();
    std::string kind = c.word();
    c.skip_spaces();
    auto value_or_inf = [&]() {
        if (c.peek() == 'i') {
            if (c.word() != "inf") c.fail("number or 'inf'");
            return ExtRat::infinity();
        }
        return ExtRat(c.rational("number"));
    };
    if (kind == "health" || kind == "networth") {
        e.kind = kind == "health" ? ExpectKind::Health : ExpectKind::NetWorth;
        e.addr = AddressId(c.word());
        c.skip_spaces();
        e.value = value_or_inf();
    } else if (kind == "wallet" || kind == "credit" || kind == "debt") {
        e.kind = kind == "wallet" ? ExpectKind::Wallet
               : kind == "credit" ? ExpectKind::Credit
                                  : ExpectKind::Debt;
        e.addr = AddressId(c.word());
        c.skip_spaces();
        auto [amount, token] = amount_colon_token(c);
        e.value = ExtRat(amount);
        e.token = std::move(token);
    } else if (kind == "reserves") {
        e.kind = ExpectKind::Reserves;
        auto [amount, token] = amount_colon_token(c);
        e.value = ExtRat(amount);
        e.token = std::move(token);
    } else if (kind == "xrate" || kind == "price") {
        e.kind = kind == "xrate" ? ExpectKind::XRate : ExpectKind::Price;
        e.token = TokenId(c.word());
        c.skip_spaces();
        e.value = ExtRat(c.rational("number"));
    } else {
        c.fail("expectation kind");
    }
    c.end_of_line();
    return e;
}

}  // namespace

std::string ParseError::str() const {
    return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": expected " +
           expected;
}

ProtocolParams Scenario::params() const {
    return ProtocolParams::make(liq_threshold, liq_reward,
                                InterestRateModel(LinearUtilizationRate{rate_alpha, rate_beta}));
}

Result<BlockchainState> Scenario::initial() const { return initial_state(wallets, prices); }

std::variant<Scenario, ParseError> parse_scenario(const std::string& text) {
    Scenario scenario;
    scenario.wallets.clear();
    scenario.prices.clear();
    std::istringstream in(text);
    std::string raw;
    size_t line_no = 0;
    try {
        while (std::getline(in, raw)) {
            ++line_no;
            if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
            while (!raw.empty() && (raw.back() == ' ' || raw.back() == '\t' || raw.back() == '\r'))
                raw.pop_back();
            LineCursor c{raw, line_no};
            c.skip_spaces();
            if (c.done()) continue;
            size_t head_start = c.pos;
            std::string head = c.word();
            if (head == "param") {
                c.skip_spaces();
                std::string name = c.word();
                c.skip_spaces();
                if (name == "Tliq") scenario.liq_threshold = c.rational();
                else if (name == "Rliq") scenario.liq_reward = c.rational();
                else if (name == "rate") {
                    if (c.word() != "linear") c.fail("'linear'");
                    c.skip_spaces();
                    scenario.rate_alpha = c.rational();
                    c.skip_spaces();
                    scenario.rate_beta = c.rational();
                } else {
                    c.fail("param name (Tliq|Rliq|rate)");
                }
                c.end_of_line();
            } else if (head == "wallet") {
                c.skip_spaces();
                AddressId addr(c.word());
                c.skip_spaces();
                auto [amount, token] = amount_colon_token(c);
                c.end_of_line();
                scenario.wallets.emplace_back(std::move(addr), std::move(amount), std::move(token));
            } else if (head == "price") {
                c.skip_spaces();
                TokenId token(c.word());
                c.skip_spaces();
                Rat value = c.rational();
                c.end_of_line();
                scenario.prices.emplace_back(std::move(token), std::move(value));
            } else if (head == "expect") {
                scenario.expects.push_back(parse_expect(c));
            } else {
                c.pos = head_start;  // transaction lines restart from the head
                scenario.trace.push_back(parse_tx(c));
            }
        }
    } catch (const LineCursor::Error& e) {
        return e.err;
    }
    return scenario;
}

std::variant<Scenario, ParseError> load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) return ParseError{0, 0, "readable file at " + path};
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str());
}

std::string render_scenario(const Scenario& scenario) {
    std::ostringstream out;
    out << "param Tliq " << to_canonical_string(scenario.liq_threshold) << "\n";
    out << "param Rliq " << to_canonical_string(scenario.liq_reward) << "\n";
    out << "param rate linear " << to_canonical_string(scenario.rate_alpha) << " "
        << to_canonical_string(scenario.rate_beta) << "\n";
    for (const auto& [token, value] : scenario.prices)
        out << "price " << token.name << " " << to_canonical_string(value) << "\n";
    for (const auto& [addr, amount, token] : scenario.wallets)
        out << "wallet " << addr.name << " " << to_canonical_string(amount) << ":" << token.name
            << "\n";
    for (const auto& tx : scenario.trace) out << tx_label(tx) << "\n";
    for (const auto& e : scenario.expects) {
        out << "expect step " << e.step << " ";
        auto value = [&] {
            return e.value.is_infinite() ? std::string("inf")
                                         : to_canonical_string(e.value.value());
        };
        switch (e.kind) {
            case ExpectKind::Health: out << "health " << e.addr->name << " " << value(); break;
            case ExpectKind::NetWorth: out << "networth " << e.addr->name << " " << value(); break;
            case ExpectKind::Wallet:
                out << "wallet " << e.addr->name << " " << value() << ":" << e.token->name;
                break;
            case ExpectKind::Credit:
                out << "credit " << e.addr->name << " " << value() << ":" << e.token->name;
                break;
            case ExpectKind::Debt:
                out << "debt " << e.addr->name << " " << value() << ":" << e.token->name;
                break;
            case ExpectKind::Reserves: out << "reserves " << value() << ":" << e.token->name; break;
            case ExpectKind::XRate: out << "xrate " << e.token->name << " " << value(); break;
            case ExpectKind::Price: out << "price " << e.token->name << " " << value(); break;
        }
        out << "\n";
    }
    return out.str();
}

std::string render_state_report(const ProtocolParams& params, const BlockchainState& state,
                                const ReportOptions& options) {
    auto show = [&](const Rat& q) {
        return options.exact ? to_fraction_string(q) : to_decimal_string(q, options.precision);
    };
    std::ostringstream out;
    out << "== state ==\n";
    for (const auto& user : addresses_of(state)) {
        out << user.name << ":";
        bool first = true;
        auto item = [&](const std::string& text) {
            out << (first ? " " : ", ") << text;
            first = false;
        };
        for (const auto& [key, amount] : state.wallet.balances)
            if (key.second == user) item(show(amount) + ":" + key.first.name);
        for (const auto& [key, amount] : state.pool.credits)
            if (key.second == user) item(show(amount) + ":ĉ" + key.first.name);
        for (const auto& [key, amount] : state.pool.debits)
            if (key.second == user) item(show(amount) + ":δ" + key.first.name);
        ExtRat health = health_factor(params, state, user);
        std::string h = health.is_infinite() ? "inf"
                        : options.exact      ? to_fraction_string(health.value())
                                             : health.str(options.precision);
        out << " | H(" << user.name << ")=" << h << ", NW(" << user.name
            << ")=" << show(net_worth(state, user)) << "\n";
    }
    if (!state.pool.reserves.empty()) {
        out << "pool:";
        bool first = true;
        for (const auto& [token, amount] : state.pool.reserves) {
            out << (first ? " " : ", ") << show(amount) << ":" << token.name;
            first = false;
        }
        out << "\n";
    }
    if (!state.prices.prices().empty()) {
        out << "prices:";
        bool first = true;
        for (const auto& [token, price] : state.prices.prices()) {
            out << (first ? " " : ", ") << token.name << "=" << show(price);
            first = false;
        }
        out << "\n";
        out << "X:";
        first = true;
        for (const auto& [token, _] : state.prices.prices()) {
            out << (first ? " " : ", ") << token.name << "="
                << (options.exact ? to_fraction_string(exchange_rate(state.pool, token))
                                  : to_decimal_string(exchange_rate(state.pool, token),
                                                      std::max(options.precision, 3)));
            first = false;
        }
        out << "\n";
    }
    return out.str();
}

Result<ScenarioRun> run_scenario(const Scenario& scenario) {
    auto initial = scenario.initial();
    if (!initial) return initial.error();
    ProtocolParams params = scenario.params();
    ScenarioRun run;
    run.states.push_back(initial.value());
    for (size_t i = 0; i < scenario.trace.size(); ++i) {
        auto next = apply(params, run.states.back(), scenario.trace[i]);
        if (!next) {
            StepError e = next.error();
            e.step = i;
            return e;
        }
        run.states.push_back(std::move(next).value());
    }
    for (const auto& e : scenario.expects) {
        if (e.step >= run.states.size()) {
            run.failures.push_back({e, "no such step"});
            continue;
        }
        const BlockchainState& state = run.states[e.step];
        ExtRat actual{Rat(0)};
        switch (e.kind) {
            case ExpectKind::Health: actual = health_factor(params, state, *e.addr); break;
            case ExpectKind::NetWorth: actual = ExtRat(net_worth(state, *e.addr)); break;
            case ExpectKind::Wallet:
                actual = ExtRat(lookup(state.wallet.balances, *e.token, *e.addr));
                break;
            case ExpectKind::Credit:
                actual = ExtRat(lookup(state.pool.credits, *e.token, *e.addr));
                break;
            case ExpectKind::Debt:
                actual = ExtRat(lookup(state.pool.debits, *e.token, *e.addr));
                break;
            case ExpectKind::Reserves:
                actual = ExtRat(lookup(state.pool.reserves, *e.token));
                break;
            case ExpectKind::XRate: actual = ExtRat(exchange_rate(state.pool, *e.token)); break;
            case ExpectKind::Price: actual = ExtRat(state.prices.price(*e.token)); break;
        }
        if (!(actual == e.value)) {
            std::string text = actual.is_infinite() ? "inf" : to_fraction_string(actual.value());
            run.failures.push_back({e, std::move(text)});
        }
    }
    return run;
}

}  // namespace lpsim
