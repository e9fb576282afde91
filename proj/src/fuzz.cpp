#include "lpsim/fuzz.hpp"

#include "lpsim/metrics.hpp"

#include <stdexcept>

namespace lpsim {

namespace {

constexpr int kRetriesPerStep = 64;

// Prices are kept inside [1/1000, 1000] so health checks stay non-degenerate.
const long kPriceScale = 1000;
const long kPriceMaxUnits = 1000000;  // price = units / kPriceScale

Rat rat_of(long num, long den) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

struct Generator {
    const FuzzConfig& config;
    std::mt19937_64 rng;
    std::vector<AddressId> users;
    std::vector<TokenId> tokens;

    explicit Generator(const FuzzConfig& cfg) : config(cfg), rng(cfg.seed) {
        for (size_t i = 0; i < cfg.users; ++i) users.emplace_back("U" + std::to_string(i));
        for (size_t i = 0; i < cfg.tokens; ++i) tokens.emplace_back("T" + std::to_string(i));
    }

    long pick_long(long lo, long hi) {
        return lo + static_cast<long>(uniform_below(rng, static_cast<uint64_t>(hi - lo + 1)));
    }
    const AddressId& pick_user() { return users[uniform_below(rng, users.size())]; }
    const TokenId& pick_token() { return tokens[uniform_below(rng, tokens.size())]; }

    ProtocolParams draw_params() {
        // Threshold in [1/4, 9/10], reward in (1, 3/2], modest linear rates.
        Rat threshold = rat_of(pick_long(25, 90), 100);
        Rat reward = rat_of(100 + pick_long(1, 50), 100);
        Rat alpha = rat_of(pick_long(0, 30), 100);
        Rat beta = rat_of(pick_long(1, 25), 100);
        return ProtocolParams::make(threshold, reward,
                                    InterestRateModel(LinearUtilizationRate{alpha, beta}));
    }

    BlockchainState draw_initial() {
        std::vector<std::pair<TokenId, Rat>> prices;
        for (const auto& token : tokens)
            prices.emplace_back(token, rat_of(pick_long(1, kPriceMaxUnits), kPriceScale));
        std::vector<std::tuple<AddressId, Rat, TokenId>> balances;
        for (const auto& user : users)
            for (const auto& token : tokens) {
                long units = pick_long(config.initial_balance_min, config.initial_balance_max);
                if (units > 0) balances.emplace_back(user, Rat(units), token);
            }
        return initial_state(balances, prices).value();
    }

    TxKind pick_kind() {
        uint64_t total = 0;
        for (uint32_t w : config.weights.by_kind) total += w;
        uint64_t roll = uniform_below(rng, total);
        for (size_t i = 0; i < 8; ++i) {
            uint32_t w = config.weights.by_kind[i];
            if (roll < w) return static_cast<TxKind>(i);
            roll -= w;
        }
        return TxKind::Int;
    }

    // Feasible (user, token) pairs for a kind; drawing among them instead of
    // blind picks keeps rare kinds (repay, redeem, liquidate) productive.
    template <typename Pred>
    std::optional<std::pair<AddressId, TokenId>> pick_pair(Pred&& feasible) {
        std::vector<std::pair<AddressId, TokenId>> candidates;
        for (const auto& user : users)
            for (const auto& token : tokens)
                if (feasible(user, token)) candidates.emplace_back(user, token);
        if (candidates.empty()) return std::nullopt;
        return candidates[uniform_below(rng, candidates.size())];
    }

    std::optional<Transaction> draw_tx(const ProtocolParams& params, const BlockchainState& state,
                                       TxKind kind) {
        switch (kind) {
            case TxKind::Dep: {
                auto pair = pick_pair([&](const AddressId& user, const TokenId& token) {
                    return sgn(lookup(state.wallet.balances, token, user)) > 0;
                });
                if (!pair) return std::nullopt;
                Rat held = lookup(state.wallet.balances, pair->second, pair->first);
                return Deposit{pair->first, sample_amount(rng, held, config.max_denominator),
                               pair->second};
            }
            case TxKind::Bor: {
                auto pair = pick_pair([&](const AddressId& user, const TokenId& token) {
                    if (sgn(lookup(state.pool.reserves, token)) <= 0) return false;
                    PortfolioValues v = portfolio_values(state, user);
                    return v.credit_value * params.liq_threshold > v.debt_value;
                });
                if (!pair) return std::nullopt;
                PortfolioValues v = portfolio_values(state, pair->first);
                Rat cap = (v.credit_value * params.liq_threshold - v.debt_value) /
                          state.prices.price(pair->second);
                Rat reserves = lookup(state.pool.reserves, pair->second);
                if (reserves < cap) cap = reserves;
                return Borrow{pair->first, sample_amount(rng, cap, config.max_denominator),
                              pair->second};
            }
            case TxKind::Rep: {
                auto pair = pick_pair([&](const AddressId& user, const TokenId& token) {
                    return sgn(lookup(state.pool.debits, token, user)) > 0 &&
                           sgn(lookup(state.wallet.balances, token, user)) > 0;
                });
                if (!pair) return std::nullopt;
                Rat cap = lookup(state.pool.debits, pair->second, pair->first);
                Rat held = lookup(state.wallet.balances, pair->second, pair->first);
                if (held < cap) cap = held;
                return Repay{pair->first, sample_amount(rng, cap, config.max_denominator),
                             pair->second};
            }
            case TxKind::Rdm: {
                auto pair = pick_pair([&](const AddressId& user, const TokenId& token) {
                    return sgn(lookup(state.pool.credits, token, user)) > 0;
                });
                if (!pair) return std::nullopt;
                Rat cap = lookup(state.pool.credits, pair->second, pair->first);
                Rat x = exchange_rate(state.pool, pair->second);
                Rat by_reserves = lookup(state.pool.reserves, pair->second) / x;
                if (by_reserves < cap) cap = by_reserves;
                PortfolioValues v = portfolio_values(state, pair->first);
                if (sgn(v.debt_value) > 0) {
                    Rat spare = (v.credit_value - v.debt_value / params.liq_threshold) /
                                (x * state.prices.price(pair->second));
                    if (spare < cap) cap = spare;
                }
                if (sgn(cap) <= 0) return std::nullopt;
                return Redeem{pair->first, sample_amount(rng, cap, config.max_denominator),
                              pair->second};
            }
            case TxKind::Liq: {
                // (borrower, repaid token) with an unhealthy borrower in debt.
                std::vector<std::pair<AddressId, TokenId>> debtors;
                for (const auto& user : users) {
                    if (health_factor(params, state, user) >= Rat(1)) continue;
                    for (const auto& token : tokens)
                        if (sgn(lookup(state.pool.debits, token, user)) > 0)
                            debtors.emplace_back(user, token);
                }
                if (debtors.empty()) return std::nullopt;
                auto [borrower, repaid] = debtors[uniform_below(rng, debtors.size())];
                const AddressId& liquidator = pick_user();
                const TokenId& seized = pick_token();
                if (liquidator == borrower) return std::nullopt;
                Rat cap = lookup(state.pool.debits, repaid, borrower);
                Rat held = lookup(state.wallet.balances, repaid, liquidator);
                if (held < cap) cap = held;
                if (sgn(cap) <= 0) return std::nullopt;
                const Rat& p0 = state.prices.price(repaid);
                // Seized credits must fit the borrower's balance.
                Rat by_credits = lookup(state.pool.credits, seized, borrower) *
                                 exchange_rate(state.pool, seized) * state.prices.price(seized) /
                                 (p0 * params.liq_reward);
                if (by_credits < cap) cap = by_credits;
                // Post-state health must not exceed 1.
                Rat spread = Rat(1) - params.liq_reward * params.liq_threshold;
                if (sgn(spread) > 0) {
                    PortfolioValues v = portfolio_values(state, borrower);
                    Rat by_health =
                        (v.debt_value - v.credit_value * params.liq_threshold) / (spread * p0);
                    if (by_health < cap) cap = by_health;
                }
                if (sgn(cap) <= 0) return std::nullopt;
                return Liquidate{liquidator, borrower,
                                 sample_amount(rng, cap, config.max_denominator), repaid, seized};
            }
            case TxKind::Int:
                return AccrueInterest{};
            case TxKind::Px: {
                const TokenId& token = pick_token();
                Rat target = rat_of(pick_long(1, kPriceMaxUnits), kPriceScale);
                Rat delta = target - state.prices.price(token);
                if (sgn(delta) == 0) return std::nullopt;
                return PriceUpdate{delta, token};
            }
            case TxKind::Swp: {
                auto pair = pick_pair([&](const AddressId& user, const TokenId& token) {
                    return sgn(lookup(state.wallet.balances, token, user)) > 0;
                });
                if (!pair || tokens.size() < 2) return std::nullopt;
                const TokenId& to = pick_token();
                if (to == pair->second) return std::nullopt;
                Rat held = lookup(state.wallet.balances, pair->second, pair->first);
                return Swap{pair->first, sample_amount(rng, held, config.max_denominator),
                            pair->second, to};
            }
        }
        return std::nullopt;
    }
};

}  // namespace

void FuzzConfig::validate() const {
    if (users == 0 || tokens == 0) throw std::invalid_argument("need at least one user and token");
    if (initial_balance_min < 0 || initial_balance_max < initial_balance_min)
        throw std::invalid_argument("bad initial balance range");
    if (max_denominator < 1) throw std::invalid_argument("max denominator must be positive");
    uint64_t total = 0;
    for (uint32_t w : weights.by_kind) total += w;
    if (total == 0) throw std::invalid_argument("at least one transaction weight must be positive");
}

uint64_t uniform_below(std::mt19937_64& rng, uint64_t bound) {
    if (bound == 0) return 0;
    uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    uint64_t draw;
    do {
        draw = rng();
    } while (draw >= limit);
    return draw % bound;
}

Rat sample_amount(std::mt19937_64& rng, const Rat& hi, long max_denominator) {
    // k / max_denominator with k in [1, floor(hi * max_denominator)] keeps the
    // denominator bounded regardless of hi's own denominator.
    Rat scaled = hi * Rat(max_denominator);
    Int cap;
    mpz_fdiv_q(cap.get_mpz_t(), scaled.get_num().get_mpz_t(), scaled.get_den().get_mpz_t());
    if (cap >= 1) {
        uint64_t top = cap.fits_ulong_p() ? cap.get_ui() : UINT64_MAX;
        Rat amount(Int(static_cast<unsigned long>(1 + uniform_below(rng, top))),
                   Int(max_denominator));
        amount.canonicalize();
        return amount;
    }
    // hi below one grid cell: take a coarse fraction of it.
    Rat q(static_cast<long>(1 + uniform_below(rng, 16)), 16);
    q.canonicalize();
    return hi * q;
}

FuzzResult generate_trace(const FuzzConfig& config) {
    config.validate();
    Generator gen(config);
    ProtocolParams params = gen.draw_params();  // always consume the same draws
    if (config.params_override) params = *config.params_override;
    FuzzResult out{std::move(params), gen.draw_initial(), {}};
    BlockchainState state = out.initial;
    size_t accruals = 0;
    for (size_t step = 0; step < config.steps; ++step) {
        Transaction chosen = AccrueInterest{};
        bool found = false;
        for (int attempt = 0; attempt < kRetriesPerStep && !found; ++attempt) {
            TxKind kind = gen.pick_kind();
            if (kind == TxKind::Int && accruals >= config.max_accruals) continue;
            auto candidate = gen.draw_tx(out.params, state, kind);
            if (!candidate) continue;
            if (is_enabled(out.params, state, *candidate)) {
                chosen = *candidate;
                found = true;
            }
        }
        if (kind_of(chosen) == TxKind::Int) ++accruals;
        auto next = apply(out.params, state, chosen);
        state = std::move(next).value();  // accrual fallback is always enabled
        out.trace.push_back(std::move(chosen));
    }
    return out;
}

}  // namespace lpsim
