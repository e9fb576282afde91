#pragma once

#include "lpsim/rational.hpp"

#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>

namespace lpsim {

struct TokenId {
    std::string name;
    explicit TokenId(std::string n) : name(std::move(n)) {
        if (name.empty()) throw std::invalid_argument("empty token id");
    }
    auto operator<=>(const TokenId&) const = default;
};

struct AddressId {
    std::string name;
    explicit AddressId(std::string n) : name(std::move(n)) {
        if (name.empty()) throw std::invalid_argument("empty address id");
    }
    auto operator<=>(const AddressId&) const = default;
};

inline std::ostream& operator<<(std::ostream& os, const TokenId& t) { return os << t.name; }
inline std::ostream& operator<<(std::ostream& os, const AddressId& a) { return os << a.name; }

// Finite-support maps: zero entries are erased on write, so "has no credits"
// and friends are structural checks.
using BalanceKey = std::pair<TokenId, AddressId>;
using BalanceMap = std::map<BalanceKey, Rat>;
using TokenMap = std::map<TokenId, Rat>;

Rat lookup(const BalanceMap& m, const TokenId& token, const AddressId& addr);
Rat lookup(const TokenMap& m, const TokenId& token);

// Writes value, erasing the entry when it is zero. Throws on negative balances.
void set_balance(BalanceMap& m, const TokenId& token, const AddressId& addr, const Rat& value);
void set_balance(TokenMap& m, const TokenId& token, const Rat& value);
void add_balance(BalanceMap& m, const TokenId& token, const AddressId& addr, const Rat& delta);
void add_balance(TokenMap& m, const TokenId& token, const Rat& delta);

struct WalletState {
    BalanceMap balances;  // (token, address) -> units
    bool operator==(const WalletState&) const = default;
};

struct LendingPoolState {
    TokenMap reserves;    // token -> units held by the pool
    BalanceMap credits;   // (token, address) -> credit-token units
    BalanceMap debits;    // (token, address) -> debit-token units
    bool operator==(const LendingPoolState&) const = default;
};

class PriceOracle {
  public:
    PriceOracle() = default;

    // Throws std::invalid_argument unless price > 0.
    void set_price(const TokenId& token, const Rat& price);
    bool has_price(const TokenId& token) const { return prices_.contains(token); }
    const Rat& price(const TokenId& token) const;  // throws MissingPriceError
    const TokenMap& prices() const { return prices_; }

    bool operator==(const PriceOracle&) const = default;

  private:
    TokenMap prices_;
};

struct MissingPriceError : std::runtime_error {
    explicit MissingPriceError(const TokenId& token)
        : std::runtime_error("no price for token " + token.name) {}
};

struct BlockchainState {
    WalletState wallet;
    LendingPoolState pool;
    PriceOracle prices;
    bool operator==(const BlockchainState&) const = default;
};

// Every address mentioned in the wallet or the pool.
std::set<AddressId> addresses_of(const BlockchainState& state);
// Every token mentioned in the wallet, the pool, or the price map.
std::set<TokenId> tokens_of(const BlockchainState& state);

// Interest rate model. The linear model is alpha * utilization + beta; the
// pluggable variant sees exactly (reserves, credit supply, debt supply) of the
// queried token, which hard-wires the locality constraint on rates.
struct LinearUtilizationRate {
    Rat alpha;  // >= 0
    Rat beta;   // > 0
    bool operator==(const LinearUtilizationRate&) const = default;
};

using CustomRateFn =
    std::function<Rat(const Rat& reserves, const Rat& credit_supply, const Rat& debt_supply)>;

class InterestRateModel {
  public:
    InterestRateModel() : impl_(LinearUtilizationRate{Rat(0), Rat(1, 100)}) {}
    InterestRateModel(LinearUtilizationRate linear);  // validates alpha/beta
    explicit InterestRateModel(CustomRateFn fn) : impl_(std::move(fn)) {}

    bool is_linear() const { return std::holds_alternative<LinearUtilizationRate>(impl_); }
    const LinearUtilizationRate& linear() const { return std::get<LinearUtilizationRate>(impl_); }

    // Throws std::domain_error if a custom model returns a non-positive rate.
    Rat rate(const Rat& reserves, const Rat& credit_supply, const Rat& debt_supply) const;

  private:
    std::variant<LinearUtilizationRate, CustomRateFn> impl_;
};

struct ProtocolParams {
    Rat liq_threshold;  // in (0, 1)
    Rat liq_reward;     // > 1
    InterestRateModel rate_model;

    static ProtocolParams make(Rat liq_threshold, Rat liq_reward, InterestRateModel model);
};

}  // namespace lpsim
