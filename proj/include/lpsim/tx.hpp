#pragma once

#include "lpsim/state.hpp"

#include <optional>
#include <variant>
#include <vector>

namespace lpsim {

// The eight transaction kinds. Amounts are strictly positive; a redeem is
// denominated in credit-token units, everything else in base-token units.
struct Deposit {
    AddressId user;
    Rat amount;
    TokenId token;
    bool operator==(const Deposit&) const = default;
};

struct Borrow {
    AddressId user;
    Rat amount;
    TokenId token;
    bool operator==(const Borrow&) const = default;
};

struct Repay {
    AddressId user;
    Rat amount;
    TokenId token;
    bool operator==(const Repay&) const = default;
};

struct Redeem {
    AddressId user;
    Rat credit_amount;
    TokenId token;
    bool operator==(const Redeem&) const = default;
};

struct Liquidate {
    AddressId liquidator;
    AddressId borrower;
    Rat repaid_amount;       // units of repaid_token taken from the liquidator
    TokenId repaid_token;
    TokenId seized_token;    // credit token seized from the borrower
    bool operator==(const Liquidate&) const = default;
};

struct AccrueInterest {
    bool operator==(const AccrueInterest&) const = default;
};

struct PriceUpdate {
    Rat delta;  // signed, nonzero
    TokenId token;
    bool operator==(const PriceUpdate&) const = default;
};

struct Swap {
    AddressId user;
    Rat amount;      // units of from_token sold
    TokenId from_token;
    TokenId to_token;
    bool operator==(const Swap&) const = default;
};

using Transaction =
    std::variant<Deposit, Borrow, Repay, Redeem, Liquidate, AccrueInterest, PriceUpdate, Swap>;

enum class TxKind { Dep, Bor, Rep, Rdm, Liq, Int, Px, Swp };

TxKind kind_of(const Transaction& tx);
const char* kind_name(TxKind kind);

// The user signing the transaction; int and px carry no address.
std::optional<AddressId> actor_of(const Transaction& tx);

// Whether the transaction mentions `token` (either side for swaps).
bool mentions(const Transaction& tx, const TokenId& token);

// Label in the trace syntax, e.g. "A:liq(B,11:T0,T1)" or "px(+0.3:T0)".
std::string tx_label(const Transaction& tx);

using Trace = std::vector<Transaction>;

enum class StepErrorCode {
    InsufficientWallet,
    InsufficientReserves,
    InsufficientDebt,
    InsufficientCredits,
    HealthTooLowAfter,
    BorrowerHealthy,
    OverLiquidation,
    NonPositivePrice,
    MissingPrice,
    MalformedTransaction,
};

const char* step_error_name(StepErrorCode code);

struct StepError {
    StepErrorCode code;
    std::string detail;
    std::optional<size_t> step;  // index in the trace, when applicable

    std::string str() const;
};

}  // namespace lpsim
