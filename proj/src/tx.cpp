#include "lpsim/tx.hpp"

namespace lpsim {

TxKind kind_of(const Transaction& tx) {
    return std::visit(
        [](const auto& t) {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, Deposit>) return TxKind::Dep;
            else if constexpr (std::is_same_v<T, Borrow>) return TxKind::Bor;
            else if constexpr (std::is_same_v<T, Repay>) return TxKind::Rep;
            else if constexpr (std::is_same_v<T, Redeem>) return TxKind::Rdm;
            else if constexpr (std::is_same_v<T, Liquidate>) return TxKind::Liq;
            else if constexpr (std::is_same_v<T, AccrueInterest>) return TxKind::Int;
            else if constexpr (std::is_same_v<T, PriceUpdate>) return TxKind::Px;
            else return TxKind::Swp;
        },
        tx);
}

const char* kind_name(TxKind kind) {
    switch (kind) {
        case TxKind::Dep: return "dep";
        case TxKind::Bor: return "bor";
        case TxKind::Rep: return "rep";
        case TxKind::Rdm: return "rdm";
        case TxKind::Liq: return "liq";
        case TxKind::Int: return "int";
        case TxKind::Px: return "px";
        case TxKind::Swp: return "swp";
    }
    return "?";
}

std::optional<AddressId> actor_of(const Transaction& tx) {
    return std::visit(
        [](const auto& t) -> std::optional<AddressId> {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, Deposit> || std::is_same_v<T, Borrow> ||
                          std::is_same_v<T, Repay> || std::is_same_v<T, Redeem> ||
                          std::is_same_v<T, Swap>)
                return t.user;
            else if constexpr (std::is_same_v<T, Liquidate>)
                return t.liquidator;
            else
                return std::nullopt;
        },
        tx);
}

bool mentions(const Transaction& tx, const TokenId& token) {
    return std::visit(
        [&](const auto& t) {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, Deposit> || std::is_same_v<T, Borrow> ||
                          std::is_same_v<T, Repay> || std::is_same_v<T, Redeem> ||
                          std::is_same_v<T, PriceUpdate>)
                return t.token == token;
            else if constexpr (std::is_same_v<T, Liquidate>)
                return t.repaid_token == token || t.seized_token == token;
            else if constexpr (std::is_same_v<T, Swap>)
                return t.from_token == token || t.to_token == token;
            else
                return false;
        },
        tx);
}

std::string tx_label(const Transaction& tx) {
    return std::visit(
        [](const auto& t) -> std::string {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, Deposit>)
                return t.user.name + ":dep(" + to_canonical_string(t.amount) + ":" + t.token.name + ")";
            else if constexpr (std::is_same_v<T, Borrow>)
                return t.user.name + ":bor(" + to_canonical_string(t.amount) + ":" + t.token.name + ")";
            else if constexpr (std::is_same_v<T, Repay>)
                return t.user.name + ":rep(" + to_canonical_string(t.amount) + ":" + t.token.name + ")";
            else if constexpr (std::is_same_v<T, Redeem>)
                return t.user.name + ":rdm(" + to_canonical_string(t.credit_amount) + ":" + t.token.name + ")";
            else if constexpr (std::is_same_v<T, Liquidate>)
                return t.liquidator.name + ":liq(" + t.borrower.name + "," +
                       to_canonical_string(t.repaid_amount) + ":" + t.repaid_token.name + "," +
                       t.seized_token.name + ")";
            else if constexpr (std::is_same_v<T, AccrueInterest>)
                return "int";
            else if constexpr (std::is_same_v<T, PriceUpdate>) {
                std::string amount = to_canonical_string(t.delta);
                if (sgn(t.delta) > 0) amount.insert(0, "+");
                return "px(" + amount + ":" + t.token.name + ")";
            } else
                return t.user.name + ":swp(" + to_canonical_string(t.amount) + ":" +
                       t.from_token.name + "," + t.to_token.name + ")";
        },
        tx);
}

const char* step_error_name(StepErrorCode code) {
    switch (code) {
        case StepErrorCode::InsufficientWallet: return "InsufficientWallet";
        case StepErrorCode::InsufficientReserves: return "InsufficientReserves";
        case StepErrorCode::InsufficientDebt: return "InsufficientDebt";
        case StepErrorCode::InsufficientCredits: return "InsufficientCredits";
        case StepErrorCode::HealthTooLowAfter: return "HealthTooLowAfter";
        case StepErrorCode::BorrowerHealthy: return "BorrowerHealthy";
        case StepErrorCode::OverLiquidation: return "OverLiquidation";
        case StepErrorCode::NonPositivePrice: return "NonPositivePrice";
        case StepErrorCode::MissingPrice: return "MissingPrice";
        case StepErrorCode::MalformedTransaction: return "MalformedTransaction";
    }
    return "?";
}

std::string StepError::str() const {
    std::string out = step_error_name(code);
    if (step) out += " at step " + std::to_string(*step + 1);
    if (!detail.empty()) out += ": " + detail;
    return out;
}

}  // namespace lpsim
