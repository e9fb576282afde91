#pragma once

#include <gmpxx.h>

#include <compare>
#include <optional>
#include <string>

namespace lpsim {

// All balances, prices and gains are exact rationals. GMP keeps mpq values
// canonical under arithmetic, so equality is structural.
using Int = mpz_class;
using Rat = mpq_class;

enum class RoundMode {
    Trunc,    // toward zero; matches the trace-listing annotations we reproduce
    HalfEven,
};

// Accepts "42", "-3", "17.6", "-0.25", "10/9". Returns nullopt on anything else.
std::optional<Rat> parse_rational(const std::string& text);

// Fixed-point rendering at `precision` decimals. By default trailing zeros
// are stripped ("17.60" -> "17.6", "36.00" -> "36"); ratio-like quantities
// (health factors) pass strip = false to keep the full width ("0.80").
std::string to_decimal_string(const Rat& q, int precision, RoundMode mode = RoundMode::Trunc,
                              bool strip = true);

// Always "num/den", including "/1", so machine readers get a stable shape.
std::string to_fraction_string(const Rat& q);

// Shortest exact form: integer, finite decimal, or "num/den".
std::string to_canonical_string(const Rat& q);

// Rounded value as a rational: round(q * 10^precision) / 10^precision.
Rat round_to_precision(const Rat& q, int precision, RoundMode mode = RoundMode::Trunc);

// A rational extended with +infinity, as needed by collateralization and the
// health factor of debt-free users. Arithmetic is deliberately not provided.
class ExtRat {
  public:
    ExtRat() : finite_(0) {}
    ExtRat(Rat value) : finite_(std::move(value)) {}
    static ExtRat infinity() {
        ExtRat e;
        e.infinite_ = true;
        return e;
    }

    bool is_infinite() const { return infinite_; }
    // Precondition: !is_infinite().
    const Rat& value() const { return finite_; }

    friend bool operator==(const ExtRat& a, const ExtRat& b) {
        if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
        return a.finite_ == b.finite_;
    }
    friend std::strong_ordering operator<=>(const ExtRat& a, const ExtRat& b) {
        if (a.infinite_ && b.infinite_) return std::strong_ordering::equal;
        if (a.infinite_) return std::strong_ordering::greater;
        if (b.infinite_) return std::strong_ordering::less;
        int c = cmp(a.finite_, b.finite_);
        return c < 0 ? std::strong_ordering::less
             : c > 0 ? std::strong_ordering::greater
                     : std::strong_ordering::equal;
    }
    friend bool operator==(const ExtRat& a, const Rat& b) { return !a.infinite_ && a.finite_ == b; }
    friend std::strong_ordering operator<=>(const ExtRat& a, const Rat& b) {
        return a <=> ExtRat(b);
    }

    std::string str(int precision = 2, RoundMode mode = RoundMode::Trunc) const {
        return infinite_ ? "inf" : to_decimal_string(finite_, precision, mode, /*strip=*/false);
    }

  private:
    Rat finite_;
    bool infinite_ = false;
};

}  // namespace lpsim
