#include "lpsim/rational.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>

namespace lpsim {

namespace {

bool is_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

Int pow10(int n) {
    Int p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(n));
    return p;
}

}  // namespace

std::optional<Rat> parse_rational(const std::string& text) {
    std::string s = text;
    bool negative = false;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
        negative = s[0] == '-';
        s.erase(0, 1);
    }
    if (s.empty()) return std::nullopt;

    Rat q;
    if (auto slash = s.find('/'); slash != std::string::npos) {
        std::string num = s.substr(0, slash);
        std::string den = s.substr(slash + 1);
        if (!is_digits(num) || !is_digits(den)) return std::nullopt;
        Int d(den, 10);
        if (d == 0) return std::nullopt;
        q = Rat(Int(num, 10), d);
        q.canonicalize();
    } else if (auto dot = s.find('.'); dot != std::string::npos) {
        std::string whole = s.substr(0, dot);
        std::string frac = s.substr(dot + 1);
        if (whole.empty()) whole = "0";
        if (!is_digits(whole) || !is_digits(frac)) return std::nullopt;
        Int scale = pow10(static_cast<int>(frac.size()));
        q = Rat(Int(whole, 10) * scale + Int(frac, 10), scale);
        q.canonicalize();
    } else {
        if (!is_digits(s)) return std::nullopt;
        q = Rat(Int(s, 10));
    }
    if (negative) q = -q;
    return q;
}

Rat round_to_precision(const Rat& q, int precision, RoundMode mode) {
    Int scale = pow10(precision);
    Rat scaled = q * Rat(scale);
    Int n = scaled.get_num();
    Int d = scaled.get_den();
    Int t;
    if (mode == RoundMode::Trunc) {
        mpz_tdiv_q(t.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    } else {
        // Round half to even on |n|/d, then restore the sign.
        Int an = abs(n);
        Int quot, rem;
        mpz_fdiv_qr(quot.get_mpz_t(), rem.get_mpz_t(), an.get_mpz_t(), d.get_mpz_t());
        Int twice = rem * 2;
        if (twice > d || (twice == d && mpz_odd_p(quot.get_mpz_t()))) quot += 1;
        t = sgn(n) < 0 ? Int(-quot) : quot;
    }
    Rat r(t, scale);
    r.canonicalize();
    return r;
}

std::string to_decimal_string(const Rat& q, int precision, RoundMode mode, bool strip) {
    Int scale = pow10(precision);
    Rat rounded = round_to_precision(q, precision, mode);
    Int units = rounded.get_num() * (scale / rounded.get_den());  // exact: den | scale
    bool negative = sgn(units) < 0;
    Int au = abs(units);
    Int whole = au / scale;
    Int frac = au % scale;
    std::string out = whole.get_str();
    if (frac != 0 || (!strip && precision > 0)) {
        std::string digits = frac.get_str();
        digits.insert(0, static_cast<size_t>(precision) - digits.size(), '0');
        if (strip)
            while (!digits.empty() && digits.back() == '0') digits.pop_back();
        out += "." + digits;
    }
    if (negative && (whole != 0 || frac != 0)) out.insert(0, "-");
    return out;
}

std::string to_fraction_string(const Rat& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string to_canonical_string(const Rat& q) {
    const Int den = q.get_den();
    if (den == 1) return q.get_num().get_str();
    // Finite decimal iff den = 2^a * 5^b; max(a, b) digits make it exact.
    Int d = den;
    int twos = 0, fives = 0;
    while (mpz_divisible_ui_p(d.get_mpz_t(), 2)) {
        d /= 2;
        ++twos;
    }
    while (mpz_divisible_ui_p(d.get_mpz_t(), 5)) {
        d /= 5;
        ++fives;
    }
    if (d == 1) return to_decimal_string(q, std::max(twos, fives), RoundMode::Trunc);
    return to_fraction_string(q);
}

}  // namespace lpsim
