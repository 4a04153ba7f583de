#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace corridors {

// Exact rational coordinate type. All geometric decisions in this project are
// made on these; doubles appear only in rendering output.
using Rational = mpq_class;

// mpq_class(n, d) does not canonicalize; route all num/den construction
// through here so equality stays structural.
inline Rational make_rational(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline Rational make_rational(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline int sign(const Rational& q) { return sgn(q); }

inline Rational rat_abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

inline const Rational& rat_min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline const Rational& rat_max(const Rational& a, const Rational& b) { return a < b ? b : a; }

// Canonical text form: "p" for integers, "p/q" otherwise (q > 0, reduced).
std::string format_rational(const Rational& q);

// Accepts "p", "p/q", and decimal strings like "-3.25" (converted exactly).
// Returns nullopt on malformed input.
std::optional<Rational> parse_rational(const std::string& text);

// floor(q) clamped into int64. Used for conservative integer filters.
std::int64_t floor_int64(const Rational& q);
// ceil(q) clamped into int64.
std::int64_t ceil_int64(const Rational& q);

struct RationalLess {
    bool operator()(const Rational& a, const Rational& b) const { return a < b; }
};

}  // namespace corridors
