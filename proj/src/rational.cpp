#include "corridors/rational.hpp"

#include <cctype>
#include <limits>

namespace corridors {

std::string format_rational(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::optional<Rational> parse_rational(const std::string& text) {
    if (text.empty()) return std::nullopt;
    auto is_int = [](const std::string& s) {
        if (s.empty()) return false;
        std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        if (i >= s.size()) return false;
        for (; i < s.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
        return true;
    };

    auto slash = text.find('/');
    if (slash != std::string::npos) {
        std::string num = text.substr(0, slash), den = text.substr(slash + 1);
        if (!is_int(num) || !is_int(den)) return std::nullopt;
        mpz_class n(num), d(den);
        if (d == 0) return std::nullopt;
        return make_rational(n, d);
    }

    auto dot = text.find('.');
    if (dot != std::string::npos) {
        std::string whole = text.substr(0, dot), frac = text.substr(dot + 1);
        if (whole.empty() || whole == "-" || whole == "+") whole += "0";
        if (!is_int(whole) || frac.empty()) return std::nullopt;
        for (char ch : frac)
            if (!std::isdigit(static_cast<unsigned char>(ch))) return std::nullopt;
        mpz_class scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        mpz_class w(whole), f(frac);
        bool neg = !whole.empty() && whole[0] == '-';
        mpz_class num = w * scale + (neg ? -f : f);
        return make_rational(num, scale);
    }

    if (!is_int(text)) return std::nullopt;
    return Rational(mpz_class(text));
}

std::int64_t floor_int64(const Rational& q) {
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    if (!f.fits_slong_p()) return f < 0 ? std::numeric_limits<std::int64_t>::min() / 4
                                        : std::numeric_limits<std::int64_t>::max() / 4;
    return f.get_si();
}

std::int64_t ceil_int64(const Rational& q) {
    mpz_class c;
    mpz_cdiv_q(c.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    if (!c.fits_slong_p()) return c < 0 ? std::numeric_limits<std::int64_t>::min() / 4
                                        : std::numeric_limits<std::int64_t>::max() / 4;
    return c.get_si();
}

}  // namespace corridors
