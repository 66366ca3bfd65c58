#include "rrc/rational.hpp"

#include "rrc/error.hpp"

#include <mpfr.h>

#include <cctype>
#include <vector>

namespace rrc {

namespace {

bool is_integer_literal(std::string_view s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    return true;
}

Integer parse_integer(std::string_view s) {
    std::string body(s);
    if (!body.empty() && body[0] == '+') body.erase(0, 1);
    return Integer(body, 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
    auto fail = [&] {
        return Error(Stage::validation, "BadRational", "cannot parse '" + std::string(text) + "'");
    };
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        auto num = text.substr(0, slash);
        auto den = text.substr(slash + 1);
        if (!is_integer_literal(num) || !is_integer_literal(den)) throw fail();
        Integer q = parse_integer(den);
        if (q == 0) throw fail();
        Rational r(parse_integer(num), q);
        r.canonicalize();
        return r;
    }
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        auto whole = text.substr(0, dot);
        auto frac = text.substr(dot + 1);
        bool negative = !whole.empty() && whole[0] == '-';
        std::string digits(whole);
        if (digits == "-" || digits == "+" || digits.empty()) digits += "0";
        if (!is_integer_literal(digits) || frac.empty()) throw fail();
        for (char c : frac) {
            if (!std::isdigit(static_cast<unsigned char>(c))) throw fail();
        }
        Integer scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
        Integer w = parse_integer(digits);
        Integer f(std::string(frac), 10);
        Integer num = abs(w) * scale + f;
        if (negative) num = -num;
        Rational r(num, scale);
        r.canonicalize();
        return r;
    }
    if (!is_integer_literal(text)) throw fail();
    return Rational(parse_integer(text));
}

std::string to_string(const Rational& value) {
    if (value.get_den() == 1) return value.get_num().get_str();
    return value.get_num().get_str() + "/" + value.get_den().get_str();
}

Integer floor(const Rational& value) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
    return q;
}

Integer ceil(const Rational& value) {
    Integer q;
    mpz_cdiv_q(q.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
    return q;
}

std::string to_decimal(const Rational& value, int digits) {
    if (value == 0) return "0";
    mpfr_t x;
    mpfr_init2(x, static_cast<mpfr_prec_t>(digits * 4 + 16));
    mpfr_set_q(x, value.get_mpq_t(), MPFR_RNDN);
    std::vector<char> buf(static_cast<std::size_t>(digits) + 64);
    mpfr_snprintf(buf.data(), buf.size(), "%.*Re", digits - 1, x);
    mpfr_clear(x);
    return std::string(buf.data());
}

}  // namespace rrc
