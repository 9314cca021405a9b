#include "riskfrac/rational.hpp"

#include "riskfrac/errors.hpp"

#include <cctype>
#include <string>

namespace riskfrac {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

BigInt pow10(long exponent) {
    BigInt r = 1;
    for (long i = 0; i < exponent; ++i) r *= 10;
    return r;
}

// Signed decimal with optional fraction and exponent.
Rational parse_decimal(std::string_view s, std::string_view original) {
    bool negative = false;
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        std::string_view exp_part = s.substr(e + 1);
        s = s.substr(0, e);
        bool exp_negative = false;
        if (!exp_part.empty() && (exp_part.front() == '+' || exp_part.front() == '-')) {
            exp_negative = exp_part.front() == '-';
            exp_part.remove_prefix(1);
        }
        if (!all_digits(exp_part) || exp_part.size() > 4) {
            throw domain_error("malformed number: '" + std::string(original) + "'");
        }
        exponent = std::stol(std::string(exp_part));
        if (exp_negative) exponent = -exponent;
    }
    std::string digits;
    long scale = 0;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        std::string_view int_part = s.substr(0, dot);
        std::string_view frac_part = s.substr(dot + 1);
        if ((int_part.empty() && frac_part.empty()) ||
            (!int_part.empty() && !all_digits(int_part)) ||
            (!frac_part.empty() && !all_digits(frac_part))) {
            throw domain_error("malformed number: '" + std::string(original) + "'");
        }
        digits = std::string(int_part) + std::string(frac_part);
        scale = static_cast<long>(frac_part.size());
    } else {
        if (!all_digits(s)) throw domain_error("malformed number: '" + std::string(original) + "'");
        digits = std::string(s);
    }
    // cpp_int reads a leading 0 as an octal prefix
    const auto first = digits.find_first_not_of('0');
    BigInt numerator(first == std::string::npos ? std::string("0") : digits.substr(first));
    exponent -= scale;
    Rational value = exponent >= 0 ? Rational(numerator * pow10(exponent))
                                   : Rational(numerator, pow10(-exponent));
    return negative ? Rational(-value) : value;
}

} // namespace

Rational parse_rational(std::string_view text) {
    const std::string_view s = trim(text);
    if (s.empty()) throw domain_error("empty number");
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        Rational num = parse_decimal(trim(s.substr(0, slash)), text);
        Rational den = parse_decimal(trim(s.substr(slash + 1)), text);
        if (den == 0) throw domain_error("zero denominator in '" + std::string(text) + "'");
        return num / den;
    }
    return parse_decimal(s, text);
}

double to_double(const Rational& r) {
    return r.convert_to<double>();
}

std::string to_string(const Rational& r) {
    return r.str();
}

} // namespace riskfrac
