#include "csgbvi/Rational.h"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace csgbvi {

namespace {

[[noreturn]] void failParse(std::string const& text) {
    throw std::invalid_argument("not a rational number: '" + text + "'");
}

bool allDigits(std::string const& s) {
    if (s.empty()) {
        return false;
    }
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            return false;
        }
    }
    return true;
}

std::string trimmed(std::string const& s) {
    size_t begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) {
        return "";
    }
    size_t end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

Rational parseRational(std::string const& textIn) {
    std::string text = trimmed(textIn);
    if (text.empty()) {
        failParse(textIn);
    }

    bool negative = false;
    if (text[0] == '+' || text[0] == '-') {
        negative = text[0] == '-';
        text = text.substr(1);
    }
    if (text.empty()) {
        failParse(textIn);
    }

    size_t slash = text.find('/');
    if (slash != std::string::npos) {
        std::string num = text.substr(0, slash);
        std::string den = text.substr(slash + 1);
        if (!allDigits(num) || !allDigits(den)) {
            failParse(textIn);
        }
        mpz_class p(num), q(den);
        if (q == 0) {
            throw std::invalid_argument("zero denominator in '" + textIn + "'");
        }
        Rational r(p, q);
        r.canonicalize();
        return negative ? Rational(-r) : r;
    }

    // Decimal or scientific literal: mantissa [eE exponent].
    long exponent = 0;
    size_t e = text.find_first_of("eE");
    std::string mantissa = text;
    if (e != std::string::npos) {
        mantissa = text.substr(0, e);
        std::string expPart = text.substr(e + 1);
        if (expPart.empty()) {
            failParse(textIn);
        }
        bool expNeg = false;
        if (expPart[0] == '+' || expPart[0] == '-') {
            expNeg = expPart[0] == '-';
            expPart = expPart.substr(1);
        }
        if (!allDigits(expPart) || expPart.size() > 6) {
            failParse(textIn);
        }
        exponent = std::strtol(expPart.c_str(), nullptr, 10);
        if (expNeg) {
            exponent = -exponent;
        }
    }

    size_t dot = mantissa.find('.');
    std::string intPart = dot == std::string::npos ? mantissa : mantissa.substr(0, dot);
    std::string fracPart = dot == std::string::npos ? "" : mantissa.substr(dot + 1);
    if (intPart.empty() && fracPart.empty()) {
        failParse(textIn);
    }
    if ((!intPart.empty() && !allDigits(intPart)) || (!fracPart.empty() && !allDigits(fracPart))) {
        failParse(textIn);
    }

    mpz_class numerator(intPart.empty() ? "0" : intPart);
    for (char c : fracPart) {
        numerator = numerator * 10 + (c - '0');
    }
    long scale = exponent - static_cast<long>(fracPart.size());

    Rational r(numerator);
    if (scale > 0) {
        mpz_class pow10;
        mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(scale));
        r *= Rational(pow10);
    } else if (scale < 0) {
        mpz_class pow10;
        mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(-scale));
        r /= Rational(pow10);
    }
    r.canonicalize();
    return negative ? Rational(-r) : r;
}

std::string toFraction(Rational const& value) {
    return value.get_str();
}

std::string toDecimal(Rational const& value, int significantDigits) {
    if (significantDigits < 1) {
        throw std::invalid_argument("significantDigits must be positive");
    }
    mpz_class p = value.get_num();
    mpz_class q = value.get_den();
    bool negative = p < 0;
    if (negative) {
        p = -p;
    }
    if (p == 0) {
        return "0." + std::string(static_cast<size_t>(significantDigits), '0');
    }

    // Exponent of the leading significant digit: 10^e <= p/q < 10^(e+1).
    long e = 0;
    if (p >= q) {
        mpz_class t = p / q;
        e = static_cast<long>(t.get_str().size()) - 1;
    } else {
        mpz_class t = p;
        while (t < q) {
            t *= 10;
            e--;
        }
    }

    long fracDigits = significantDigits - 1 - e;
    if (fracDigits < 0) {
        fracDigits = 0;
    }

    mpz_class pow10;
    mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(fracDigits));
    // Round half-up: floor((2 * p * 10^f + q) / (2 q)).
    mpz_class rounded = (2 * p * pow10 + q) / (2 * q);

    std::string digits = rounded.get_str();
    std::string out;
    if (fracDigits == 0) {
        out = digits;
    } else if (static_cast<long>(digits.size()) <= fracDigits) {
        out = "0." + std::string(static_cast<size_t>(fracDigits) - digits.size(), '0') + digits;
    } else {
        out = digits.substr(0, digits.size() - fracDigits) + "." +
              digits.substr(digits.size() - fracDigits);
    }
    return negative ? "-" + out : out;
}

Rational snapToRational(double x, double tolerance) {
    if (!std::isfinite(x)) {
        throw std::invalid_argument("cannot snap a non-finite value");
    }
    bool negative = x < 0;
    double target = negative ? -x : x;

    // Continued-fraction convergents h/k of the target.
    double remainder = target;
    mpz_class h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    for (int iter = 0; iter < 64; iter++) {
        double floorPart = std::floor(remainder);
        if (floorPart > 1e18) {
            break;
        }
        mpz_class a(static_cast<unsigned long>(floorPart));
        mpz_class h2 = a * h1 + h0;
        mpz_class k2 = a * k1 + k0;
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        Rational approx(h1, k1);
        approx.canonicalize();
        if (std::abs(approx.get_d() - target) <= tolerance) {
            return negative ? Rational(-approx) : approx;
        }
        double fraction = remainder - floorPart;
        if (fraction < 1e-18) {
            break;
        }
        remainder = 1.0 / fraction;
    }
    Rational fallback(h1, k1 == 0 ? mpz_class(1) : k1);
    fallback.canonicalize();
    return negative ? Rational(-fallback) : fallback;
}

}  // namespace csgbvi
