#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace coop {

// Expression templates off: values are evaluated eagerly, which keeps std::max,
// auto and lambdas well behaved.
using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                             boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::rational_adaptor<
                                                   boost::multiprecision::cpp_int_backend<>>,
                                               boost::multiprecision::et_off>;

inline BigInt num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt den(const Rational& r) { return boost::multiprecision::denominator(r); }

inline bool is_integer(const Rational& r) { return den(r) == 1; }

inline Rational make_rational(long long n, long long d = 1) {
    if (d == 0) throw std::domain_error("zero denominator");
    return Rational(BigInt(n), BigInt(d));
}

inline BigInt floor_of(const Rational& r) {
    BigInt q = num(r) / den(r);  // truncates toward zero
    if (num(r) < 0 && q * den(r) != num(r)) q -= 1;
    return q;
}

inline BigInt ceil_of(const Rational& r) {
    BigInt f = floor_of(r);
    return f * den(r) == num(r) ? f : f + 1;
}

inline Rational rpow(const Rational& base, unsigned e) {
    Rational acc = 1;
    Rational b = base;
    while (e) {
        if (e & 1U) acc *= b;
        b *= b;
        e >>= 1U;
    }
    return acc;
}

inline BigInt binom(long long n, long long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt r = 1;
    for (long long i = 1; i <= k; ++i) {
        r *= (n - k + i);
        r /= i;
    }
    return r;
}

inline long long to_ll(const BigInt& v) { return v.convert_to<long long>(); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// "p/q", or just "p" when the value is an integer.
inline std::string to_string(const Rational& r) {
    if (is_integer(r)) return num(r).str();
    return num(r).str() + "/" + den(r).str();
}

// Accepts "7", "-3/4" and plain decimals such as "0.125".
inline Rational parse_rational(const std::string& text) {
    auto bad = [&] { return std::invalid_argument("not a rational number: '" + text + "'"); };
    if (text.empty()) throw bad();
    auto parse_int = [&](const std::string& s) {
        std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        if (i == s.size()) throw bad();
        for (std::size_t j = i; j < s.size(); ++j)
            if (s[j] < '0' || s[j] > '9') throw bad();
        return BigInt(s[0] == '+' ? s.substr(1) : s);
    };
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        BigInt n = parse_int(text.substr(0, slash));
        BigInt d = parse_int(text.substr(slash + 1));
        if (d == 0) throw bad();
        return Rational(n, d);
    }
    auto dot = text.find('.');
    if (dot == std::string::npos) return Rational(parse_int(text));
    std::string whole = text.substr(0, dot);
    std::string frac = text.substr(dot + 1);
    bool neg = !whole.empty() && whole[0] == '-';
    if (whole.empty() || whole == "-" || whole == "+") whole += "0";
    if (frac.empty()) throw bad();
    BigInt w = parse_int(whole);
    BigInt f = parse_int(frac);
    BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(frac.size()));
    Rational mag = Rational(abs(w)) + Rational(f, scale);
    return neg ? Rational(-mag) : mag;
}

}  // namespace coop
