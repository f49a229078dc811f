// rational.hpp: Small exact rational type for the gate congruence arithmetic.

#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace twomode {

class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t num, std::int64_t den = 1) : num_(num), den_(den) { normalize(); }  // NOLINT

    // Accepts "p", "p/q" or a finite decimal such as "1.25".
    static Rational parse(const std::string& text) {
        const auto slash = text.find('/');
        try {
            if (slash != std::string::npos) {
                return Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
            }
            const auto dot = text.find('.');
            if (dot == std::string::npos) {
                std::size_t used = 0;
                const auto v = std::stoll(text, &used);
                if (used != text.size()) throw std::invalid_argument("trailing characters");
                return Rational(v);
            }
            const std::string frac = text.substr(dot + 1);
            if (frac.size() > 15) throw std::invalid_argument("too many decimals");
            std::int64_t den = 1;
            for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
            const std::string digits = text.substr(0, dot) + frac;
            std::size_t used = 0;
            const auto v = std::stoll(digits, &used);
            if (used != digits.size()) throw std::invalid_argument("trailing characters");
            return Rational(v, den);
        } catch (const std::domain_error&) {
            throw;
        } catch (const std::logic_error&) {
            throw std::invalid_argument("Rational: cannot parse '" + text + "'");
        }
    }

    std::int64_t num() const noexcept { return num_; }
    std::int64_t den() const noexcept { return den_; }
    double value() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
    bool is_integer() const noexcept { return den_ == 1; }

    std::string str() const { return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return from128(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                       static_cast<__int128>(a.den_) * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) { return a + Rational(-b.num_, b.den_); }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return from128(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::domain_error("Rational: division by zero");
        return from128(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
    }
    friend bool operator==(const Rational& a, const Rational& b) noexcept { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend bool operator<(const Rational& a, const Rational& b) noexcept {
        return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
    }
    friend bool operator>(const Rational& a, const Rational& b) noexcept { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) noexcept { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) noexcept { return !(a < b); }

private:
    static Rational from128(__int128 num, __int128 den) {
        if (den == 0) throw std::domain_error("Rational: zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        __int128 a = num < 0 ? -num : num;
        __int128 b = den;
        while (b != 0) {
            const __int128 r = a % b;
            a = b;
            b = r;
        }
        if (a > 1) {
            num /= a;
            den /= a;
        }
        constexpr __int128 lim = INT64_MAX;
        if (num > lim || num < -lim || den > lim) throw std::overflow_error("Rational: 64-bit overflow");
        Rational r;
        r.num_ = static_cast<std::int64_t>(num);
        r.den_ = static_cast<std::int64_t>(den);
        return r;
    }

    void normalize() {
        if (den_ == 0) throw std::domain_error("Rational: zero denominator");
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        const std::int64_t g = std::gcd(num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    std::int64_t num_{0};
    std::int64_t den_{1};
};

}  // namespace twomode
