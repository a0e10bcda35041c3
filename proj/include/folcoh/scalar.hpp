#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace folcoh {

/// Error classes used throughout the library.
///
/// parse_error       -- malformed text input (files, expressions, CLI specs)
/// validation_error  -- input that parses but violates a documented precondition
///                      or model axiom
/// consistency_error -- an internal cross-check failed; indicates a bug or an
///                      invalid model that slipped past validation
struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct validation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct consistency_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Exact rational scalar backed by GMP. Values are always kept in canonical
/// reduced form (gcd(num, den) = 1, den > 0), so equality is plain comparison.
/// Text format: "p" or "p/q" with q > 1.
class Rational {
public:
    Rational() : v_(0) {}
    Rational(long n) : v_(n) {}
    Rational(long n, long d) {
        if (d == 0) throw validation_error("rational with zero denominator");
        v_ = mpq_class(n, d);
        v_.canonicalize();
    }
    explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }

    static Rational zero() { return Rational(0); }
    static Rational one() { return Rational(1); }

    /// Parse "p" or "p/q" (optional leading '-'). Returns nullopt on bad input.
    static std::optional<Rational> parse(std::string_view s) {
        if (s.empty()) return std::nullopt;
        std::size_t i = 0;
        if (s[i] == '-' || s[i] == '+') ++i;
        std::size_t digits = 0;
        while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i, ++digits;
        if (digits == 0) return std::nullopt;
        if (i < s.size()) {
            if (s[i] != '/') return std::nullopt;
            ++i;
            std::size_t den_digits = 0;
            while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i, ++den_digits;
            if (den_digits == 0 || i != s.size()) return std::nullopt;
        }
        mpq_class q;
        if (q.set_str(std::string(s), 10) != 0) return std::nullopt;
        if (q.get_den() == 0) return std::nullopt;
        q.canonicalize();
        return Rational(q, already_canonical_tag{});
    }

    const mpq_class& raw() const { return v_; }
    mpz_class num() const { return v_.get_num(); }
    mpz_class den() const { return v_.get_den(); }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_integer() const { return v_.get_den() == 1; }
    int sign() const { return sgn(v_); }

    Rational operator-() const { return Rational(mpq_class(-v_), already_canonical_tag{}); }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw validation_error("rational division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

    Rational abs() const { return sign() < 0 ? -*this : *this; }

    /// Exact square root if this is a perfect square of a rational, else nullopt.
    std::optional<Rational> sqrt_if_square() const {
        if (sign() < 0) return std::nullopt;
        mpz_class n = num(), d = den();
        if (mpz_perfect_square_p(n.get_mpz_t()) == 0) return std::nullopt;
        if (mpz_perfect_square_p(d.get_mpz_t()) == 0) return std::nullopt;
        mpz_class rn, rd;
        mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
        mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
        mpq_class q(rn, rd);
        q.canonicalize();
        return Rational(q, already_canonical_tag{});
    }

    std::string str() const { return v_.get_str(); }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
        return os << r.v_.get_str();
    }

private:
    struct already_canonical_tag {};
    Rational(mpq_class q, already_canonical_tag) : v_(std::move(q)) {}
    mpq_class v_;
};

/// Element of Q(i). Used only where the star involution introduces powers
/// of i; real models never touch this type.
/// Text format: "p/q", "r/s*i" or "p/q+r/s*i" (with '-' for negative parts).
struct GaussianRational {
    Rational re, im;

    GaussianRational() = default;
    GaussianRational(Rational r) : re(std::move(r)) {}
    GaussianRational(long n) : re(n) {}
    GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    static GaussianRational i_unit() { return GaussianRational(Rational(0), Rational(1)); }

    /// i^k for any integer exponent.
    static GaussianRational i_power(long k) {
        switch (((k % 4) + 4) % 4) {
            case 0: return GaussianRational(Rational(1));
            case 1: return GaussianRational(Rational(0), Rational(1));
            case 2: return GaussianRational(Rational(-1));
            default: return GaussianRational(Rational(0), Rational(-1));
        }
    }

    bool is_zero() const { return re.is_zero() && im.is_zero(); }
    bool is_real() const { return im.is_zero(); }
    GaussianRational conj() const { return {re, -im}; }

    GaussianRational operator-() const { return {-re, -im}; }
    GaussianRational& operator+=(const GaussianRational& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    GaussianRational& operator-=(const GaussianRational& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    GaussianRational& operator*=(const GaussianRational& o) {
        Rational r = re * o.re - im * o.im;
        Rational i = re * o.im + im * o.re;
        re = r;
        im = i;
        return *this;
    }
    GaussianRational& operator/=(const GaussianRational& o) {
        Rational n = o.re * o.re + o.im * o.im;
        if (n.is_zero()) throw validation_error("gaussian rational division by zero");
        Rational r = (re * o.re + im * o.im) / n;
        Rational i = (im * o.re - re * o.im) / n;
        re = r;
        im = i;
        return *this;
    }

    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
    friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
    friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

    static std::optional<GaussianRational> parse(std::string_view s) {
        if (s.empty()) return std::nullopt;
        // split "a+b*i" / "a-b*i" at the sign that starts the imaginary term
        if (s.size() >= 2 && s.substr(s.size() - 2) == "*i") {
            std::string_view body = s.substr(0, s.size() - 2);
            // find a '+'/'-' separator after position 0 (no sign appears
            // inside a canonical "p/q" besides a leading one)
            std::size_t split = std::string_view::npos;
            for (std::size_t k = 1; k < body.size(); ++k)
                if (body[k] == '+' || body[k] == '-') split = k;
            if (split == std::string_view::npos) {
                auto i = Rational::parse(body);
                if (!i) return std::nullopt;
                return GaussianRational(Rational(0), *i);
            }
            auto r = Rational::parse(body.substr(0, split));
            std::string_view imag = body.substr(split);  // keeps the sign
            std::optional<Rational> i;
            if (imag.size() >= 1 && imag[0] == '+')
                i = Rational::parse(imag.substr(1));
            else
                i = Rational::parse(imag);
            if (!r || !i) return std::nullopt;
            return GaussianRational(*r, *i);
        }
        auto r = Rational::parse(s);
        if (!r) return std::nullopt;
        return GaussianRational(*r);
    }

    std::string str() const {
        if (im.is_zero()) return re.str();
        std::string imag = im.abs().str() + "*i";
        if (re.is_zero()) return (im.sign() < 0 ? "-" : "") + imag;
        return re.str() + (im.sign() < 0 ? "-" : "+") + imag;
    }

    friend std::ostream& operator<<(std::ostream& os, const GaussianRational& z) {
        return os << z.str();
    }
};

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
    static constexpr bool is_complex = false;
    static Rational conj(const Rational& x) { return x; }
    static Rational real(const Rational& x) { return x; }
    static bool is_real(const Rational&) { return true; }
    static Rational from_rational(const Rational& x) { return x; }
    static std::string str(const Rational& x) { return x.str(); }
};

template <>
struct scalar_traits<GaussianRational> {
    static constexpr bool is_complex = true;
    static GaussianRational conj(const GaussianRational& x) { return x.conj(); }
    static Rational real(const GaussianRational& x) { return x.re; }
    static bool is_real(const GaussianRational& x) { return x.is_real(); }
    static GaussianRational from_rational(const Rational& x) { return GaussianRational(x); }
    static std::string str(const GaussianRational& x) { return x.str(); }
};

inline bool is_zero(const Rational& x) { return x.is_zero(); }
inline bool is_zero(const GaussianRational& x) { return x.is_zero(); }

}  // namespace folcoh
