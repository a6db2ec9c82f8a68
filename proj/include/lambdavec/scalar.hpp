#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace lambdavec {

using Rational = boost::multiprecision::cpp_rational;

// Exact element of Q(i, sqrt2): re + rs*sqrt2 + (im + is*sqrt2)*i.
// The four rational coordinates are kept normalised by cpp_rational itself
// (lowest terms, positive denominator), so equality is componentwise.
class Scalar {
public:
    Scalar() = default;
    Scalar(int n) : re_(n) {}  // NOLINT: implicit from small ints is intended
    explicit Scalar(const Rational& re) : re_(re) {}
    Scalar(Rational re, Rational rs, Rational im, Rational is)
        : re_(std::move(re)), rs_(std::move(rs)), im_(std::move(im)), is_(std::move(is)) {}

    static Scalar zero() { return Scalar(0); }
    static Scalar one() { return Scalar(1); }
    static Scalar i() { return Scalar(0, 0, 1, 0); }
    static Scalar sqrt2() { return Scalar(0, 1, 0, 0); }
    static Scalar rational(const Rational& r) { return Scalar(r); }

    const Rational& re() const { return re_; }
    const Rational& re_sqrt2() const { return rs_; }
    const Rational& im() const { return im_; }
    const Rational& im_sqrt2() const { return is_; }

    bool is_zero() const { return re_ == 0 && rs_ == 0 && im_ == 0 && is_ == 0; }
    bool is_one() const { return re_ == 1 && rs_ == 0 && im_ == 0 && is_ == 0; }

    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator-() const;
    Scalar operator*(const Scalar& o) const;
    // Precondition: o is nonzero (Q(i, sqrt2) is a field).
    Scalar operator/(const Scalar& o) const;
    Scalar inverse() const;

    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

    bool operator==(const Scalar& o) const = default;

    // Canonical rendering, parseable back by parse_scalar:
    //   0, 1, -1/2, sqrt2, -sqrt2/2, i, 3*i/4, sqrt2*i, 1/2 + sqrt2 + i
    std::string to_string() const;

    // Total order (lexicographic on coordinates), used only to make
    // printed sums and canonical forms deterministic.
    int compare(const Scalar& o) const;

private:
    Rational re_{0}, rs_{0}, im_{0}, is_{0};
};

std::ostream& operator<<(std::ostream& os, const Scalar& s);

// Parses the scalar grammar:
//   sum     ::= ["-"] product (("+" | "-") product)*
//   product ::= atom (("*" atom) | ("/" nat))*
//   atom    ::= nat ["/" nat] | "i" | "sqrt2" | "(" sum ")"
// Throws ParseError on malformed input or trailing garbage.
Scalar parse_scalar(const std::string& text);

// Deterministic generator for property tests: draws the four coordinates
// from a small set of numerators/denominators, biased towards 0 and 1.
class ScalarGen {
public:
    explicit ScalarGen(std::uint64_t seed) : state_(seed ? seed : 1) {}
    Scalar next();
    Scalar next_nonzero();
    std::uint64_t next_raw();

private:
    std::uint64_t state_;
};

}  // namespace lambdavec
