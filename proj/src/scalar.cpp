#include "lambdavec/scalar.hpp"

#include <array>
#include <cctype>
#include <ostream>
#include <sstream>

#include "lambdavec/error.hpp"

namespace lambdavec {

const char* to_string(TypeErrorKind k) {
    switch (k) {
        case TypeErrorKind::UnboundVariable: return "UnboundVariable";
        case TypeErrorKind::NotAnArrow: return "NotAnArrow";
        case TypeErrorKind::DomainMismatch: return "DomainMismatch";
        case TypeErrorKind::ForallExpected: return "ForallExpected";
        case TypeErrorKind::EscapingTypeVar: return "EscapingTypeVar";
        case TypeErrorKind::HeterogeneousFunctionSummands: return "HeterogeneousFunctionSummands";
        case TypeErrorKind::TypeMismatch: return "TypeMismatch";
    }
    return "TypeError";
}

namespace {

// Element of Q(sqrt2), used as an intermediate for complex arithmetic.
struct Quad {
    Rational u, v;  // u + v*sqrt2
    Quad operator+(const Quad& o) const { return {u + o.u, v + o.v}; }
    Quad operator-(const Quad& o) const { return {u - o.u, v - o.v}; }
    Quad operator*(const Quad& o) const {
        return {u * o.u + 2 * (v * o.v), u * o.v + v * o.u};
    }
    bool is_zero() const { return u == 0 && v == 0; }
    Quad inverse() const {
        // (u + v*sqrt2)^-1 = (u - v*sqrt2) / (u^2 - 2 v^2); the denominator
        // is nonzero for nonzero elements because sqrt2 is irrational.
        Rational den = u * u - 2 * (v * v);
        return {u / den, -v / den};
    }
};

}  // namespace

Scalar Scalar::operator+(const Scalar& o) const {
    return Scalar(re_ + o.re_, rs_ + o.rs_, im_ + o.im_, is_ + o.is_);
}

Scalar Scalar::operator-(const Scalar& o) const {
    return Scalar(re_ - o.re_, rs_ - o.rs_, im_ - o.im_, is_ - o.is_);
}

Scalar Scalar::operator-() const { return Scalar(-re_, -rs_, -im_, -is_); }

Scalar Scalar::operator*(const Scalar& o) const {
    Quad x{re_, rs_}, y{im_, is_}, xo{o.re_, o.rs_}, yo{o.im_, o.is_};
    Quad rp = x * xo - y * yo;
    Quad ip = x * yo + y * xo;
    return Scalar(rp.u, rp.v, ip.u, ip.v);
}

Scalar Scalar::inverse() const {
    Quad x{re_, rs_}, y{im_, is_};
    Quad norm = x * x + y * y;  // |z|^2 in Q(sqrt2), nonzero for nonzero z
    Quad ninv = norm.inverse();
    Quad rp = x * ninv;
    Quad ip = (Quad{-y.u, -y.v}) * ninv;
    return Scalar(rp.u, rp.v, ip.u, ip.v);
}

Scalar Scalar::operator/(const Scalar& o) const { return *this * o.inverse(); }

int Scalar::compare(const Scalar& o) const {
    if (re_ != o.re_) return re_ < o.re_ ? -1 : 1;
    if (rs_ != o.rs_) return rs_ < o.rs_ ? -1 : 1;
    if (im_ != o.im_) return im_ < o.im_ ? -1 : 1;
    if (is_ != o.is_) return is_ < o.is_ ? -1 : 1;
    return 0;
}

namespace {

std::string rat_string(const Rational& r) {
    std::ostringstream os;
    os << r;  // cpp_rational prints n or n/d in lowest terms
    return os.str();
}

// Renders coeff*sym with sym in {"", "sqrt2", "i", "sqrt2*i"}.
std::string part_string(const Rational& coeff, const std::string& sym) {
    if (sym.empty()) return rat_string(coeff);
    Rational num(numerator(coeff));
    Rational den(denominator(coeff));
    std::string head;
    if (num == 1) {
        head = sym;
    } else if (num == -1) {
        head = "-" + sym;
    } else {
        head = rat_string(num) + "*" + sym;
    }
    if (den == 1) return head;
    return head + "/" + rat_string(den);
}

}  // namespace

std::string Scalar::to_string() const {
    std::array<std::pair<const Rational*, const char*>, 4> parts{{
        {&re_, ""}, {&rs_, "sqrt2"}, {&im_, "i"}, {&is_, "sqrt2*i"},
    }};
    std::string out;
    for (auto [coeff, sym] : parts) {
        if (*coeff == 0) continue;
        std::string p = part_string(*coeff, sym);
        if (out.empty()) {
            out = p;
        } else if (p.front() == '-') {
            out += " - " + p.substr(1);
        } else {
            out += " + " + p;
        }
    }
    return out.empty() ? "0" : out;
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) {
    return os << s.to_string();
}

std::uint64_t ScalarGen::next_raw() {
    // xorshift64: deterministic across platforms, good enough for sampling.
    state_ ^= state_ << 13;
    state_ ^= state_ >> 7;
    state_ ^= state_ << 17;
    return state_;
}

Scalar ScalarGen::next() {
    static const std::array<Rational, 12> table = {
        Rational(0), Rational(0),  Rational(0),  Rational(1),
        Rational(1), Rational(-1), Rational(2),  Rational(-2),
        Rational(1) / 2, Rational(-1) / 2, Rational(3), Rational(2) / 3,
    };
    auto pick = [&] { return table[next_raw() % table.size()]; };
    Rational re = pick();
    Rational rs = pick();
    // Keep half the samples real so real-only identities get exercised too.
    if (next_raw() % 2 == 0) return Scalar(re, rs, 0, 0);
    return Scalar(re, rs, pick(), pick());
}

Scalar ScalarGen::next_nonzero() {
    for (;;) {
        Scalar s = next();
        if (!s.is_zero()) return s;
    }
}

}  // namespace lambdavec
