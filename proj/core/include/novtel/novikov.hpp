#pragma once

#include <string>
#include <vector>

#include "novtel/rational.hpp"

namespace novtel {

/// A finite formal sum sum_i a_i * T^{w_i} with exact rational coefficients
/// and exponents. Canonical form: exponents strictly increasing, no zero
/// coefficients. Elements of the ring have all exponents >= 0; "field"
/// elements may carry negative exponents.
class NovikovScalar {
public:
    struct Term {
        Rational coeff;
        Rational exp;
        bool operator==(const Term&) const = default;
    };

    NovikovScalar() = default;
    explicit NovikovScalar(std::vector<Term> terms);  // canonicalizes

    static NovikovScalar zero() { return NovikovScalar{}; }
    static NovikovScalar one() { return monomial(rat(1), rat(0)); }
    static NovikovScalar monomial(const Rational& coeff, const Rational& exp);
    static NovikovScalar constant(const Rational& coeff) { return monomial(coeff, rat(0)); }

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_one() const;

    /// Minimum exponent; +infinity (nullopt) for zero.
    Valuation valuation() const;

    /// True iff all exponents are >= 0 (member of the nonnegative ring).
    bool in_ring() const;

    /// Coefficient of the lowest-order term; throws on zero.
    const Rational& leading_coeff() const;

    NovikovScalar operator+(const NovikovScalar& o) const;
    NovikovScalar operator-(const NovikovScalar& o) const;
    NovikovScalar operator-() const;
    NovikovScalar operator*(const NovikovScalar& o) const;
    NovikovScalar& operator+=(const NovikovScalar& o) { return *this = *this + o; }
    NovikovScalar& operator-=(const NovikovScalar& o) { return *this = *this - o; }
    NovikovScalar& operator*=(const NovikovScalar& o) { return *this = *this * o; }

    bool operator==(const NovikovScalar& o) const { return terms_ == o.terms_; }

    /// Keeps exactly the terms with exponent < lambda. Requires lambda > 0.
    NovikovScalar truncate(const Rational& lambda) const;

    /// Multiplies by the monomial c*T^e.
    NovikovScalar shift(const Rational& coeff, const Rational& exp) const;

    /// Inverse to precision lambda: truncate(x * invert(x, lambda), lambda) ==
    /// truncate(1, lambda). Throws ValidationError on zero input.
    NovikovScalar invert(const Rational& lambda) const;

    std::string str() const;

private:
    std::vector<Term> terms_;
    void canonicalize();
};

NovikovScalar operator*(const Rational& c, const NovikovScalar& x);

enum class ScalarOp { add, sub, mul, neg };
NovikovScalar arith(const NovikovScalar& x, const NovikovScalar& y, ScalarOp op);

/// Parses the textual syntax: a sum of `c*T^(p/q)` terms, e.g.
/// "1 - 2*T^(1/2) + T^3". Also accepts bare rationals and bare "T^e".
NovikovScalar parse_scalar(const std::string& text);

/// Quotient num/den of finite Novikov sums. Closed under the four field
/// operations, which finite sums are not; used wherever elimination needs
/// exact division (the series it denotes is recovered by expand()).
class NovikovFraction {
public:
    NovikovFraction() : num_(NovikovScalar::zero()), den_(NovikovScalar::one()) {}
    NovikovFraction(NovikovScalar num, NovikovScalar den);  // normalizes
    /*implicit*/ NovikovFraction(const NovikovScalar& x)
        : num_(x), den_(NovikovScalar::one()) {}

    static NovikovFraction zero() { return NovikovFraction(); }
    static NovikovFraction one() { return NovikovFraction(NovikovScalar::one()); }

    const NovikovScalar& num() const { return num_; }
    const NovikovScalar& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    /// den is normalized to valuation 0 with unit constant term, so the
    /// valuation is just val(num).
    Valuation valuation() const { return num_.valuation(); }

    NovikovFraction operator+(const NovikovFraction& o) const;
    NovikovFraction operator-(const NovikovFraction& o) const;
    NovikovFraction operator-() const;
    NovikovFraction operator*(const NovikovFraction& o) const;
    NovikovFraction operator/(const NovikovFraction& o) const;
    NovikovFraction& operator+=(const NovikovFraction& o) { return *this = *this + o; }
    NovikovFraction& operator-=(const NovikovFraction& o) { return *this = *this - o; }
    NovikovFraction& operator*=(const NovikovFraction& o) { return *this = *this * o; }

    bool operator==(const NovikovFraction& o) const;

    /// Series expansion keeping exponents < lambda.
    NovikovScalar expand(const Rational& lambda) const;

    /// Exact finite-sum value; throws UnsupportedError if the denominator is
    /// not a monomial times a unit dividing the numerator exactly.
    NovikovScalar exact() const;
    bool is_exact() const;

    std::string str() const;

private:
    NovikovScalar num_, den_;
};

}  // namespace novtel
