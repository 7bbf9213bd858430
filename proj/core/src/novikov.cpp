#include "novtel/novikov.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "novtel/errors.hpp"

namespace novtel {

Rational parse_rational(const std::string& s) {
    std::string t;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t.empty()) throw std::invalid_argument("empty rational");
    try {
        Rational q(t);
        q.canonicalize();
        return q;
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed rational: '" + s + "'");
    }
}

std::string to_string(const Rational& q) { return q.get_str(); }

long floor_long(const Rational& q) {
    mpz_class z;
    mpz_fdiv_q(z.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    if (!z.fits_slong_p()) throw std::overflow_error("rational out of long range");
    return z.get_si();
}

long ceil_long(const Rational& q) {
    mpz_class z;
    mpz_cdiv_q(z.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    if (!z.fits_slong_p()) throw std::overflow_error("rational out of long range");
    return z.get_si();
}

std::string to_string(const Valuation& v) { return v ? to_string(*v) : "inf"; }

NovikovScalar::NovikovScalar(std::vector<Term> terms) : terms_(std::move(terms)) {
    canonicalize();
}

void NovikovScalar::canonicalize() {
    std::stable_sort(terms_.begin(), terms_.end(),
                     [](const Term& a, const Term& b) { return a.exp < b.exp; });
    std::vector<Term> out;
    for (auto& t : terms_) {
        if (!out.empty() && out.back().exp == t.exp) {
            out.back().coeff += t.coeff;
            if (out.back().coeff == 0) out.pop_back();
        } else if (t.coeff != 0) {
            out.push_back(std::move(t));
        }
    }
    terms_ = std::move(out);
}

NovikovScalar NovikovScalar::monomial(const Rational& coeff, const Rational& exp) {
    if (coeff == 0) return zero();
    NovikovScalar x;
    x.terms_.push_back({coeff, exp});
    return x;
}

bool NovikovScalar::is_one() const {
    return terms_.size() == 1 && terms_[0].coeff == 1 && terms_[0].exp == 0;
}

Valuation NovikovScalar::valuation() const {
    if (terms_.empty()) return std::nullopt;
    return terms_.front().exp;
}

bool NovikovScalar::in_ring() const {
    return terms_.empty() || terms_.front().exp >= 0;
}

const Rational& NovikovScalar::leading_coeff() const {
    if (terms_.empty()) throw ValidationError("leading coefficient of zero");
    return terms_.front().coeff;
}

NovikovScalar NovikovScalar::operator+(const NovikovScalar& o) const {
    // Merge of two sorted term lists.
    NovikovScalar out;
    auto a = terms_.begin(), b = o.terms_.begin();
    while (a != terms_.end() || b != o.terms_.end()) {
        if (b == o.terms_.end() || (a != terms_.end() && a->exp < b->exp)) {
            out.terms_.push_back(*a++);
        } else if (a == terms_.end() || b->exp < a->exp) {
            out.terms_.push_back(*b++);
        } else {
            Rational c = a->coeff + b->coeff;
            if (c != 0) out.terms_.push_back({c, a->exp});
            ++a;
            ++b;
        }
    }
    return out;
}

NovikovScalar NovikovScalar::operator-() const {
    NovikovScalar out = *this;
    for (auto& t : out.terms_) t.coeff = -t.coeff;
    return out;
}

NovikovScalar NovikovScalar::operator-(const NovikovScalar& o) const { return *this + (-o); }

NovikovScalar NovikovScalar::operator*(const NovikovScalar& o) const {
    std::vector<Term> prod;
    prod.reserve(terms_.size() * o.terms_.size());
    for (const auto& a : terms_)
        for (const auto& b : o.terms_) prod.push_back({a.coeff * b.coeff, a.exp + b.exp});
    return NovikovScalar(std::move(prod));
}

NovikovScalar operator*(const Rational& c, const NovikovScalar& x) {
    return NovikovScalar::constant(c) * x;
}

NovikovScalar NovikovScalar::truncate(const Rational& lambda) const {
    if (lambda <= 0) throw ValidationError("truncation level must be positive");
    NovikovScalar out;
    for (const auto& t : terms_) {
        if (t.exp >= lambda) break;
        out.terms_.push_back(t);
    }
    return out;
}

NovikovScalar NovikovScalar::shift(const Rational& coeff, const Rational& exp) const {
    return monomial(coeff, exp) * *this;
}

NovikovScalar NovikovScalar::invert(const Rational& lambda) const {
    if (is_zero()) throw ValidationError("cannot invert zero");
    const Rational v = terms_.front().exp;
    // x = lead * T^v * (1 + u), val(u) > 0; invert the unit part by geometric
    // series up to precision lambda, then shift back by T^{-v}.
    const Rational lead = terms_.front().coeff;
    NovikovScalar u;  // (x / (lead*T^v)) - 1
    for (std::size_t i = 1; i < terms_.size(); ++i)
        u.terms_.push_back({terms_[i].coeff / lead, terms_[i].exp - v});
    NovikovScalar acc = one(), pw = one();
    if (!u.is_zero()) {
        const Rational du = u.terms_.front().exp;  // > 0
        long steps = ceil_long(lambda / du) + 1;
        for (long k = 1; k <= steps; ++k) {
            pw = (pw * u).truncate(lambda);
            if (pw.is_zero()) break;
            acc = (k % 2 == 1) ? acc - pw : acc + pw;
        }
    }
    return acc.shift(1 / lead, -v);
}

std::string NovikovScalar::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
        Rational c = t.coeff;
        if (!first) {
            os << (c < 0 ? " - " : " + ");
            if (c < 0) c = -c;
        }
        first = false;
        if (t.exp == 0) {
            os << to_string(c);
        } else {
            if (c != 1) os << to_string(c) << "*";
            os << "T^";
            if (t.exp.get_den() == 1 && t.exp >= 0)
                os << to_string(t.exp);
            else
                os << "(" << to_string(t.exp) << ")";
        }
    }
    return os.str();
}

NovikovScalar arith(const NovikovScalar& x, const NovikovScalar& y, ScalarOp op) {
    switch (op) {
        case ScalarOp::add: return x + y;
        case ScalarOp::sub: return x - y;
        case ScalarOp::mul: return x * y;
        case ScalarOp::neg: return -x;
    }
    throw std::invalid_argument("unknown scalar op");
}

namespace {

// One term of the textual syntax: [sign] [coeff [*]] [T [^ exponent]].
struct TermParser {
    const std::string& s;
    std::size_t i = 0;

    explicit TermParser(const std::string& str) : s(str) {}

    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }

    bool done() {
        skip_ws();
        return i >= s.size();
    }

    Rational parse_number() {
        skip_ws();
        std::size_t start = i;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
        while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '/'))
            ++i;
        if (i == start) throw std::invalid_argument("expected number in scalar at pos " +
                                                    std::to_string(start));
        return parse_rational(s.substr(start, i - start));
    }

    Rational parse_exponent() {
        skip_ws();
        if (i < s.size() && s[i] == '(') {
            ++i;
            Rational e = parse_number();
            skip_ws();
            if (i >= s.size() || s[i] != ')')
                throw std::invalid_argument("unbalanced parenthesis in exponent");
            ++i;
            return e;
        }
        return parse_number();
    }

    NovikovScalar::Term parse_term(bool first) {
        skip_ws();
        Rational sign = rat(1);
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
            if (s[i] == '-') sign = rat(-1);
            ++i;
        } else if (!first) {
            throw std::invalid_argument("expected '+' or '-' between terms");
        }
        skip_ws();
        Rational coeff = rat(1);
        bool have_coeff = false;
        if (i < s.size() && s[i] != 'T') {
            coeff = parse_number();
            have_coeff = true;
            skip_ws();
            if (i < s.size() && s[i] == '*') {
                ++i;
                skip_ws();
            }
        }
        Rational exp = rat(0);
        if (i < s.size() && s[i] == 'T') {
            ++i;
            skip_ws();
            if (i < s.size() && s[i] == '^') {
                ++i;
                exp = parse_exponent();
            } else {
                exp = rat(1);
            }
        } else if (!have_coeff) {
            throw std::invalid_argument("expected coefficient or T in scalar term");
        }
        return {sign * coeff, exp};
    }
};

}  // namespace

NovikovScalar parse_scalar(const std::string& text) {
    TermParser p(text);
    std::vector<NovikovScalar::Term> terms;
    bool first = true;
    while (!p.done()) {
        terms.push_back(p.parse_term(first));
        first = false;
    }
    if (terms.empty()) throw std::invalid_argument("empty scalar");
    return NovikovScalar(std::move(terms));
}

namespace {

// Bounded long division num / den (den with valuation 0, leading coeff 1).
// Collapsing exact quotients keeps fraction sizes from compounding through
// repeated elimination steps; the step cap bails out of hopeless divisions.
std::optional<NovikovScalar> try_divide(const NovikovScalar& num, const NovikovScalar& den) {
    if (num.is_zero()) return NovikovScalar::zero();
    if (den.is_one()) return num;
    // An exact quotient's exponents lie on the common grid between val(num)
    // and maxexp(num) - maxexp(den); that bounds the long-division length.
    const Rational bound = num.terms().back().exp - den.terms().back().exp;
    if (bound < *num.valuation()) return std::nullopt;
    mpz_class l = 1;
    for (const auto* s : {&num, &den})
        for (const auto& t : s->terms())
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.exp.get_den().get_mpz_t());
    long max_steps = 4096;
    if (l.fits_slong_p()) {
        const Rational span = (bound - *num.valuation()) * l.get_si();
        if (span < max_steps) max_steps = mpz_class(span.get_num() / span.get_den()).get_si() + 2;
    }
    NovikovScalar q, r = num;
    while (!r.is_zero()) {
        const Rational e = r.terms().front().exp;
        if (e > bound || max_steps-- == 0) return std::nullopt;
        NovikovScalar t = NovikovScalar::monomial(r.terms().front().coeff, e);
        q += t;
        r -= t * den;
    }
    return q;
}

// Dense polynomial in x = T^(1/L), coefficients by increasing power.
using Poly = std::vector<Rational>;

Poly trim(Poly p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
    return p;
}

Poly poly_rem(Poly a, const Poly& b) {
    while (a.size() >= b.size()) {
        const Rational q = a.back() / b.back();
        const std::size_t off = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[off + i] -= q * b[i];
        a = trim(std::move(a));
        if (a.empty()) break;
    }
    return a;
}

Poly poly_gcd(Poly a, Poly b) {
    while (!b.empty()) {
        Poly r = poly_rem(std::move(a), b);
        a = std::move(b);
        b = std::move(r);
        if (!b.empty()) {
            const Rational lead = b.back();
            for (auto& c : b) c /= lead;
        }
    }
    return a;
}

Poly poly_div(Poly a, const Poly& b) {
    Poly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0);
    while (a.size() >= b.size()) {
        const Rational c = a.back() / b.back();
        const std::size_t off = a.size() - b.size();
        q[off] = c;
        for (std::size_t i = 0; i < b.size(); ++i) a[off + i] -= c * b[i];
        a = trim(std::move(a));
        if (a.empty()) break;
    }
    return q;
}

// Exponent grid: the least L with all exponents in (1/L)Z, capped.
std::optional<long> grid(const NovikovScalar& a, const NovikovScalar& b) {
    mpz_class l = 1;
    for (const auto* s : {&a, &b})
        for (const auto& t : s->terms()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.exp.get_den().get_mpz_t());
    if (!l.fits_slong_p() || l.get_si() > 4096) return std::nullopt;
    const long L = l.get_si();
    // Degree cap: Euclid is quadratic, so bail out on huge grids.
    for (const auto* s : {&a, &b})
        if (!s->is_zero() && s->terms().back().exp * L > 600) return std::nullopt;
    return L;
}

Poly to_poly(const NovikovScalar& s, long L) {
    Poly p;
    for (const auto& t : s.terms()) {
        const Rational e = t.exp * L;
        const long i = mpz_class(e.get_num()).get_si();
        if (static_cast<std::size_t>(i) >= p.size()) p.resize(i + 1);
        p[i] = t.coeff;
    }
    return p;
}

NovikovScalar from_poly(const Poly& p, long L) {
    std::vector<NovikovScalar::Term> terms;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] != 0) terms.push_back({p[i], rat(static_cast<long>(i)) / L});
    return NovikovScalar(std::move(terms));
}

}  // namespace

NovikovFraction::NovikovFraction(NovikovScalar num, NovikovScalar den)
    : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw ValidationError("fraction with zero denominator");
    // Normalize den to valuation 0 with unit constant term 1.
    const Rational v = *den_.valuation();
    const Rational lead = den_.leading_coeff();
    den_ = den_.shift(1 / lead, -v);
    num_ = num_.shift(1 / lead, -v);
    if (num_.is_zero()) {
        den_ = NovikovScalar::one();
        return;
    }
    if (den_.is_one()) return;
    if (auto q = try_divide(num_, den_)) {
        num_ = std::move(*q);
        den_ = NovikovScalar::one();
        return;
    }
    // Cancel the polynomial gcd in x = T^(1/L) when the grid is small; keeps
    // elimination certificates from compounding denominators.
    if (num_.terms().size() + den_.terms().size() <= 40) return;
    const Rational nv = *num_.valuation();
    const NovikovScalar n0 = num_.shift(rat(1), -nv);
    if (auto L = grid(n0, den_)) {
        const Poly g = poly_gcd(to_poly(n0, *L), to_poly(den_, *L));
        if (g.size() > 1) {
            num_ = from_poly(poly_div(to_poly(n0, *L), g), *L).shift(rat(1), nv);
            den_ = from_poly(poly_div(to_poly(den_, *L), g), *L);
            const Rational dl = den_.leading_coeff();
            den_ = den_.shift(1 / dl, rat(0));
            num_ = num_.shift(1 / dl, rat(0));
            if (auto q = try_divide(num_, den_)) {
                num_ = std::move(*q);
                den_ = NovikovScalar::one();
            }
        }
    }
}

NovikovFraction NovikovFraction::operator+(const NovikovFraction& o) const {
    return NovikovFraction(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

NovikovFraction NovikovFraction::operator-(const NovikovFraction& o) const {
    return NovikovFraction(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

NovikovFraction NovikovFraction::operator-() const {
    NovikovFraction out = *this;
    out.num_ = -out.num_;
    return out;
}

NovikovFraction NovikovFraction::operator*(const NovikovFraction& o) const {
    return NovikovFraction(num_ * o.num_, den_ * o.den_);
}

NovikovFraction NovikovFraction::operator/(const NovikovFraction& o) const {
    if (o.is_zero()) throw ValidationError("division by zero fraction");
    return NovikovFraction(num_ * o.den_, den_ * o.num_);
}

bool NovikovFraction::operator==(const NovikovFraction& o) const {
    return num_ * o.den_ == o.num_ * den_;
}

NovikovScalar NovikovFraction::expand(const Rational& lambda) const {
    if (num_.is_zero()) return NovikovScalar::zero();
    const Rational v = *num_.valuation();
    if (v >= lambda) return NovikovScalar::zero();
    return (num_ * den_.invert(lambda - v)).truncate(lambda);
}

NovikovScalar NovikovFraction::exact() const {
    // Long division num / den; the quotient of an exact division has top
    // exponent maxexp(num) - maxexp(den).
    if (num_.is_zero()) return NovikovScalar::zero();
    const Rational bound = num_.terms().back().exp - den_.terms().back().exp;
    NovikovScalar q, r = num_;
    while (!r.is_zero()) {
        const Rational e = r.terms().front().exp;  // den has val 0, lead 1
        if (e > bound) throw UnsupportedError("fraction is not a finite sum: " + str());
        NovikovScalar t = NovikovScalar::monomial(r.terms().front().coeff, e);
        q += t;
        r -= t * den_;
    }
    return q;
}

bool NovikovFraction::is_exact() const {
    try {
        (void)exact();
        return true;
    } catch (const UnsupportedError&) {
        return false;
    }
}

std::string NovikovFraction::str() const {
    if (den_.is_one()) return num_.str();
    return "(" + num_.str() + ")/(" + den_.str() + ")";
}

}  // namespace novtel
