#pragma once

#include <random>
#include <string>
#include <vector>

#include "novtel/completion.hpp"
#include "novtel/errors.hpp"
#include "novtel/neck.hpp"
#include "novtel/unital.hpp"

namespace testutil {

using namespace novtel;

inline NovikovScalar sc(const std::string& s) { return parse_scalar(s); }

inline Matrix<NovikovScalar> mat(std::size_t rows, std::size_t cols,
                                 const std::vector<std::string>& entries) {
    Matrix<NovikovScalar> m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = sc(entries.at(i * cols + j));
    return m;
}

inline std::vector<std::string> gens(const std::string& stem, std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(stem + std::to_string(i));
    return out;
}

/// 0 -> C^0 -> C^1 -> 0 with a single 1x1 differential entry.
inline GradedComplex two_term(const std::string& entry) {
    GradedComplex c;
    c.set_generators(0, {"x"});
    c.set_generators(1, {"y"});
    c.set_differential(0, mat(1, 1, {entry}));
    return c;
}

/// Two-degree complex (degrees 0, 1) with the given differential matrix.
inline GradedComplex pair_complex(std::size_t r0, std::size_t r1,
                                  const Matrix<NovikovScalar>& d) {
    GradedComplex c;
    c.set_generators(0, gens("x", r0));
    c.set_generators(1, gens("y", r1));
    c.set_differential(0, d);
    return c;
}

class Rng {
public:
    explicit Rng(unsigned seed) : rng_(seed) {}

    long uniform(long lo, long hi) {
        return std::uniform_int_distribution<long>(lo, hi)(rng_);
    }

    Rational exponent(long max_num = 6, long max_den = 6) {
        return rat(uniform(0, max_num), uniform(1, max_den));
    }

    /// Scalar with up to `terms` terms, exponent denominators <= 6.
    NovikovScalar scalar(int terms = 2, bool allow_zero = true) {
        if (allow_zero && uniform(0, 3) == 0) return NovikovScalar::zero();
        NovikovScalar out;
        while (out.is_zero()) {
            const long k = uniform(1, terms);
            for (long t = 0; t < k; ++t) {
                long c = uniform(-3, 3);
                if (c == 0) c = 1;
                out += NovikovScalar::monomial(rat(c), exponent());
            }
            if (allow_zero) break;
        }
        return out;
    }

    Matrix<NovikovScalar> matrix(std::size_t rows, std::size_t cols, int terms = 2) {
        Matrix<NovikovScalar> m(rows, cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) m(i, j) = scalar(terms);
        return m;
    }

    /// Invertible over the ring: product of elementary matrices and unit scalings.
    Matrix<NovikovScalar> unimodular(std::size_t n, int factors = 4) {
        auto m = Matrix<NovikovScalar>::identity(n);
        for (int f = 0; f < factors; ++f) {
            auto e = Matrix<NovikovScalar>::identity(n);
            const std::size_t i = static_cast<std::size_t>(uniform(0, long(n) - 1));
            const std::size_t j = static_cast<std::size_t>(uniform(0, long(n) - 1));
            if (i == j)
                e(i, i) = NovikovScalar::constant(rat(uniform(0, 1) ? 1 : -1)) +
                          NovikovScalar::monomial(rat(uniform(-2, 2)), exponent() + rat(1, 6));
            else
                e(i, j) = scalar(1);
            m = m * e;
        }
        return m;
    }

    std::mt19937& engine() { return rng_; }

private:
    std::mt19937 rng_;
};

/// Random ray in one of two shapes:
///  - zero-differential slices with arbitrary structure matrices, or
///  - a fixed two-degree complex with maps T^a id + d h + h d.
/// Tail is Constant (invertible) or PositiveShift, per `shifted`.
inline Ray random_ray(Rng& rng, bool shifted) {
    Ray r;
    const std::size_t r0 = static_cast<std::size_t>(rng.uniform(1, 3));
    const std::size_t r1 = static_cast<std::size_t>(rng.uniform(1, 3));
    const bool zero_d = rng.uniform(0, 1) == 0;
    Matrix<NovikovScalar> d(r1, r0);
    if (!zero_d) d = rng.matrix(r1, r0, 1);
    const GradedComplex c = pair_complex(r0, r1, d);
    const std::size_t slices = static_cast<std::size_t>(rng.uniform(1, 4));
    for (std::size_t i = 0; i < slices; ++i) r.prefix.push_back(c);

    auto endo = [&](bool invertible) {
        ChainMap m{c, c, {}};
        if (zero_d) {
            if (invertible) {
                m.blocks[0] = rng.unimodular(r0);
                m.blocks[1] = rng.unimodular(r1);
            } else {
                const Rational delta = rng.exponent(4, 4) + rat(1, 6);
                m.blocks[0] = rng.matrix(r0, r0).map(
                    [&](const NovikovScalar& s) { return s.shift(rat(1), delta); });
                m.blocks[1] = rng.matrix(r1, r1).map(
                    [&](const NovikovScalar& s) { return s.shift(rat(1), delta); });
            }
        } else {
            // T^a id + d h + h d for h : C^1 -> C^0
            const Rational a = invertible ? rat(0) : rng.exponent(4, 4) + rat(1, 6);
            auto h = rng.matrix(r0, r1, 1);
            if (!invertible)
                h = h.map([&](const NovikovScalar& s) { return s.shift(rat(1), a); });
            else
                h = h.map([&](const NovikovScalar& s) { return s.shift(rat(1), rat(1, 6)); });
            m.blocks[0] = Matrix<NovikovScalar>::identity(r0).scaled(
                              NovikovScalar::monomial(rat(1), a)) +
                          h * d;
            m.blocks[1] = Matrix<NovikovScalar>::identity(r1).scaled(
                              NovikovScalar::monomial(rat(1), a)) +
                          d * h;
        }
        return m;
    };
    for (std::size_t i = 0; i + 1 < slices; ++i) r.prefix_maps.push_back(endo(rng.uniform(0, 1) == 0));
    r.tail.phi = endo(!shifted);
    if (shifted) {
        Valuation dmin;
        for (int n : {0, 1})
            for (std::size_t i = 0; i < r.tail.phi.block(n).rows(); ++i)
                for (std::size_t j = 0; j < r.tail.phi.block(n).cols(); ++j) {
                    const auto v = r.tail.phi.block(n)(i, j).valuation();
                    if (val_lt(v, dmin)) dmin = v;
                }
        r.tail.kind = TailKind::PositiveShift;
        r.tail.delta = dmin ? *dmin : rat(1);
        if (!(*r.tail.delta > 0)) r.tail.delta = rat(1, 6);
    } else {
        r.tail.kind = TailKind::Constant;
    }
    r.validate();
    return r;
}

}  // namespace testutil
