#include "novtel/snf.hpp"

#include <optional>

#include "novtel/errors.hpp"

namespace novtel {

namespace {

// The two arithmetic regimes share the elimination loop; they differ only in
// how division and post-operation reduction work.
struct ExactOps {
    using S = NovikovFraction;
    S reduce(const S& x) const { return x; }
    S div(const S& a, const S& b) const { return a / b; }
    S unit_inverse(const S& p, const Rational& e) const {
        // p = T^e * u; returns u^{-1}.
        return S(NovikovScalar::monomial(rat(1), e)) / p;
    }
    S monomial(const Rational& e) const { return S(NovikovScalar::monomial(rat(1), e)); }
};

struct ModOps {
    Rational lambda;
    using S = NovikovScalar;
    S reduce(const S& x) const { return x.truncate(lambda); }
    S div(const S& a, const S& b) const { return (a * b.invert(lambda)).truncate(lambda); }
    S unit_inverse(const S& p, const Rational& e) const {
        return p.shift(rat(1), -e).invert(lambda).truncate(lambda);
    }
    S monomial(const Rational& e) const { return NovikovScalar::monomial(rat(1), e); }
};

template <typename Ops>
Diagonalization<typename Ops::S> eliminate(Matrix<typename Ops::S> a, const Ops& ops) {
    using S = typename Ops::S;
    const std::size_t m = a.rows(), n = a.cols();
    Diagonalization<S> out;
    out.U = Matrix<S>::identity(m);
    out.Uinv = Matrix<S>::identity(m);
    out.V = Matrix<S>::identity(n);
    out.Vinv = Matrix<S>::identity(n);

    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = ops.reduce(a(i, j));

    auto swap_rows = [&](std::size_t r1, std::size_t r2) {
        if (r1 == r2) return;
        for (std::size_t j = 0; j < n; ++j) std::swap(a(r1, j), a(r2, j));
        for (std::size_t j = 0; j < m; ++j) {
            std::swap(out.U(r1, j), out.U(r2, j));
            std::swap(out.Uinv(j, r1), out.Uinv(j, r2));
        }
    };
    auto swap_cols = [&](std::size_t c1, std::size_t c2) {
        if (c1 == c2) return;
        for (std::size_t i = 0; i < m; ++i) std::swap(a(i, c1), a(i, c2));
        for (std::size_t i = 0; i < n; ++i) {
            std::swap(out.V(i, c1), out.V(i, c2));
            std::swap(out.Vinv(c1, i), out.Vinv(c2, i));
        }
    };
    // row r1 -= f * row r2
    auto add_row = [&](std::size_t r1, const S& f, std::size_t r2) {
        for (std::size_t j = 0; j < n; ++j)
            a(r1, j) = ops.reduce(a(r1, j) - f * a(r2, j));
        for (std::size_t j = 0; j < m; ++j) {
            out.U(r1, j) = ops.reduce(out.U(r1, j) - f * out.U(r2, j));
            out.Uinv(j, r2) = ops.reduce(out.Uinv(j, r2) + f * out.Uinv(j, r1));
        }
    };
    // col c1 -= g * col c2
    auto add_col = [&](std::size_t c1, const S& g, std::size_t c2) {
        for (std::size_t i = 0; i < m; ++i)
            a(i, c1) = ops.reduce(a(i, c1) - g * a(i, c2));
        for (std::size_t i = 0; i < n; ++i) {
            out.V(i, c1) = ops.reduce(out.V(i, c1) - g * out.V(i, c2));
            out.Vinv(c2, i) = ops.reduce(out.Vinv(c2, i) + g * out.Vinv(c1, i));
        }
    };
    // row r *= s  (s a unit)
    auto scale_row = [&](std::size_t r, const S& s, const S& sinv) {
        for (std::size_t j = 0; j < n; ++j) a(r, j) = ops.reduce(s * a(r, j));
        for (std::size_t j = 0; j < m; ++j) {
            out.U(r, j) = ops.reduce(s * out.U(r, j));
            out.Uinv(j, r) = ops.reduce(sinv * out.Uinv(j, r));
        }
    };

    std::size_t k = 0;
    const std::size_t kmax = std::min(m, n);
    while (k < kmax) {
        // Pivot: smallest valuation in the trailing submatrix, ties broken by
        // lowest (row, column).
        std::optional<Rational> best;
        std::size_t pi = 0, pj = 0;
        for (std::size_t i = k; i < m; ++i)
            for (std::size_t j = k; j < n; ++j) {
                if (a(i, j).is_zero()) continue;
                const Rational v = *a(i, j).valuation();
                if (!best || v < *best) {
                    best = v;
                    pi = i;
                    pj = j;
                }
            }
        if (!best) break;
        swap_rows(k, pi);
        swap_cols(k, pj);
        const S p = a(k, k);
        for (std::size_t i = k + 1; i < m; ++i)
            if (!a(i, k).is_zero()) add_row(i, ops.div(a(i, k), p), k);
        for (std::size_t j = k + 1; j < n; ++j)
            if (!a(k, j).is_zero()) add_col(j, ops.div(a(k, j), p), k);
        // Normalize the pivot to the monomial T^{val(p)}.
        const S uinv = ops.unit_inverse(p, *best);
        const S u = ops.div(p, ops.monomial(*best));
        scale_row(k, uinv, u);
        out.exps.push_back(*best);
        ++k;
    }
    out.rank = out.exps.size();
    out.D = std::move(a);
    return out;
}

}  // namespace

Diagonalization<NovikovFraction> snf_exact(const Matrix<NovikovScalar>& a) {
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (!a(i, j).in_ring())
                throw ValidationError("snf input entry (" + std::to_string(i) + "," +
                                      std::to_string(j) + ") has negative valuation");
    return eliminate(a.map([](const NovikovScalar& x) { return NovikovFraction(x); }),
                     ExactOps{});
}

Diagonalization<NovikovFraction> snf_exact_frac(const Matrix<NovikovFraction>& a) {
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const auto v = a(i, j).valuation();
            if (v && *v < 0)
                throw ValidationError("snf input entry (" + std::to_string(i) + "," +
                                      std::to_string(j) + ") has negative valuation");
        }
    return eliminate(a, ExactOps{});
}

Diagonalization<NovikovScalar> snf_mod(const Matrix<NovikovScalar>& a, const Rational& lambda) {
    if (lambda <= 0) throw ValidationError("truncation level must be positive");
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (!a(i, j).in_ring())
                throw ValidationError("snf input entry (" + std::to_string(i) + "," +
                                      std::to_string(j) + ") has negative valuation");
    return eliminate(a, ModOps{lambda});
}

bool verify_diagonalization(const Matrix<NovikovScalar>& a,
                            const Diagonalization<NovikovFraction>& d) {
    auto af = a.map([](const NovikovScalar& x) { return NovikovFraction(x); });
    Matrix<NovikovFraction> lhs = d.U * af * d.V;
    if (!(lhs == d.D)) return false;
    if (!(d.U * d.Uinv == Matrix<NovikovFraction>::identity(a.rows()))) return false;
    if (!(d.V * d.Vinv == Matrix<NovikovFraction>::identity(a.cols()))) return false;
    return true;
}

Matrix<NovikovScalar> kernel_mod(const Matrix<NovikovScalar>& a, const Rational& lambda) {
    auto d = snf_mod(a, lambda);
    std::vector<Matrix<NovikovScalar>> cols;
    std::vector<std::size_t> keep;
    std::vector<Rational> scale;
    for (std::size_t j = 0; j < a.cols(); ++j) {
        if (j < d.rank) {
            if (d.exps[j] == 0) continue;  // unit pivot: only the zero multiple
            keep.push_back(j);
            scale.push_back(lambda - d.exps[j]);
        } else {
            keep.push_back(j);
            scale.push_back(rat(0));
        }
    }
    Matrix<NovikovScalar> out(a.cols(), keep.size());
    for (std::size_t j = 0; j < keep.size(); ++j)
        for (std::size_t i = 0; i < a.cols(); ++i)
            out(i, j) = d.V(i, keep[j]).shift(rat(1), scale[j]).truncate(lambda);
    return out;
}

bool in_span_mod(const Matrix<NovikovScalar>& gens, const std::vector<NovikovScalar>& x,
                 const Rational& lambda) {
    auto d = snf_mod(gens, lambda);
    std::vector<NovikovScalar> y(gens.rows());
    for (std::size_t i = 0; i < gens.rows(); ++i) {
        NovikovScalar acc;
        for (std::size_t j = 0; j < gens.rows(); ++j) acc += d.U(i, j) * x[j];
        y[i] = acc.truncate(lambda);
    }
    // Solvable iff each coordinate is divisible by the invariant factor.
    for (std::size_t i = 0; i < gens.rows(); ++i) {
        if (y[i].is_zero()) continue;
        if (i >= d.rank) return false;
        if (*y[i].valuation() < d.exps[i]) return false;
    }
    return true;
}

bool same_span_mod(const Matrix<NovikovScalar>& g1, const Matrix<NovikovScalar>& g2,
                   const Rational& lambda) {
    for (std::size_t j = 0; j < g2.cols(); ++j)
        if (!in_span_mod(g1, g2.col(j), lambda)) return false;
    for (std::size_t j = 0; j < g1.cols(); ++j)
        if (!in_span_mod(g2, g1.col(j), lambda)) return false;
    return true;
}

}  // namespace novtel
