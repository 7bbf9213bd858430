#pragma once

#include <vector>

#include "novtel/matrix.hpp"
#include "novtel/novikov.hpp"

namespace novtel {

/// Result of diagonalizing A: U*A*V == D with U, V invertible over the
/// valuation ring, D diagonal with entries T^{exps[i]} of non-decreasing
/// valuation (the invariant factors). Inverses are tracked so kernels and
/// coordinates come for free.
template <typename S>
struct Diagonalization {
    Matrix<S> U, Uinv, V, Vinv, D;
    std::vector<Rational> exps;  // one per nonzero diagonal entry
    std::size_t rank = 0;        // exps.size()
};

/// Exact Smith normal form over the valuation ring. Entries must lie in the
/// nonnegative ring. Pivot rule: smallest valuation, ties broken by lowest
/// (row, column) index.
Diagonalization<NovikovFraction> snf_exact(const Matrix<NovikovScalar>& a);

/// Same elimination carried out modulo T^lambda; all certificate entries are
/// truncated finite sums. Diagonal entries that vanish mod T^lambda count as
/// zero (rank is the number of pivots of valuation < lambda).
Diagonalization<NovikovScalar> snf_mod(const Matrix<NovikovScalar>& a, const Rational& lambda);

/// Variant for matrices that are already fraction-valued (entries must still
/// have valuation >= 0).
Diagonalization<NovikovFraction> snf_exact_frac(const Matrix<NovikovFraction>& a);

/// Exact check U*A*V == D (used by tests and negative controls).
bool verify_diagonalization(const Matrix<NovikovScalar>& a,
                            const Diagonalization<NovikovFraction>& d);

/// Generators (columns) of the kernel of A acting on column vectors modulo
/// T^lambda: scaled columns T^{lambda - e_i} * V_i plus the rank-deficient
/// columns of V.
Matrix<NovikovScalar> kernel_mod(const Matrix<NovikovScalar>& a, const Rational& lambda);

/// Is x in the column span of G modulo T^lambda?
bool in_span_mod(const Matrix<NovikovScalar>& gens, const std::vector<NovikovScalar>& x,
                 const Rational& lambda);

/// Mutual-inclusion test of column spans modulo T^lambda.
bool same_span_mod(const Matrix<NovikovScalar>& g1, const Matrix<NovikovScalar>& g2,
                   const Rational& lambda);

}  // namespace novtel
