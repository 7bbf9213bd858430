#include <doctest.h>

#include "helpers.hpp"

using namespace testutil;

namespace {

NovikovFraction det(const Matrix<NovikovFraction>& m) {
    const std::size_t n = m.rows();
    if (n == 1) return m(0, 0);
    NovikovFraction out;
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<std::size_t> rows, cols;
        for (std::size_t i = 1; i < n; ++i) rows.push_back(i);
        for (std::size_t k = 0; k < n; ++k)
            if (k != j) cols.push_back(k);
        auto minor = det(m.submatrix_rows(rows).submatrix_cols(cols));
        auto term = m(0, j) * minor;
        out = (j % 2 == 0) ? out + term : out - term;
    }
    return out;
}

Matrix<NovikovFraction> frac(const Matrix<NovikovScalar>& m) {
    return m.map([](const NovikovScalar& s) { return NovikovFraction(s); });
}

}  // namespace

TEST_CASE("invariant factors on pinned inputs") {
    Matrix<NovikovScalar> a(2, 2);
    a(0, 0) = sc("T");
    a(1, 1) = sc("1");
    auto d = snf_exact(a);
    CHECK(d.exps == std::vector<Rational>{rat(0), rat(1)});

    auto b = mat(2, 2, {"T", "1", "0", "T"});
    d = snf_exact(b);
    CHECK(d.exps == std::vector<Rational>{rat(0), rat(2)});

    Matrix<NovikovScalar> z(3, 2);
    d = snf_exact(z);
    CHECK(d.rank == 0);
    CHECK(d.exps.empty());
}

TEST_CASE("certificates verify and factor valuations are non-decreasing") {
    Rng rng(23);
    for (int it = 0; it < 60; ++it) {
        const std::size_t r = static_cast<std::size_t>(rng.uniform(1, it % 5 == 0 ? 4 : 3));
        const std::size_t c = static_cast<std::size_t>(rng.uniform(1, it % 5 == 0 ? 4 : 3));
        // multi-term entries only at the small sizes; dense 4x4 inputs use
        // monomials to keep exact-fraction certificates tractable
        const auto a = rng.matrix(r, c, (r > 3 || c > 3) ? 1 : 2);
        const auto d = snf_exact(a);
        CHECK(verify_diagonalization(a, d));
        for (std::size_t i = 0; i + 1 < d.exps.size(); ++i) CHECK(d.exps[i] <= d.exps[i + 1]);
        CHECK(d.U * d.Uinv == Matrix<NovikovFraction>::identity(r));
        CHECK(d.V * d.Vinv == Matrix<NovikovFraction>::identity(c));
    }
}

TEST_CASE("product of invariant factors = determinant valuation (full-rank square)") {
    Rng rng(29);
    int done = 0;
    while (done < 30) {
        const std::size_t n = static_cast<std::size_t>(rng.uniform(1, 3));
        const auto a = rng.matrix(n, n, 1);
        const auto dv = det(frac(a)).valuation();
        if (!dv) continue;
        const auto d = snf_exact(a);
        REQUIRE(d.rank == n);
        Rational sum = 0;
        for (const auto& e : d.exps) sum += e;
        CHECK(sum == *dv);
        ++done;
    }
}

TEST_CASE("mod-lambda elimination matches exact elimination below lambda") {
    Rng rng(31);
    const Rational lambda = rat(2);
    for (int it = 0; it < 40; ++it) {
        const std::size_t r = static_cast<std::size_t>(rng.uniform(1, 4));
        const std::size_t c = static_cast<std::size_t>(rng.uniform(1, 4));
        const auto a = rng.matrix(r, c);
        const auto dm = snf_mod(a, lambda);
        // U A V == D mod T^lambda
        const auto lhs = (dm.U * a * dm.V)
                             .map([&](const NovikovScalar& s) { return s.truncate(lambda); });
        const auto rhs =
            dm.D.map([&](const NovikovScalar& s) { return s.truncate(lambda); });
        CHECK(lhs == rhs);
        // same invariant factors below lambda as the exact elimination
        const auto de = snf_exact(a);
        std::vector<Rational> small;
        for (const auto& e : de.exps)
            if (e < lambda) small.push_back(e);
        CHECK(dm.exps == small);
    }
}

TEST_CASE("kernel generators annihilate mod lambda and span the kernel") {
    Rng rng(37);
    const Rational lambda = rat(2);
    for (int it = 0; it < 40; ++it) {
        const std::size_t r = static_cast<std::size_t>(rng.uniform(1, 3));
        const std::size_t c = static_cast<std::size_t>(rng.uniform(1, 3));
        const auto a = rng.matrix(r, c);
        const auto k = kernel_mod(a, lambda);
        const auto prod = a * k;
        for (std::size_t i = 0; i < prod.rows(); ++i)
            for (std::size_t j = 0; j < prod.cols(); ++j)
                CHECK(prod(i, j).truncate(lambda).is_zero());
        // every random combination that annihilates lies in the span
        for (int t = 0; t < 3; ++t) {
            std::vector<NovikovScalar> v(c);
            for (std::size_t j = 0; j < c; ++j)
                v[j] = rng.scalar(1).shift(rat(1), lambda);  // T^lambda * anything == 0
            CHECK(in_span_mod(k, v, lambda));
        }
        CHECK(same_span_mod(k, k, lambda));
    }
}

TEST_CASE("span membership") {
    const Rational lambda = rat(1);
    auto g = mat(2, 1, {"1", "T^(1/2)"});
    CHECK(in_span_mod(g, {sc("T^(1/3)"), sc("T^(5/6)")}, lambda));
    CHECK_FALSE(in_span_mod(g, {sc("0"), sc("1")}, lambda));
    auto g2 = mat(2, 2, {"1", "0", "T^(1/2)", "T^(3/4)"});
    CHECK_FALSE(same_span_mod(g, g2, lambda));
}
