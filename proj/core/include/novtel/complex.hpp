#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "novtel/matrix.hpp"
#include "novtel/novikov.hpp"
#include "novtel/snf.hpp"

namespace novtel {

/// Z or Z/2 grading. Degrees of 2-periodic complexes are normalized to {0,1}.
struct Grading {
    bool mod2 = false;

    int normalize(int d) const { return mod2 ? ((d % 2) + 2) % 2 : d; }
    int next(int d) const { return normalize(d + 1); }
    int prev(int d) const { return normalize(d - 1); }
    bool operator==(const Grading&) const = default;
};

/// Finite-rank free graded cochain complex over the nonnegative Novikov ring.
/// Differentials raise degree by one.
class GradedComplex {
public:
    GradedComplex() = default;
    explicit GradedComplex(Grading g) : grading_(g) {}

    const Grading& grading() const { return grading_; }

    /// Adds a degree with the given generator labels (replaces existing).
    void set_generators(int degree, std::vector<std::string> labels);
    void set_differential(int degree, Matrix<NovikovScalar> d);

    std::size_t rank(int degree) const;
    const std::vector<std::string>& labels(int degree) const;
    /// d^n : C^n -> C^{n+1}; returns a zero matrix when absent.
    Matrix<NovikovScalar> d(int degree) const;

    /// Degrees with at least one generator, sorted.
    std::vector<int> degrees() const;
    std::size_t total_rank() const;

    /// Asserts d^2 == 0, entries in the ring, and shape consistency.
    /// Throws ValidationError naming the first offending degree/entry.
    void validate() const;

    /// A complex whose differential squares to zero only modulo T^lambda
    /// (colimit models); validate() accepts it when lambda is passed.
    void validate_mod(const Rational& lambda) const;

    bool operator==(const GradedComplex&) const = default;

private:
    Grading grading_;
    std::map<int, std::vector<std::string>> gens_;
    std::map<int, Matrix<NovikovScalar>> diff_;
};

/// A degreewise matrix commuting with the differentials exactly.
struct ChainMap {
    GradedComplex source, target;
    std::map<int, Matrix<NovikovScalar>> blocks;

    Matrix<NovikovScalar> block(int degree) const;
    /// Throws ValidationError at the first non-commuting degree.
    void validate() const;
    static ChainMap identity(const GradedComplex& c);
    static ChainMap scalar(const GradedComplex& c, const NovikovScalar& s);
    ChainMap compose(const ChainMap& inner) const;  // this o inner
    bool operator==(const ChainMap&) const = default;
};

/// Degree -1 maps h with f - g = d∘h + h∘d.
struct Homotopy {
    GradedComplex source, target;
    std::map<int, Matrix<NovikovScalar>> blocks;  // h^n : C^n -> C'^{n-1}

    Matrix<NovikovScalar> block(int degree) const;
    /// Checks f - g == d∘h + h∘d exactly.
    void validate(const ChainMap& f, const ChainMap& g) const;
};

/// Homology decomposition per degree: free rank (infinite or full bars) and a
/// multiset of positive torsion exponents (finite bars). A clipped barcode
/// carries its precision; its "free" bars mean length >= lambda.
struct Barcode {
    struct Degree {
        std::size_t free_rank = 0;
        std::vector<Rational> torsion;  // sorted ascending
        bool operator==(const Degree&) const = default;
        bool empty() const { return free_rank == 0 && torsion.empty(); }
    };
    std::map<int, Degree> degrees;
    std::optional<Rational> precision;

    bool empty() const;
    bool has_full_bar() const;
    /// Clips all bars at lambda (bars of length >= lambda become full bars).
    Barcode clip(const Rational& lambda) const;
    bool operator==(const Barcode&) const = default;
    std::string str() const;
};

GradedComplex shift(const GradedComplex& c, int k);
GradedComplex cone(const ChainMap& f);
GradedComplex tensor(const GradedComplex& a, const GradedComplex& b);
ChainMap tensor_maps(const ChainMap& f, const ChainMap& g);

/// Coordinates of (chain in a, degree dega) (x) (chain in b, degree degb)
/// inside degree dega+degb of tensor(a, b).
std::vector<NovikovScalar> tensor_chain(const GradedComplex& a, const GradedComplex& b, int dega,
                                        int degb, const std::vector<NovikovScalar>& x,
                                        const std::vector<NovikovScalar>& y);

/// Exact homology over the nonnegative ring via valuated Smith normal form.
Barcode homology_barcode(const GradedComplex& c);

/// True iff cone(f) has no infinite bar and (when lambda is finite) no finite
/// bar of length >= lambda.
bool is_quasi_iso(const ChainMap& f, const std::optional<Rational>& lambda = std::nullopt);

/// Homology of C x (ring mod T^lambda) with enough certificates kept to give
/// every cycle coordinates in the cyclic decomposition. Accepts complexes
/// whose d^2 vanishes only mod T^lambda.
class ModHomology {
public:
    ModHomology(const GradedComplex& c, const Rational& lambda);

    const Rational& lambda() const { return lambda_; }
    const Barcode& barcode() const { return barcode_; }

    /// Number of coordinate slots in the given degree (cyclic summands incl.
    /// dead ones; slot j is taken modulo T^{modulus(j)}).
    std::size_t slots(int degree) const;
    Rational modulus(int degree, std::size_t slot) const;

    /// Coordinates of the homology class of a mod-T^lambda cycle, reduced per
    /// slot modulus. Throws ValidationError if the chain is not a cycle.
    std::vector<NovikovScalar> class_of(int degree, const std::vector<NovikovScalar>& chain) const;

    bool class_is_zero(int degree, const std::vector<NovikovScalar>& coords) const;
    bool classes_equal(int degree, const std::vector<NovikovScalar>& a,
                       const std::vector<NovikovScalar>& b) const;

    /// A chain representative for each slot's generator (slot -> cycle).
    std::vector<NovikovScalar> representative(int degree, std::size_t slot) const;

private:
    struct DegreeData {
        Diagonalization<NovikovScalar> dn;   // snf of d^n mod lambda
        std::vector<std::size_t> gen_idx;    // kernel generator coordinates
        std::vector<Rational> gen_shift;     // generator i is T^{shift} * V col
        Diagonalization<NovikovScalar> rel;  // snf of [image coords | internal]
        std::vector<Rational> moduli;        // per slot
        std::size_t chain_rank = 0;
    };
    Rational lambda_;
    GradedComplex cx_;
    std::map<int, DegreeData> degs_;
    Barcode barcode_;
};

}  // namespace novtel
