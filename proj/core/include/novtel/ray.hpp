#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "novtel/complex.hpp"

namespace novtel {

/// Tail descriptor of a 1-ray: from the last prefix slice on, every slice is
/// C_N and every connecting map is the endomorphism phi.
enum class TailKind { Constant, PositiveShift, General };

struct Tail {
    ChainMap phi;  // endomorphism of the last prefix slice
    TailKind kind = TailKind::General;
    std::optional<Rational> delta;  // recorded valuation bound for PositiveShift
};

/// A 1-ray C_1 -> C_2 -> ... with finite prefix and eventually-periodic tail.
/// Slices are 0-based internally: slice(0) = C_1.
struct Ray {
    std::vector<GradedComplex> prefix;
    std::vector<ChainMap> prefix_maps;  // map(i): slice(i) -> slice(i+1)
    Tail tail;

    std::size_t slices() const { return prefix.size(); }
    const GradedComplex& slice(std::size_t i) const;
    ChainMap map(std::size_t i) const;  // phi beyond the prefix

    /// Checks shapes, chain-map identities, ring membership of phi, and the
    /// declared tail kind (Constant <=> phi invertible over the ring;
    /// PositiveShift <=> all entries have valuation >= delta > 0).
    void validate() const;

    /// The composite c_{to-1} o ... o c_{from} applied to a chain at slice
    /// `from` (0-based), landing at slice `to`.
    std::vector<NovikovScalar> push(std::size_t from, std::size_t to, int degree,
                                    const std::vector<NovikovScalar>& chain) const;

    /// One-generator ray in degree 0 with identity maps.
    static Ray unit();
    /// Constant ray on c with identity maps.
    static Ray constant(const GradedComplex& c);
};

/// Morphism of 1-rays: slice chain maps f_i with square-filling homotopies
/// h_i : C_i -> C'_{i+1} of degree -1. Data is stored up to `len()` slices and
/// repeats from there (both rays must be in their tails by then).
struct RayMorphism {
    Ray source, target;
    std::vector<ChainMap> f;
    std::vector<std::map<int, Matrix<NovikovScalar>>> h;  // h[i]: blocks per degree
    bool strict = false;

    std::size_t len() const { return f.size(); }
    const ChainMap& slice_map(std::size_t i) const;
    Matrix<NovikovScalar> h_block(std::size_t i, int degree) const;

    /// Checks c'_i f_i - f_{i+1} c_i = d h_i + h_i d for every slice through
    /// the periodic range; throws ValidationError naming the first bad slice.
    void validate() const;

    static RayMorphism identity(const Ray& r);
};

/// Homotopy between two morphisms m, m' with the same source and target:
/// slice homotopies k_i (degree -1) with m.f_i - m'.f_i = d k_i + k_i d, and
/// second-order components q_{i+1} : C_i -> C'_{i+1} (degree -2) with
///   c'_i k_i - k_{i+1} c_i - m.h_i + m'.h_i = d q_{i+1} - q_{i+1} d.
struct RayHomotopy {
    RayMorphism first, second;
    std::vector<std::map<int, Matrix<NovikovScalar>>> k;  // k[i]: C_i^n -> C'_i^{n-1}
    std::vector<std::map<int, Matrix<NovikovScalar>>> q;  // q[i]: C_i^n -> C'_{i+1}^{n-2}

    Matrix<NovikovScalar> k_block(std::size_t i, int degree) const;
    Matrix<NovikovScalar> q_block(std::size_t i, int degree) const;
    void validate() const;
};

RayMorphism compose(const RayMorphism& outer, const RayMorphism& inner);

/// Positions of the telescope summands of one total degree. The telescope of
/// the first M slices is  (+)_{i<M-1} C_i[1] (+) C_i  (+) C_{M-1}  (0-based i)
/// with internal d on C_i, -d on C_i[1], and edges y |-> y + c_i(y) out of the
/// shifted summands.
struct TelescopeLayout {
    struct Block {
        std::size_t slice;
        bool shifted;
        std::size_t rank, offset;
    };
    // per total degree: blocks in order (slice asc, shifted before plain)
    std::map<int, std::vector<Block>> blocks;

    static TelescopeLayout at(const Ray& r, std::size_t M);
    std::size_t offset(int degree, std::size_t slice, bool shifted) const;
};

GradedComplex telescope(const Ray& r, std::size_t M);

struct Strictification {
    Ray strict_ray;                     // F^1 -> F^2 -> ... inclusions
    std::vector<ChainMap> comparison;   // F^n -> C_n, signs (-1)^i per slice i
};
Strictification strictify(const Ray& r, std::size_t M);

/// Filtered colimit of the ray reduced mod T^lambda, with enough certificates
/// to project chains of the tail slice into the model. The quotient of C_N by
/// the stabilized kernel of phi^m must be free over the truncated ring;
/// otherwise UnsupportedError("tail not supported...").
class ColimitModel {
public:
    ColimitModel(const Ray& r, const Rational& lambda);

    const Rational& lambda() const { return lambda_; }
    /// Quotient complex; its d^2 vanishes mod T^lambda (use validate_mod).
    const GradedComplex& complex() const { return quotient_; }
    std::size_t tail_index() const { return tail_index_; }  // 0-based N-1

    /// Model coordinates of a chain in the tail slice C_N.
    std::vector<NovikovScalar> project(int degree, const std::vector<NovikovScalar>& chain) const;
    /// A chain in C_N representing the given model coordinates.
    std::vector<NovikovScalar> lift(int degree, const std::vector<NovikovScalar>& coords) const;

    /// Induced endomorphism on the model (invertible mod T^lambda) and its
    /// inverse; identifies consecutive tail copies in the colimit.
    Matrix<NovikovScalar> phi_bar(int degree) const;
    Matrix<NovikovScalar> phi_bar_inv(int degree) const;

    /// Generators of the stabilized kernel in C_N coordinates (columns).
    Matrix<NovikovScalar> kernel_generators(int degree) const;

private:
    struct DegreeData {
        Matrix<NovikovScalar> proj, liftm;  // selected Vinv rows / V columns
        Matrix<NovikovScalar> kernel;       // stabilized kernel generators
        Matrix<NovikovScalar> pbar, pbar_inv;
    };
    Rational lambda_;
    std::size_t tail_index_;
    GradedComplex quotient_;
    std::map<int, DegreeData> degs_;
};

GradedComplex colimit_mod(const Ray& r, const Rational& lambda);

Ray tensor_rays(const Ray& a, const Ray& b);

}  // namespace novtel
