#pragma once

#include <string>
#include <vector>

#include "novtel/ray.hpp"

namespace novtel {

/// A cycle carried at a specific slice of a ray (0-based slice index).
struct SliceCycle {
    int degree = 0;
    std::size_t slice = 0;
    std::vector<NovikovScalar> chain;
};

/// Homology of the completed telescope at precision lambda, computed through
/// the colimit model: for degreewise-free complexes, completion-then-truncation
/// equals truncation, and the mod-T^lambda telescope retracts onto the model.
class TruncatedHomology {
public:
    TruncatedHomology(const Ray& r, const Rational& lambda);

    const Rational& lambda() const { return model_.lambda(); }
    const Ray& ray() const { return ray_; }
    const ColimitModel& model() const { return model_; }
    const ModHomology& homology() const { return hom_; }
    const Barcode& barcode() const { return hom_.barcode(); }

    /// Class coordinates of a cycle carried at any slice.
    std::vector<NovikovScalar> class_of(const SliceCycle& z) const;
    /// A model chain representing the given class coordinates.
    std::vector<NovikovScalar> chain_rep(int degree, const std::vector<NovikovScalar>& coords) const;

    bool classes_equal(int degree, const std::vector<NovikovScalar>& a,
                       const std::vector<NovikovScalar>& b) const {
        return hom_.classes_equal(degree, a, b);
    }
    bool class_is_zero(int degree, const std::vector<NovikovScalar>& coords) const {
        return hom_.class_is_zero(degree, coords);
    }
    /// True iff the class has a nonzero coordinate in a full-length slot —
    /// i.e. it survives into the field model at this precision.
    bool class_has_full_component(int degree, const std::vector<NovikovScalar>& coords) const;

private:
    Ray ray_;
    ColimitModel model_;
    ModHomology hom_;
};

/// Barcode of H(tel(R) (x) ring/T^lambda), bars clipped at lambda.
Barcode truncated_homology(const Ray& r, const Rational& lambda);

/// Independent oracle: assembles the literal finite telescope over
/// ring/T^lambda and eliminates directly. For PositiveShift tails the
/// telescope is chopped (the ray is extended by zero after slice M), matching
/// the acyclicity of the discarded tail telescope; Constant and General tails
/// use the plain M-slice telescope.
Barcode brute_force_telescope_homology(const Ray& r, std::size_t M, const Rational& lambda,
                                       std::size_t max_rank = 4096);

struct VisibilityVerdict {
    enum class Kind { visible_at_top, invisible_at_top, certified_invisible, certified_visible };

    std::vector<Rational> schedule;
    std::vector<Barcode> barcodes;      // clipped, one per scheduled lambda
    std::vector<bool> visible_at;       // flagged full bar present at that lambda
    Kind verdict = Kind::invisible_at_top;
    std::string certificate;

    bool certified() const {
        return verdict == Kind::certified_invisible || verdict == Kind::certified_visible;
    }
    std::string verdict_str() const;
};

VisibilityVerdict visibility(const Ray& r, const std::vector<Rational>& schedule);

/// Map induced on truncated homologies through the colimit models. Requires
/// the morphism to descend (f maps the stabilized kernel into the stabilized
/// kernel); otherwise UnsupportedError.
class InducedMap {
public:
    InducedMap(const RayMorphism& m, const Rational& lambda);

    const TruncatedHomology& source() const { return src_; }
    const TruncatedHomology& target() const { return tgt_; }

    /// Chain-level map between the colimit models.
    Matrix<NovikovScalar> chain_block(int degree) const;
    /// Slot-coordinate matrix on homology classes.
    Matrix<NovikovScalar> slot_block(int degree) const;

    std::vector<NovikovScalar> apply(int degree, const std::vector<NovikovScalar>& coords) const;

    /// Equal clipped barcodes and an invertible slot matrix in every degree.
    bool is_isomorphism() const;

private:
    TruncatedHomology src_, tgt_;
    std::map<int, Matrix<NovikovScalar>> chain_, slots_;
};

/// Finitely presented module map over ring/T^lambda: source and target are
/// (+)_i R/T^{m_i} with the listed slot moduli, f acts on slot coordinates.
struct ModuleMap {
    std::vector<Rational> src_moduli, tgt_moduli;
    Matrix<NovikovScalar> f;
};

/// Verifies im = ker at each interior node of the composable sequence.
/// Returns -1 on success, else the 0-based index of the first failing node
/// (node k sits between maps k and k+1).
int exactness_check(const std::vector<ModuleMap>& seq, const Rational& lambda);

}  // namespace novtel
