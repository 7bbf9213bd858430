#pragma once

#include "novtel/completion.hpp"
#include "novtel/ray.hpp"

namespace novtel {

/// Unit data on a ray: closed degree-0 elements u_i with primitives p_{i+1}
/// witnessing c_i(u_i) = u_{i+1} + d(p_{i+1}). Stored up to the periodic
/// range and repeating from there.
struct UnitData {
    std::vector<std::vector<NovikovScalar>> u;  // u[i] in C_{i+1}^0
    std::vector<std::vector<NovikovScalar>> p;  // p[i] = p_{i+2} in C_{i+2}^{-1}

    std::vector<NovikovScalar> u_at(const Ray& r, std::size_t i) const;
    std::vector<NovikovScalar> p_at(const Ray& r, std::size_t i) const;  // primitive of square i

    static UnitData canonical(const Ray& unit_ray);
};

void validate_unit(const Ray& r, const UnitData& u);

/// Homotopy between two units of the same ray: h_i of degree -1 with
/// u_i - u*_i = d(h_i), and q_{i+1} of degree -2 with
/// c_i(h_i) = h_{i+1} + (p_{i+1} - p*_{i+1}) + d(q_{i+1}).
struct UnitHomotopy {
    std::vector<std::vector<NovikovScalar>> h;  // h[i] in C_{i+1}^{-1}
    std::vector<std::vector<NovikovScalar>> q;  // q[i] in C_{i+2}^{-2}

    std::vector<NovikovScalar> h_at(const Ray& r, std::size_t i) const;
    std::vector<NovikovScalar> q_at(const Ray& r, std::size_t i) const;
};

void validate_unit_homotopy(const Ray& r, const UnitData& a, const UnitData& b,
                            const UnitHomotopy& hh);

/// Class of u_N in the truncated homology.
std::vector<NovikovScalar> unit_class(const TruncatedHomology& th, const UnitData& u);

/// The morphism C -> C' (x) C with slice maps x |-> u_i (x) x and homotopy
/// components x |-> p_{i+1} (x) c_i(x).
RayMorphism unit_tensor_morphism(const Ray& cprime, const UnitData& u, const Ray& c);

/// A realization of f via prod: the composite C -> C' (x) C -> D is homotopic
/// to f through the recorded (k, q) data.
struct Realization {
    RayMorphism f;     // C -> D
    RayMorphism prod;  // C' (x) C -> D; source must equal tensor_rays(C', C)
    Ray cprime;
    Ray c;
    UnitData unit;  // on cprime
    std::vector<std::map<int, Matrix<NovikovScalar>>> k, q;
};

/// Throws ValidationError at the first failing slit identity.
void check_realization(const Realization& r);

struct UnitVisibility {
    bool unit_zero;  // no full-length component at the top scheduled lambda
    VisibilityVerdict vis;
};

/// Requires a validated realization whose f induces an isomorphism at every
/// scheduled lambda; asserts agreement of the unit verdict with visibility().
UnitVisibility visibility_via_unit(const Realization& r, const std::vector<Rational>& schedule);

/// Raised-level morphism: verticals T^eps * id, strict. Requires eps > 0.
RayMorphism raise(const Ray& r, const Rational& eps);

/// Product of classes through a pairing prod: A (x) B -> D. Representatives
/// are pushed to the larger slice, tensored, paired, and read off in the
/// colimit model of D.
std::vector<NovikovScalar> product_on_classes(const RayMorphism& prod, const Ray& a, const Ray& b,
                                              const SliceCycle& x, const SliceCycle& y,
                                              const TruncatedHomology& target);

/// Closed-open compatibility: the induced map sends the closed unit class to
/// the open unit class at precision lambda.
bool co_check(const RayMorphism& co, const UnitData& u_closed, const UnitData& u_open,
              const Rational& lambda);

}  // namespace novtel
