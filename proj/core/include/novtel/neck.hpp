#pragma once

#include <map>
#include <string>
#include <vector>

#include "novtel/ray.hpp"

namespace novtel {

/// Parameters of a neck Sigma x [1-alpha, s+alpha] with its profile function
/// f, matching function F(r) = s f(r/s) (suitably glued), and the rescaling
/// diffeomorphism g. All derived constants are exact rationals.
struct NeckParams {
    Rational alpha, s, eps, delta, c, K;
    Rational stilde;                 // (s + eps) / (1 + eps)
    Rational b, B, btilde, dtilde, Btilde;
    std::vector<Rational> reeb_periods;
};

/// Derives all constants and asserts admissibility; every violated inequality
/// is named in the ValidationError.
NeckParams build_neck(const Rational& alpha, const Rational& s, const Rational& eps,
                      const Rational& delta, const Rational& c, const Rational& K,
                      const std::vector<Rational>& reeb_periods);

Rational eval_profile(const NeckParams& p, const Rational& r);
Rational eval_matching(const NeckParams& p, const Rational& r);
Rational eval_g(const NeckParams& p, const Rational& r);

struct BoundsReport {
    bool ok = true;
    Rational end_inner;   // F(1-alpha) - f(1-alpha) = -(s-1)(delta + c(1-eps))
    Rational end_outer;   // F(s+alpha) - f(s+alpha) = (stilde-1)(delta - c(1+2eps))
    std::string witness;  // first violating (r, K) if any
};

/// Sweeps K and samples r in the two bump bands, checking |F(1-alpha) -
/// f(1-alpha)|, |F(s+alpha) - f(s+alpha)| and |F(g(r)) - f(r)| against C.
/// The end differences are also checked to be identical across the sweep.
BoundsReport check_bounds(const NeckParams& p, const Rational& C,
                          const std::vector<Rational>& k_sweep, int samples = 16);

struct OrbitDatum {
    enum class Kind { constant, nonconstant };
    enum class Region { inner, outer };

    Kind kind = Kind::constant;
    Region region = Region::inner;  // for constant orbits
    Rational r;                     // radius, for nonconstant orbits
    Rational period;                // Reeb period, for nonconstant orbits
    long cz = 0;
};

/// Energy shift Delta(gamma): the two constant-region constants, or
/// (F(g(r)) - f(r)) + P (g(r) - r) for a nonconstant orbit at radius r.
Rational delta_shift(const OrbitDatum& o, const NeckParams& p);

/// Rescaling isomorphism on an orbit-labeled ray: structure-map entries pick
/// up T^{Delta(out) - Delta(in)}, and Phi is the diagonal T^{Delta(gamma)}
/// (entries may leave the nonnegative ring; Phi lives in the field model).
std::pair<Ray, RayMorphism> apply_phi(const Ray& r,
                                      const std::map<std::string, OrbitDatum>& orbits,
                                      const NeckParams& p);

struct IndexTable {
    struct Entry {
        Rational min_period, max_period;
        std::size_t count = 0;
    };
    std::map<long, Entry> by_index;
    bool bounded = true;
    std::vector<long> flagged;  // indices whose count grew between the caps
};

IndexTable index_bounded_check(const std::vector<OrbitDatum>& orbits);

/// Growth probe: flags indices whose full period range lies below cap1 but
/// whose orbit count still grew at the larger cap.
IndexTable index_bounded_check(const std::vector<OrbitDatum>& at_cap1,
                               const std::vector<OrbitDatum>& at_cap2, const Rational& cap1);

struct PhiExtendsVerdict {
    bool extends = true;
    std::string detail;
    std::map<long, Rational> sup_delta;  // computed sup |Delta| per index class
};

/// Phi extends to the completions iff |Delta| is bounded on each index class;
/// when lambdas are supplied and the verdict is positive, equality of the
/// truncated barcodes of the two rays is asserted.
PhiExtendsVerdict phi_extends(const Ray& r, const Ray& rescaled,
                              const std::map<std::string, OrbitDatum>& orbits,
                              const NeckParams& p, const Rational& bound_a,
                              const IndexTable& table,
                              const std::vector<Rational>& lambdas = {});

/// Reeb orbits of the ellipsoid E(a_1..a_n) with period <= cap:
/// gamma_i^k has period k a_i and CZ = n - 1 + 2k + sum_{j != i}
/// (2 floor(k a_i / a_j) + 1). Sorted by period. Sets *degenerate when some
/// ratio k a_i / a_j (j != i) is integral within the cap.
std::vector<OrbitDatum> ellipsoid_orbits(const std::vector<Rational>& a, const Rational& cap,
                                         bool* degenerate = nullptr);

}  // namespace novtel
