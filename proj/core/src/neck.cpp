#include "novtel/neck.hpp"

#include <algorithm>

#include "novtel/completion.hpp"
#include "novtel/errors.hpp"

namespace novtel {

namespace {

// Fixed monotone bump template: quintic smoothstep on [0, 1], rational at
// rational points.
Rational smoothstep(const Rational& t) {
    if (t <= 0) return rat(0);
    if (t >= 1) return rat(1);
    const Rational t3 = t * t * t;
    return 6 * t3 * t * t - 15 * t3 * t + 10 * t3;
}

Rational affine(const Rational& x0, const Rational& y0, const Rational& x1, const Rational& y1,
                const Rational& x) {
    return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

}  // namespace

NeckParams build_neck(const Rational& alpha, const Rational& s, const Rational& eps,
                      const Rational& delta, const Rational& c, const Rational& K,
                      const std::vector<Rational>& reeb_periods) {
    auto fail = [](const std::string& what) { throw ValidationError("neck: " + what); };
    if (!(alpha > 0)) fail("alpha > 0 violated");
    if (!(s > 1)) fail("s > 1 violated");
    if (!(eps > 0 && eps < alpha && eps < s)) fail("0 < eps < min(alpha, s) violated");
    if (!(delta > 0)) fail("delta > 0 violated");
    if (!(c > 0)) fail("c > 0 violated");
    if (!(K > 0)) fail("K > 0 violated");

    NeckParams p;
    p.alpha = alpha;
    p.s = s;
    p.eps = eps;
    p.delta = delta;
    p.c = c;
    p.K = K;
    p.reeb_periods = reeb_periods;
    p.stilde = (s + eps) / (1 + eps);
    if (p.stilde * (1 + eps) - s != eps) fail("defining relation eps = stilde(1+eps) - s broken");
    p.b = -delta - c * (1 - eps);
    p.B = K * eps + delta - c * (1 + 2 * eps);
    p.btilde = -s * delta - c * s * (1 - eps);
    p.dtilde = K * eps * (1 - p.stilde);
    p.Btilde = K * eps + p.stilde * delta - c * p.stilde * (1 + 2 * eps);

    for (const auto& t : reeb_periods) {
        if (K == t) fail("K equals the Reeb period " + to_string(t));
        if (!(c < t)) fail("c >= Reeb period " + to_string(t));
    }
    // slope admissibility: (s-1+alpha) c < -(c(1-alpha)+b) and
    // c(1-alpha)+b+eps > 0
    const Rational f_inner = c * (1 - alpha) + p.b;  // = f(1-alpha) < 0
    if (!((s - 1 + alpha) * c < -f_inner))
        fail("(s-1+alpha)c < -(c(1-alpha)+b) violated");
    if (!(f_inner + eps > 0)) fail("c(1-alpha)+b+eps > 0 violated");
    // g must be increasing through its breakpoints
    if (!(1 - alpha < s * (1 - eps))) fail("g not monotone: 1-alpha >= s(1-eps)");
    if (!(p.stilde * (1 + 2 * eps) < s + alpha))
        fail("g not monotone: stilde(1+2eps) >= s+alpha");
    if (!(1 + 2 * eps < s + alpha)) fail("profile domain: 1+2eps >= s+alpha");
    return p;
}

Rational eval_profile(const NeckParams& p, const Rational& r) {
    if (r < 1 - p.alpha || r > p.s + p.alpha)
        throw ValidationError("profile argument outside [1-alpha, s+alpha]");
    if (r <= 1 - p.eps) return p.c * r + p.b;
    if (r <= 1) return -p.delta + p.delta * smoothstep((r - (1 - p.eps)) / p.eps);
    if (r <= 1 + p.eps) return p.K * r - p.K;
    if (r <= 1 + 2 * p.eps)
        return p.K * p.eps + p.delta * smoothstep((r - (1 + p.eps)) / p.eps);
    return p.c * r + p.B;
}

Rational eval_matching(const NeckParams& p, const Rational& r) {
    if (r < 1 - p.alpha || r > p.s + p.alpha)
        throw ValidationError("matching argument outside [1-alpha, s+alpha]");
    if (r <= p.s * (1 - p.eps)) return p.c * r + p.btilde;
    if (r <= p.s) return p.s * eval_profile(p, r / p.s);
    if (r <= p.stilde * (1 + p.eps)) return p.K * r - p.K * p.s;
    if (r <= p.stilde * (1 + 2 * p.eps))
        return p.stilde * eval_profile(p, r / p.stilde) + p.dtilde;
    return p.c * r + p.Btilde;
}

Rational eval_g(const NeckParams& p, const Rational& r) {
    if (r < 1 - p.alpha || r > p.s + p.alpha)
        throw ValidationError("g argument outside [1-alpha, s+alpha]");
    if (r <= 1 - p.eps)
        return affine(1 - p.alpha, 1 - p.alpha, 1 - p.eps, p.s * (1 - p.eps), r);
    if (r <= 1) return p.s * r;
    if (r <= 1 + p.eps) return affine(rat(1), p.s, 1 + p.eps, p.stilde * (1 + p.eps), r);
    if (r <= 1 + 2 * p.eps) return p.stilde * r;
    return affine(1 + 2 * p.eps, p.stilde * (1 + 2 * p.eps), p.s + p.alpha, p.s + p.alpha, r);
}

BoundsReport check_bounds(const NeckParams& p, const Rational& C,
                          const std::vector<Rational>& k_sweep, int samples) {
    BoundsReport rep;
    rep.end_inner = -(p.s - 1) * (p.delta + p.c * (1 - p.eps));
    rep.end_outer = (p.stilde - 1) * (p.delta - p.c * (1 + 2 * p.eps));
    auto abs = [](const Rational& x) { return x < 0 ? Rational(-x) : x; };
    for (const auto& k : k_sweep) {
        NeckParams q = build_neck(p.alpha, p.s, p.eps, p.delta, p.c, k, p.reeb_periods);
        const Rational inner =
            eval_matching(q, 1 - q.alpha) - eval_profile(q, 1 - q.alpha);
        const Rational outer =
            eval_matching(q, q.s + q.alpha) - eval_profile(q, q.s + q.alpha);
        if (inner != rep.end_inner || outer != rep.end_outer) {
            rep.ok = false;
            rep.witness = "end difference depends on K = " + to_string(k);
            return rep;
        }
        if (!(abs(inner) < C) || !(abs(outer) < C)) {
            rep.ok = false;
            rep.witness = "end difference exceeds C at K = " + to_string(k);
            return rep;
        }
        const Rational bands[2][2] = {{1 - q.eps, rat(1)}, {1 + q.eps, 1 + 2 * q.eps}};
        for (const auto& band : bands)
            for (int j = 0; j <= samples; ++j) {
                const Rational r = band[0] + (band[1] - band[0]) * rat(j, samples);
                const Rational d = eval_matching(q, eval_g(q, r)) - eval_profile(q, r);
                if (!(abs(d) < C)) {
                    rep.ok = false;
                    rep.witness = "|F(g(r)) - f(r)| >= C at r = " + to_string(r) +
                                  ", K = " + to_string(k);
                    return rep;
                }
            }
    }
    return rep;
}

Rational delta_shift(const OrbitDatum& o, const NeckParams& p) {
    if (o.kind == OrbitDatum::Kind::constant) {
        if (o.region == OrbitDatum::Region::inner)
            return eval_matching(p, 1 - p.alpha) - eval_profile(p, 1 - p.alpha);
        return eval_matching(p, p.s + p.alpha) - eval_profile(p, p.s + p.alpha);
    }
    const bool in_band = (o.r >= 1 - p.eps && o.r <= 1) ||
                         (o.r >= 1 + p.eps && o.r <= 1 + 2 * p.eps);
    if (!in_band)
        throw ValidationError("nonconstant orbit radius " + to_string(o.r) +
                              " outside the declared bands");
    if (!(o.period > 0)) throw ValidationError("nonconstant orbit needs a positive period");
    const Rational gr = eval_g(p, o.r);
    return (eval_matching(p, gr) - eval_profile(p, o.r)) + o.period * (gr - o.r);
}

namespace {

std::vector<Rational> label_shifts(const GradedComplex& c, int degree,
                                   const std::map<std::string, OrbitDatum>& orbits,
                                   const NeckParams& p) {
    std::vector<Rational> out;
    for (const auto& l : c.labels(degree)) {
        auto it = orbits.find(l);
        if (it == orbits.end())
            throw ValidationError("generator '" + l + "' carries no orbit datum");
        out.push_back(delta_shift(it->second, p));
    }
    return out;
}

Matrix<NovikovScalar> conjugate(const Matrix<NovikovScalar>& m,
                                const std::vector<Rational>& out_shift,
                                const std::vector<Rational>& in_shift) {
    Matrix<NovikovScalar> r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (m(i, j).is_zero()) continue;
            r(i, j) = m(i, j).shift(rat(1), out_shift[i] - in_shift[j]);
            if (!r(i, j).in_ring())
                throw ValidationError(
                    "rescaled entry leaves the nonnegative ring: Delta(out) - Delta(in) + E_top "
                    "< 0");
        }
    return r;
}

}  // namespace

std::pair<Ray, RayMorphism> apply_phi(const Ray& r,
                                      const std::map<std::string, OrbitDatum>& orbits,
                                      const NeckParams& p) {
    r.validate();
    const Grading& gr = r.slice(0).grading();
    Ray out;
    auto shifts_of = [&](const GradedComplex& c) {
        std::map<int, std::vector<Rational>> s;
        for (int n : c.degrees()) s[n] = label_shifts(c, n, orbits, p);
        return s;
    };
    std::vector<std::map<int, std::vector<Rational>>> shifts;
    for (std::size_t i = 0; i < r.slices(); ++i) {
        const GradedComplex& c = r.slice(i);
        auto sh = shifts_of(c);
        GradedComplex nc(gr);
        for (int n : c.degrees()) nc.set_generators(n, c.labels(n));
        for (int n : c.degrees()) {
            if (!sh.count(gr.next(n))) continue;
            nc.set_differential(n, conjugate(c.d(n), sh[gr.next(n)], sh[n]));
        }
        out.prefix.push_back(std::move(nc));
        shifts.push_back(std::move(sh));
    }
    for (std::size_t i = 0; i + 1 < r.slices(); ++i) {
        ChainMap m{out.prefix[i], out.prefix[i + 1], {}};
        for (int n : r.slice(i).degrees())
            m.blocks[n] = conjugate(r.map(i).block(n), shifts[i + 1][n], shifts[i][n]);
        out.prefix_maps.push_back(std::move(m));
    }
    {
        auto& sh = shifts.back();
        ChainMap phi{out.prefix.back(), out.prefix.back(), {}};
        for (int n : r.slice(r.slices() - 1).degrees())
            phi.blocks[n] = conjugate(r.tail.phi.block(n), sh[n], sh[n]);
        out.tail.phi = std::move(phi);
        out.tail.kind = r.tail.kind;
        out.tail.delta = r.tail.delta;
        if (out.tail.kind == TailKind::PositiveShift) {
            // entries moved; recompute the certified bound
            std::optional<Rational> dmin;
            for (int n : r.slice(r.slices() - 1).degrees()) {
                const auto& b = out.tail.phi.block(n);
                for (std::size_t i = 0; i < b.rows(); ++i)
                    for (std::size_t j = 0; j < b.cols(); ++j)
                        if (!b(i, j).is_zero()) {
                            const Rational v = *b(i, j).valuation();
                            if (!dmin || v < *dmin) dmin = v;
                        }
            }
            if (dmin && *dmin > 0)
                out.tail.delta = *dmin;
            else if (dmin)
                out.tail.kind = TailKind::General;
        }
    }
    out.validate();

    RayMorphism phi;
    phi.source = r;
    phi.target = out;
    for (std::size_t i = 0; i < r.slices(); ++i) {
        ChainMap m{r.slice(i), out.prefix[i], {}};
        for (int n : r.slice(i).degrees()) {
            const auto& sh = shifts[i][n];
            Matrix<NovikovScalar> b(sh.size(), sh.size());
            for (std::size_t j = 0; j < sh.size(); ++j)
                b(j, j) = NovikovScalar::monomial(rat(1), sh[j]);
            m.blocks[n] = std::move(b);
        }
        phi.f.push_back(std::move(m));
    }
    phi.strict = true;
    phi.validate();
    return {std::move(out), std::move(phi)};
}

IndexTable index_bounded_check(const std::vector<OrbitDatum>& orbits) {
    IndexTable t;
    for (const auto& o : orbits) {
        auto [it, fresh] = t.by_index.try_emplace(o.cz, IndexTable::Entry{o.period, o.period, 0});
        if (!fresh) {
            it->second.min_period = std::min(it->second.min_period, o.period);
            it->second.max_period = std::max(it->second.max_period, o.period);
        }
        ++it->second.count;
    }
    return t;
}

IndexTable index_bounded_check(const std::vector<OrbitDatum>& at_cap1,
                               const std::vector<OrbitDatum>& at_cap2, const Rational& cap1) {
    IndexTable t1 = index_bounded_check(at_cap1);
    IndexTable t2 = index_bounded_check(at_cap2);
    for (const auto& [cz, e1] : t1.by_index) {
        if (!(e1.max_period < cap1)) continue;  // range not resolved at the small cap
        auto it = t2.by_index.find(cz);
        if (it != t2.by_index.end() && it->second.count != e1.count) {
            t1.bounded = false;
            t1.flagged.push_back(cz);
        }
    }
    // indices appearing only beyond cap1 are fine; indices growing without a
    // resolved range are flagged too
    for (const auto& [cz, e2] : t2.by_index) {
        auto it = t1.by_index.find(cz);
        if (it != t1.by_index.end() && !(it->second.max_period < cap1) &&
            e2.count > 2 * it->second.count) {
            t1.bounded = false;
            t1.flagged.push_back(cz);
        }
    }
    std::sort(t1.flagged.begin(), t1.flagged.end());
    t1.flagged.erase(std::unique(t1.flagged.begin(), t1.flagged.end()), t1.flagged.end());
    return t1;
}

PhiExtendsVerdict phi_extends(const Ray& r, const Ray& rescaled,
                              const std::map<std::string, OrbitDatum>& orbits,
                              const NeckParams& p, const Rational& bound_a,
                              const IndexTable& table, const std::vector<Rational>& lambdas) {
    PhiExtendsVerdict v;
    auto abs = [](const Rational& x) { return x < 0 ? Rational(-x) : x; };
    const Rational c0 =
        std::max(abs(eval_matching(p, 1 - p.alpha) - eval_profile(p, 1 - p.alpha)),
                 abs(eval_matching(p, p.s + p.alpha) - eval_profile(p, p.s + p.alpha)));
    if (!table.bounded) {
        v.extends = false;
        v.detail = "unbounded index class";
        for (long cz : table.flagged) v.detail += " " + std::to_string(cz);
        return v;
    }
    for (const auto& [label, o] : orbits) {
        const Rational d = abs(delta_shift(o, p));
        auto [it, fresh] = v.sup_delta.try_emplace(o.cz, d);
        if (!fresh) it->second = std::max(it->second, d);
        const Rational period = o.kind == OrbitDatum::Kind::constant ? rat(0) : o.period;
        if (!(d <= bound_a * period + c0)) {
            v.extends = false;
            v.detail = "orbit '" + label + "' violates |Delta| <= a*period + C";
            return v;
        }
    }
    v.detail = "Delta bounded on every index class";
    if (v.extends)
        for (const auto& lam : lambdas)
            if (!(truncated_homology(r, lam) == truncated_homology(rescaled, lam)))
                throw std::logic_error(
                    "rescaled ray has a different truncated barcode at lambda = " +
                    to_string(lam));
    return v;
}

std::vector<OrbitDatum> ellipsoid_orbits(const std::vector<Rational>& a, const Rational& cap,
                                         bool* degenerate) {
    for (const auto& ai : a)
        if (!(ai > 0)) throw ValidationError("ellipsoid factors must be positive");
    if (degenerate) *degenerate = false;
    const long n = static_cast<long>(a.size());
    std::vector<OrbitDatum> out;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (long k = 1; rat(k) * a[i] <= cap; ++k) {
            OrbitDatum o;
            o.kind = OrbitDatum::Kind::nonconstant;
            o.r = rat(1);
            o.period = rat(k) * a[i];
            long cz = n - 1 + 2 * k;
            for (std::size_t j = 0; j < a.size(); ++j) {
                if (j == i) continue;
                const Rational q = rat(k) * a[i] / a[j];
                if (q.get_den() == 1 && degenerate) *degenerate = true;
                cz += 2 * floor_long(q) + 1;
            }
            o.cz = cz;
            out.push_back(o);
        }
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const OrbitDatum& x, const OrbitDatum& y) { return x.period < y.period; });
    return out;
}

}  // namespace novtel
