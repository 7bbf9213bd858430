#include "novtel/unital.hpp"

#include <algorithm>

#include "novtel/errors.hpp"

namespace novtel {

namespace {

std::vector<NovikovScalar> zero_chain(std::size_t n) { return std::vector<NovikovScalar>(n); }

std::vector<NovikovScalar> sub(std::vector<NovikovScalar> a,
                               const std::vector<NovikovScalar>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
}

bool is_zero_chain(const std::vector<NovikovScalar>& a) {
    return std::all_of(a.begin(), a.end(), [](const NovikovScalar& s) { return s.is_zero(); });
}

}  // namespace

std::vector<NovikovScalar> UnitData::u_at(const Ray& r, std::size_t i) const {
    if (u.empty()) throw ValidationError("unit with no elements");
    if (i < u.size()) return u[i];
    return u.back();
}

std::vector<NovikovScalar> UnitData::p_at(const Ray& r, std::size_t i) const {
    if (i < p.size()) return p[i];
    if (!p.empty()) return p.back();
    return zero_chain(r.slice(i + 1).rank(-1));
}

UnitData UnitData::canonical(const Ray& unit_ray) {
    UnitData d;
    d.u.push_back({NovikovScalar::one()});
    (void)unit_ray;
    return d;
}

void validate_unit(const Ray& r, const UnitData& u) {
    const std::size_t L = std::max({u.u.size(), u.p.size() + 1, r.slices()});
    const Grading& gr = r.slice(0).grading();
    for (std::size_t i = 0; i < L; ++i) {
        auto ui = u.u_at(r, i);
        if (ui.size() != r.slice(i).rank(0))
            throw ValidationError("unit element has wrong rank at slice " + std::to_string(i + 1));
        if (!is_zero_chain(r.slice(i).d(0).apply(ui)))
            throw ValidationError("unit element is not closed at slice " + std::to_string(i + 1));
        // c_i(u_i) = u_{i+1} + d(p_{i+1})
        auto lhs = r.map(i).block(0).apply(ui);
        auto rhs = u.u_at(r, i + 1);
        auto pi = u.p_at(r, i);
        if (pi.size() != r.slice(i + 1).rank(gr.prev(0)))
            throw ValidationError("unit primitive has wrong rank at slice " + std::to_string(i + 2));
        auto dp = r.slice(i + 1).d(gr.prev(0)).apply(pi);
        for (std::size_t j = 0; j < rhs.size(); ++j) rhs[j] += dp[j];
        if (!is_zero_chain(sub(lhs, rhs)))
            throw ValidationError("unit transport identity fails at slice " +
                                  std::to_string(i + 1));
    }
}

std::vector<NovikovScalar> UnitHomotopy::h_at(const Ray& r, std::size_t i) const {
    if (i < h.size()) return h[i];
    if (!h.empty()) return h.back();
    return zero_chain(r.slice(i).rank(-1));
}

std::vector<NovikovScalar> UnitHomotopy::q_at(const Ray& r, std::size_t i) const {
    if (i < q.size()) return q[i];
    if (!q.empty()) return q.back();
    return zero_chain(r.slice(i + 1).rank(-2));
}

void validate_unit_homotopy(const Ray& r, const UnitData& a, const UnitData& b,
                            const UnitHomotopy& hh) {
    const std::size_t L = std::max({a.u.size(), b.u.size(), hh.h.size(), hh.q.size() + 1,
                                    r.slices()});
    const Grading& gr = r.slice(0).grading();
    for (std::size_t i = 0; i < L; ++i) {
        // u_i - u*_i = d(h_i)
        auto lhs = sub(a.u_at(r, i), b.u_at(r, i));
        auto dh = r.slice(i).d(gr.prev(0)).apply(hh.h_at(r, i));
        if (!is_zero_chain(sub(lhs, dh)))
            throw ValidationError("unit-homotopy primitive identity fails at slice " +
                                  std::to_string(i + 1));
        // c_i(h_i) = h_{i+1} + (p_{i+1} - p*_{i+1}) + d(q_{i+1})
        auto l2 = r.map(i).block(gr.prev(0)).apply(hh.h_at(r, i));
        auto r2 = hh.h_at(r, i + 1);
        auto pa = a.p_at(r, i), pb = b.p_at(r, i);
        for (std::size_t j = 0; j < r2.size(); ++j) r2[j] += pa[j] - pb[j];
        auto dq = r.slice(i + 1).d(gr.prev(gr.prev(0))).apply(hh.q_at(r, i));
        for (std::size_t j = 0; j < r2.size(); ++j) r2[j] += dq[j];
        if (!is_zero_chain(sub(l2, r2)))
            throw ValidationError("unit-homotopy transport identity fails at slice " +
                                  std::to_string(i + 1));
    }
}

std::vector<NovikovScalar> unit_class(const TruncatedHomology& th, const UnitData& u) {
    const std::size_t n = th.model().tail_index();
    return th.class_of({0, n, u.u_at(th.ray(), n)});
}

RayMorphism unit_tensor_morphism(const Ray& cprime, const UnitData& u, const Ray& c) {
    RayMorphism m;
    m.source = c;
    m.target = tensor_rays(cprime, c);
    const Grading& gr = c.slice(0).grading();
    const std::size_t L = std::max({cprime.slices(), c.slices(), u.u.size(), u.p.size() + 1});
    for (std::size_t i = 0; i < L; ++i) {
        ChainMap fi{c.slice(i), m.target.slice(i), {}};
        auto ui = u.u_at(cprime, i);
        for (int n : c.slice(i).degrees()) {
            Matrix<NovikovScalar> b(m.target.slice(i).rank(n), c.slice(i).rank(n));
            for (std::size_t j = 0; j < c.slice(i).rank(n); ++j) {
                std::vector<NovikovScalar> e(c.slice(i).rank(n));
                e[j] = NovikovScalar::one();
                auto t = tensor_chain(cprime.slice(i), c.slice(i), 0, n, ui, e);
                for (std::size_t r = 0; r < t.size(); ++r) b(r, j) = t[r];
            }
            fi.blocks[n] = std::move(b);
        }
        m.f.push_back(std::move(fi));
        std::map<int, Matrix<NovikovScalar>> hi;
        auto pi = u.p_at(cprime, i);
        if (!is_zero_chain(pi)) {
            for (int n : c.slice(i).degrees()) {
                Matrix<NovikovScalar> b(m.target.slice(i + 1).rank(gr.prev(n)),
                                        c.slice(i).rank(n));
                for (std::size_t j = 0; j < c.slice(i).rank(n); ++j) {
                    std::vector<NovikovScalar> e(c.slice(i).rank(n));
                    e[j] = NovikovScalar::one();
                    auto cx = c.map(i).block(n).apply(e);
                    auto t = tensor_chain(cprime.slice(i + 1), c.slice(i + 1), -1, n, pi, cx);
                    for (std::size_t r = 0; r < t.size(); ++r) b(r, j) = t[r];
                }
                if (!b.is_zero()) hi[n] = std::move(b);
            }
        }
        m.h.push_back(std::move(hi));
    }
    m.strict = std::all_of(m.h.begin(), m.h.end(),
                           [](const auto& blocks) { return blocks.empty(); });
    return m;
}

void check_realization(const Realization& r) {
    validate_unit(r.cprime, r.unit);
    RayMorphism a = compose(r.prod, unit_tensor_morphism(r.cprime, r.unit, r.c));
    RayHomotopy hh;
    hh.first = a;
    hh.second = r.f;
    hh.k = r.k;
    hh.q = r.q;
    hh.validate();
}

UnitVisibility visibility_via_unit(const Realization& r, const std::vector<Rational>& schedule) {
    check_realization(r);
    if (schedule.empty()) throw ValidationError("empty lambda schedule");
    for (const auto& lam : schedule) {
        InducedMap im(r.f, lam);
        if (!im.is_isomorphism())
            throw ValidationError("continuation map is not an isomorphism at lambda = " +
                                  to_string(lam));
    }
    UnitVisibility out{false, visibility(r.cprime, schedule)};
    TruncatedHomology th(r.cprime, schedule.back());
    auto cls = unit_class(th, r.unit);
    out.unit_zero = !th.class_has_full_component(0, cls);
    const bool visible = out.vis.barcodes.back().has_full_bar();
    if (out.unit_zero == visible)
        throw std::logic_error("unit-class verdict disagrees with visibility");
    return out;
}

RayMorphism raise(const Ray& r, const Rational& eps) {
    if (eps <= 0) throw ValidationError("raise needs eps > 0");
    RayMorphism m;
    m.source = m.target = r;
    const NovikovScalar t = NovikovScalar::monomial(rat(1), eps);
    for (std::size_t i = 0; i < r.slices(); ++i)
        m.f.push_back(ChainMap::scalar(r.slice(i), t));
    m.strict = true;
    return m;
}

std::vector<NovikovScalar> product_on_classes(const RayMorphism& prod, const Ray& a, const Ray& b,
                                              const SliceCycle& x, const SliceCycle& y,
                                              const TruncatedHomology& target) {
    const std::size_t m = std::max(x.slice, y.slice);
    auto xm = a.push(x.slice, m, x.degree, x.chain);
    auto ym = b.push(y.slice, m, y.degree, y.chain);
    auto t = tensor_chain(a.slice(m), b.slice(m), x.degree, y.degree, xm, ym);
    const int n = a.slice(0).grading().normalize(x.degree + y.degree);
    auto z = prod.slice_map(m).block(n).apply(t);
    return target.class_of({n, m, z});
}

bool co_check(const RayMorphism& co, const UnitData& u_closed, const UnitData& u_open,
              const Rational& lambda) {
    validate_unit(co.source, u_closed);
    validate_unit(co.target, u_open);
    InducedMap im(co, lambda);
    auto cls = unit_class(im.source(), u_closed);
    auto mapped = im.apply(0, cls);
    auto open_cls = unit_class(im.target(), u_open);
    return im.target().classes_equal(0, mapped, open_cls);
}

}  // namespace novtel
