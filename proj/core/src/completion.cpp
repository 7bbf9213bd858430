#include "novtel/completion.hpp"

#include <algorithm>

#include "novtel/errors.hpp"

namespace novtel {

TruncatedHomology::TruncatedHomology(const Ray& r, const Rational& lambda)
    : ray_(r), model_(r, lambda), hom_(model_.complex(), lambda) {}

std::vector<NovikovScalar> TruncatedHomology::class_of(const SliceCycle& z) const {
    const std::size_t n = model_.tail_index();
    std::vector<NovikovScalar> coords;
    if (z.slice <= n) {
        coords = model_.project(z.degree, ray_.push(z.slice, n, z.degree, z.chain));
    } else {
        coords = model_.project(z.degree, z.chain);
        Matrix<NovikovScalar> inv = model_.phi_bar_inv(z.degree);
        for (std::size_t i = n; i < z.slice; ++i) {
            coords = inv.apply(coords);
            for (auto& s : coords) s = s.truncate(lambda());
        }
    }
    return hom_.class_of(z.degree, coords);
}

std::vector<NovikovScalar> TruncatedHomology::chain_rep(
    int degree, const std::vector<NovikovScalar>& coords) const {
    const std::size_t slots = hom_.slots(degree);
    if (coords.size() != slots) throw ValidationError("class coordinate count mismatch");
    std::vector<NovikovScalar> chain(model_.complex().rank(degree));
    for (std::size_t j = 0; j < slots; ++j) {
        if (coords[j].is_zero()) continue;
        auto rep = hom_.representative(degree, j);
        for (std::size_t i = 0; i < chain.size(); ++i)
            chain[i] = (chain[i] + coords[j] * rep[i]).truncate(lambda());
    }
    return chain;
}

bool TruncatedHomology::class_has_full_component(int degree,
                                                 const std::vector<NovikovScalar>& coords) const {
    for (std::size_t j = 0; j < coords.size(); ++j)
        if (hom_.modulus(degree, j) == lambda() && !coords[j].truncate(lambda()).is_zero())
            return true;
    return false;
}

Barcode truncated_homology(const Ray& r, const Rational& lambda) {
    return TruncatedHomology(r, lambda).barcode();
}

Barcode brute_force_telescope_homology(const Ray& r, std::size_t M, const Rational& lambda,
                                       std::size_t max_rank) {
    r.validate();
    Ray ext;
    std::size_t tel_len = M;
    for (std::size_t i = 0; i < M; ++i) ext.prefix.push_back(r.slice(i));
    for (std::size_t i = 0; i + 1 < M; ++i) ext.prefix_maps.push_back(r.map(i));
    if (r.tail.kind == TailKind::PositiveShift) {
        // Chop: extend by zero. The discarded tail telescope is acyclic mod
        // T^lambda (alternating contraction through the nilpotent phi powers).
        GradedComplex empty(r.slice(0).grading());
        ext.prefix_maps.push_back(ChainMap{ext.prefix.back(), empty, {}});
        ext.prefix.push_back(empty);
        ext.tail = {ChainMap::identity(empty), TailKind::Constant, std::nullopt};
        tel_len = M + 1;
    } else {
        ext.tail = {ChainMap::identity(ext.prefix.back()), TailKind::Constant, std::nullopt};
    }
    GradedComplex tel = telescope(ext, tel_len);
    if (tel.total_rank() > max_rank)
        throw ResourceCapError("telescope rank " + std::to_string(tel.total_rank()) +
                               " exceeds cap " + std::to_string(max_rank));
    return ModHomology(tel, lambda).barcode();
}

std::string VisibilityVerdict::verdict_str() const {
    switch (verdict) {
        case Kind::visible_at_top: return "visible@" + to_string(schedule.back());
        case Kind::invisible_at_top: return "invisible@" + to_string(schedule.back());
        case Kind::certified_invisible: return "certified-invisible";
        case Kind::certified_visible: return "certified-visible";
    }
    return "?";
}

VisibilityVerdict visibility(const Ray& r, const std::vector<Rational>& schedule) {
    if (schedule.empty()) throw ValidationError("empty lambda schedule");
    for (std::size_t i = 0; i + 1 < schedule.size(); ++i)
        if (!(schedule[i] < schedule[i + 1]))
            throw ValidationError("lambda schedule must be strictly increasing");
    VisibilityVerdict v;
    v.schedule = schedule;
    for (const auto& lam : schedule) {
        v.barcodes.push_back(truncated_homology(r, lam));
        v.visible_at.push_back(v.barcodes.back().has_full_bar());
    }
    // lambda-monotonicity of the clipped barcodes is an internal invariant
    for (std::size_t i = 0; i + 1 < v.barcodes.size(); ++i)
        if (!(v.barcodes.back().clip(schedule[i]) == v.barcodes[i]))
            throw std::logic_error("clipped barcodes violate lambda-monotonicity");
    if (r.tail.kind == TailKind::PositiveShift) {
        v.verdict = VisibilityVerdict::Kind::certified_invisible;
        v.certificate =
            "tail telescope is acyclic at every precision (connecting maps have uniformly "
            "positive valuation " +
            to_string(*r.tail.delta) + ")";
    } else if (r.tail.kind == TailKind::Constant) {
        Barcode exact = homology_barcode(r.slice(r.slices() - 1));
        if (exact.has_full_bar()) {
            v.verdict = VisibilityVerdict::Kind::certified_visible;
            v.certificate = "constant tail with an infinite bar in the tail slice";
        } else {
            v.verdict = VisibilityVerdict::Kind::certified_invisible;
            v.certificate = "constant tail with torsion-only homology in the tail slice";
        }
    } else {
        v.verdict = v.visible_at.back() ? VisibilityVerdict::Kind::visible_at_top
                                        : VisibilityVerdict::Kind::invisible_at_top;
        v.certificate = "precision-stamped verdict at lambda = " + to_string(schedule.back());
    }
    return v;
}

InducedMap::InducedMap(const RayMorphism& m, const Rational& lambda)
    : src_(m.source, lambda), tgt_(m.target, lambda) {
    m.validate();
    const std::size_t ns = src_.model().tail_index();
    const std::size_t nt = tgt_.model().tail_index();
    const std::size_t i0 = std::max({ns, nt, m.len() == 0 ? std::size_t{0} : m.len() - 1});
    const GradedComplex& cs = m.source.slice(ns);
    for (int n : cs.degrees()) {
        // Well-definedness: f pushes the stabilized kernel into the kernel.
        Matrix<NovikovScalar> kg = src_.model().kernel_generators(n);
        for (std::size_t j = 0; j < kg.cols(); ++j) {
            auto w = m.slice_map(i0).block(n).apply(
                m.source.push(ns, i0, n, kg.col(j)));
            auto pr = tgt_.model().project(n, w);
            bool zero = true;
            for (const auto& s : pr)
                if (!s.truncate(lambda).is_zero()) zero = false;
            if (!zero)
                throw UnsupportedError(
                    "morphism does not descend to the colimit model at degree " +
                    std::to_string(n));
        }
        // Chain-level block on the models.
        const std::size_t cols = src_.model().complex().rank(n);
        const std::size_t rows = tgt_.model().complex().rank(n);
        Matrix<NovikovScalar> fb(rows, cols);
        for (std::size_t j = 0; j < cols; ++j) {
            std::vector<NovikovScalar> e(cols);
            e[j] = NovikovScalar::one();
            auto x = src_.model().lift(n, e);
            x = m.source.push(ns, i0, n, x);
            auto z = m.slice_map(i0).block(n).apply(x);
            auto y = tgt_.model().project(n, z);
            Matrix<NovikovScalar> inv = tgt_.model().phi_bar_inv(n);
            for (std::size_t t = nt; t < i0; ++t) y = inv.apply(y);
            for (std::size_t i = 0; i < rows; ++i) fb(i, j) = y[i].truncate(lambda);
        }
        chain_[n] = std::move(fb);
        // Slot matrix on classes.
        const std::size_t ss = src_.homology().slots(n);
        const std::size_t ts = tgt_.homology().slots(n);
        Matrix<NovikovScalar> sb(ts, ss);
        for (std::size_t j = 0; j < ss; ++j) {
            auto rep = src_.homology().representative(n, j);
            auto img = chain_[n].apply(rep);
            for (auto& s : img) s = s.truncate(lambda);
            auto cls = tgt_.homology().class_of(n, img);
            for (std::size_t i = 0; i < ts; ++i) sb(i, j) = cls[i];
        }
        slots_[n] = std::move(sb);
    }
}

Matrix<NovikovScalar> InducedMap::chain_block(int degree) const {
    auto it = chain_.find(src_.model().complex().grading().normalize(degree));
    if (it != chain_.end()) return it->second;
    return Matrix<NovikovScalar>(tgt_.model().complex().rank(degree),
                                 src_.model().complex().rank(degree));
}

Matrix<NovikovScalar> InducedMap::slot_block(int degree) const {
    auto it = slots_.find(src_.model().complex().grading().normalize(degree));
    if (it != slots_.end()) return it->second;
    return Matrix<NovikovScalar>(tgt_.homology().slots(degree), src_.homology().slots(degree));
}

std::vector<NovikovScalar> InducedMap::apply(int degree,
                                             const std::vector<NovikovScalar>& coords) const {
    auto out = slot_block(degree).apply(coords);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const Rational mi = tgt_.homology().modulus(degree, i);
        out[i] = mi > 0 ? out[i].truncate(mi) : NovikovScalar::zero();
    }
    return out;
}

bool InducedMap::is_isomorphism() const {
    if (!(src_.barcode() == tgt_.barcode())) return false;
    const Rational& lam = src_.lambda();
    for (const auto& [n, sb] : slots_) {
        const std::size_t ts = sb.rows();
        if (ts == 0) continue;
        // Surjectivity onto (+)_i R/T^{m_i}: each generator lies in the span
        // of the image columns and the slot relations. Equal barcodes then
        // force bijectivity (the torsion measure is additive and faithful).
        // Trivial slots (modulus 0) impose nothing.
        Matrix<NovikovScalar> gen(ts, sb.cols() + ts);
        for (std::size_t i = 0; i < ts; ++i) {
            for (std::size_t j = 0; j < sb.cols(); ++j) gen(i, j) = sb(i, j);
            gen(i, sb.cols() + i) =
                NovikovScalar::monomial(rat(1), tgt_.homology().modulus(n, i)).truncate(lam);
        }
        for (std::size_t i = 0; i < ts; ++i) {
            if (!(tgt_.homology().modulus(n, i) > 0)) continue;
            std::vector<NovikovScalar> e(ts);
            e[i] = NovikovScalar::one();
            if (!in_span_mod(gen, e, lam)) return false;
        }
    }
    return true;
}

namespace {

Matrix<NovikovScalar> relations_of(const std::vector<Rational>& moduli, const Rational& lambda) {
    Matrix<NovikovScalar> rel(moduli.size(), moduli.size());
    for (std::size_t i = 0; i < moduli.size(); ++i)
        rel(i, i) = NovikovScalar::monomial(rat(1), moduli[i]).truncate(lambda);
    return rel;
}

}  // namespace

int exactness_check(const std::vector<ModuleMap>& seq, const Rational& lambda) {
    for (std::size_t k = 0; k < seq.size(); ++k) {
        const ModuleMap& m = seq[k];
        if (m.f.rows() != m.tgt_moduli.size() || m.f.cols() != m.src_moduli.size())
            throw ValidationError("module map " + std::to_string(k) + " has wrong shape");
        if (k + 1 < seq.size() && m.tgt_moduli != seq[k + 1].src_moduli)
            throw ValidationError("module maps " + std::to_string(k) + "," +
                                  std::to_string(k + 1) + " are not composable");
        Matrix<NovikovScalar> rel_t = relations_of(m.tgt_moduli, lambda);
        for (std::size_t j = 0; j < m.src_moduli.size(); ++j) {
            auto x = m.f.col(j);
            for (auto& s : x) s = s.shift(rat(1), m.src_moduli[j]).truncate(lambda);
            if (!in_span_mod(rel_t, x, lambda))
                throw ValidationError("module map " + std::to_string(k) +
                                      " is not well defined on slot " + std::to_string(j));
        }
    }
    for (std::size_t k = 0; k + 1 < seq.size(); ++k) {
        const ModuleMap& g = seq[k];
        const ModuleMap& f = seq[k + 1];
        const std::size_t nb = g.tgt_moduli.size();
        Matrix<NovikovScalar> rel_b = relations_of(g.tgt_moduli, lambda);
        Matrix<NovikovScalar> rel_c = relations_of(f.tgt_moduli, lambda);
        // image of g, together with the internal relations of B
        Matrix<NovikovScalar> image = g.f.hcat(rel_b);
        // kernel of f: solutions x with f(x) in the relations of C
        Matrix<NovikovScalar> sol = kernel_mod(f.f.hcat(rel_c), lambda);
        std::vector<std::size_t> top(nb);
        for (std::size_t i = 0; i < nb; ++i) top[i] = i;
        Matrix<NovikovScalar> kernel = sol.submatrix_rows(top).hcat(rel_b);
        if (!same_span_mod(image, kernel, lambda)) return static_cast<int>(k);
    }
    return -1;
}

}  // namespace novtel
