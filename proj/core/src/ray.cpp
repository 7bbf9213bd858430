#include "novtel/ray.hpp"

#include <algorithm>
#include <set>

#include "novtel/errors.hpp"

namespace novtel {

const GradedComplex& Ray::slice(std::size_t i) const {
    if (prefix.empty()) throw ValidationError("ray with empty prefix");
    return i < prefix.size() ? prefix[i] : prefix.back();
}

ChainMap Ray::map(std::size_t i) const {
    if (i + 1 < prefix.size()) return prefix_maps.at(i);
    return tail.phi;
}

void Ray::validate() const {
    if (prefix.empty()) throw ValidationError("ray with empty prefix");
    if (prefix_maps.size() + 1 != prefix.size())
        throw ValidationError("ray needs one connecting map per consecutive prefix pair");
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        try {
            prefix[i].validate();
        } catch (const ValidationError& e) {
            throw ValidationError("slice " + std::to_string(i + 1) + ": " + e.what());
        }
    }
    for (std::size_t i = 0; i < prefix_maps.size(); ++i) {
        const ChainMap& c = prefix_maps[i];
        for (int n : prefix[i].degrees())
            if (c.block(n).cols() != prefix[i].rank(n) ||
                c.block(n).rows() != prefix[i + 1].rank(n))
                throw ValidationError("connecting map " + std::to_string(i + 1) +
                                      " has wrong shape at degree " + std::to_string(n));
        try {
            c.validate();
        } catch (const ValidationError& e) {
            throw ValidationError("connecting map " + std::to_string(i + 1) + ": " + e.what());
        }
    }
    const GradedComplex& last = prefix.back();
    for (int n : last.degrees()) {
        Matrix<NovikovScalar> b = tail.phi.block(n);
        if (b.rows() != last.rank(n) || b.cols() != last.rank(n))
            throw ValidationError("tail endomorphism has wrong shape at degree " +
                                  std::to_string(n));
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j) {
                if (!b(i, j).in_ring())
                    throw ValidationError("tail endomorphism entry outside the ring at degree " +
                                          std::to_string(n));
                if (tail.kind == TailKind::PositiveShift && !b(i, j).is_zero() &&
                    (!tail.delta || *b(i, j).valuation() < *tail.delta))
                    throw ValidationError("PositiveShift tail entry with valuation below delta");
            }
    }
    try {
        tail.phi.validate();
    } catch (const ValidationError& e) {
        throw ValidationError(std::string("tail endomorphism: ") + e.what());
    }
    if (tail.kind == TailKind::PositiveShift && (!tail.delta || *tail.delta <= 0))
        throw ValidationError("PositiveShift tail needs delta > 0");
    if (tail.kind == TailKind::Constant) {
        for (int n : last.degrees()) {
            auto d = snf_exact(tail.phi.block(n));
            if (d.rank != last.rank(n))
                throw ValidationError("Constant tail endomorphism is singular at degree " +
                                      std::to_string(n));
            for (const auto& e : d.exps)
                if (e != 0)
                    throw ValidationError(
                        "Constant tail endomorphism is not invertible over the ring at degree " +
                        std::to_string(n));
        }
    }
}

std::vector<NovikovScalar> Ray::push(std::size_t from, std::size_t to, int degree,
                                     const std::vector<NovikovScalar>& chain) const {
    if (to < from) throw ValidationError("push goes forward only");
    std::vector<NovikovScalar> out = chain;
    for (std::size_t i = from; i < to; ++i) out = map(i).block(degree).apply(out);
    return out;
}

Ray Ray::unit() {
    GradedComplex c;
    c.set_generators(0, {"u"});
    Ray r;
    r.prefix = {c};
    r.tail = {ChainMap::identity(c), TailKind::Constant, std::nullopt};
    return r;
}

Ray Ray::constant(const GradedComplex& c) {
    Ray r;
    r.prefix = {c};
    r.tail = {ChainMap::identity(c), TailKind::Constant, std::nullopt};
    return r;
}

const ChainMap& RayMorphism::slice_map(std::size_t i) const {
    if (f.empty()) throw ValidationError("morphism with no slice maps");
    return i < f.size() ? f[i] : f.back();
}

Matrix<NovikovScalar> RayMorphism::h_block(std::size_t i, int degree) const {
    const Grading& gr = source.slice(0).grading();
    const int n = gr.normalize(degree);
    if (i >= h.size() && !h.empty()) i = h.size() - 1;
    if (i < h.size()) {
        auto it = h[i].find(n);
        if (it != h[i].end()) return it->second;
    }
    return Matrix<NovikovScalar>(target.slice(i + 1).rank(gr.prev(n)), source.slice(i).rank(n));
}

void RayMorphism::validate() const {
    if (f.empty()) throw ValidationError("morphism with no slice maps");
    const std::size_t L = std::max({f.size(), source.slices(), target.slices()});
    if (f.size() < std::max(source.slices(), target.slices()))
        throw ValidationError("morphism data must reach the periodic range of both rays");
    const Grading& gr = source.slice(0).grading();
    for (std::size_t i = 0; i < L; ++i) {
        try {
            slice_map(i).validate();
        } catch (const ValidationError& e) {
            throw ValidationError("slice map " + std::to_string(i + 1) + ": " + e.what());
        }
        for (int n : source.slice(i).degrees()) {
            Matrix<NovikovScalar> lhs =
                target.map(i).block(n) * slice_map(i).block(n) -
                slice_map(i + 1).block(n) * source.map(i).block(n);
            Matrix<NovikovScalar> rhs =
                target.slice(i + 1).d(gr.prev(n)) * h_block(i, n) +
                h_block(i, gr.next(n)) * source.slice(i).d(n);
            if (!(lhs - rhs).is_zero())
                throw ValidationError("ray-morphism square fails at slice " +
                                      std::to_string(i + 1) + ", degree " + std::to_string(n));
        }
        if (strict && i < h.size())
            for (const auto& [n, m] : h[i])
                if (!m.is_zero())
                    throw ValidationError("strict morphism carries a nonzero homotopy at slice " +
                                          std::to_string(i + 1));
    }
}

RayMorphism RayMorphism::identity(const Ray& r) {
    RayMorphism m;
    m.source = m.target = r;
    for (std::size_t i = 0; i < r.slices(); ++i) m.f.push_back(ChainMap::identity(r.slice(i)));
    m.strict = true;
    return m;
}

Matrix<NovikovScalar> RayHomotopy::k_block(std::size_t i, int degree) const {
    const Ray& src = first.source;
    const Ray& tgt = first.target;
    const Grading& gr = src.slice(0).grading();
    const int n = gr.normalize(degree);
    std::size_t j = (i >= k.size() && !k.empty()) ? k.size() - 1 : i;
    if (j < k.size()) {
        auto it = k[j].find(n);
        if (it != k[j].end()) return it->second;
    }
    return Matrix<NovikovScalar>(tgt.slice(i).rank(gr.prev(n)), src.slice(i).rank(n));
}

Matrix<NovikovScalar> RayHomotopy::q_block(std::size_t i, int degree) const {
    const Ray& src = first.source;
    const Ray& tgt = first.target;
    const Grading& gr = src.slice(0).grading();
    const int n = gr.normalize(degree);
    std::size_t j = (i >= q.size() && !q.empty()) ? q.size() - 1 : i;
    if (j < q.size()) {
        auto it = q[j].find(n);
        if (it != q[j].end()) return it->second;
    }
    return Matrix<NovikovScalar>(tgt.slice(i + 1).rank(gr.prev(gr.prev(n))), src.slice(i).rank(n));
}

void RayHomotopy::validate() const {
    first.validate();
    second.validate();
    const Ray& src = first.source;
    const Ray& tgt = first.target;
    const Grading& gr = src.slice(0).grading();
    const std::size_t L = std::max({first.len(), second.len(), k.size() + 1, q.size() + 1,
                                    src.slices(), tgt.slices()});
    for (std::size_t i = 0; i < L; ++i) {
        for (int n : src.slice(i).degrees()) {
            // f_i - f*_i = d k_i + k_i d
            Matrix<NovikovScalar> lhs =
                first.slice_map(i).block(n) - second.slice_map(i).block(n);
            Matrix<NovikovScalar> rhs = tgt.slice(i).d(gr.prev(n)) * k_block(i, n) +
                                        k_block(i, gr.next(n)) * src.slice(i).d(n);
            if (!(lhs - rhs).is_zero())
                throw ValidationError("ray-homotopy slice identity fails at slice " +
                                      std::to_string(i + 1) + ", degree " + std::to_string(n));
            // c'_i k_i - k_{i+1} c_i - h_i + h*_i = d q_{i+1} - q_{i+1} d
            Matrix<NovikovScalar> lhs2 = tgt.map(i).block(gr.prev(n)) * k_block(i, n) -
                                         k_block(i + 1, n) * src.map(i).block(n) -
                                         first.h_block(i, n) + second.h_block(i, n);
            Matrix<NovikovScalar> rhs2 = tgt.slice(i + 1).d(gr.prev(gr.prev(n))) * q_block(i, n) -
                                         q_block(i, gr.next(n)) * src.slice(i).d(n);
            if (!(lhs2 - rhs2).is_zero())
                throw ValidationError("ray-homotopy slit identity fails at slice " +
                                      std::to_string(i + 1) + ", degree " + std::to_string(n));
        }
    }
}

RayMorphism compose(const RayMorphism& outer, const RayMorphism& inner) {
    RayMorphism out;
    out.source = inner.source;
    out.target = outer.target;
    const std::size_t L = std::max({outer.len(), inner.len(), inner.source.slices(),
                                    outer.target.slices(), outer.source.slices()});
    const Grading& gr = out.source.slice(0).grading();
    for (std::size_t i = 0; i < L; ++i)
        out.f.push_back(outer.slice_map(i).compose(inner.slice_map(i)));
    out.strict = outer.strict && inner.strict;
    if (!out.strict) {
        for (std::size_t i = 0; i < L; ++i) {
            std::map<int, Matrix<NovikovScalar>> hi;
            for (int n : out.source.slice(i).degrees()) {
                Matrix<NovikovScalar> m =
                    outer.slice_map(i + 1).block(gr.prev(n)) * inner.h_block(i, n) +
                    outer.h_block(i, n) * inner.slice_map(i).block(n);
                if (!m.is_zero()) hi[n] = std::move(m);
            }
            out.h.push_back(std::move(hi));
        }
    }
    return out;
}

TelescopeLayout TelescopeLayout::at(const Ray& r, std::size_t M) {
    if (M < 1) throw ValidationError("telescope needs at least one slice");
    const Grading& gr = r.slice(0).grading();
    std::set<int> degs;
    for (std::size_t i = 0; i < M; ++i)
        for (int n : r.slice(i).degrees()) {
            degs.insert(n);
            degs.insert(gr.prev(n));
        }
    TelescopeLayout lay;
    for (int n : degs) {
        std::vector<Block>& bl = lay.blocks[n];
        std::size_t off = 0;
        for (std::size_t i = 0; i + 1 < M; ++i) {
            bl.push_back({i, true, r.slice(i).rank(gr.next(n)), off});
            off += bl.back().rank;
            bl.push_back({i, false, r.slice(i).rank(n), off});
            off += bl.back().rank;
        }
        bl.push_back({M - 1, false, r.slice(M - 1).rank(n), off});
    }
    return lay;
}

std::size_t TelescopeLayout::offset(int degree, std::size_t slice, bool shifted) const {
    for (const auto& b : blocks.at(degree))
        if (b.slice == slice && b.shifted == shifted) return b.offset;
    throw ValidationError("telescope block not found");
}

GradedComplex telescope(const Ray& r, std::size_t M) {
    const Grading& gr = r.slice(0).grading();
    auto lay = TelescopeLayout::at(r, M);
    GradedComplex out(gr);
    for (const auto& [n, bl] : lay.blocks) {
        std::vector<std::string> labels;
        for (const auto& b : bl) {
            const auto& src = r.slice(b.slice).labels(b.shifted ? gr.next(n) : n);
            for (const auto& l : src)
                labels.push_back("s" + std::to_string(b.slice + 1) + (b.shifted ? "[1]:" : ":") +
                                 l);
        }
        out.set_generators(n, std::move(labels));
    }
    for (const auto& [n, bl] : lay.blocks) {
        if (!lay.blocks.count(gr.next(n))) continue;
        const auto& bl1 = lay.blocks.at(gr.next(n));
        std::size_t rows = 0, cols = 0;
        for (const auto& b : bl1) rows += b.rank;
        for (const auto& b : bl) cols += b.rank;
        Matrix<NovikovScalar> d(rows, cols);
        auto place = [&](std::size_t roff, std::size_t coff, const Matrix<NovikovScalar>& m,
                         bool negate) {
            for (std::size_t i = 0; i < m.rows(); ++i)
                for (std::size_t j = 0; j < m.cols(); ++j)
                    d(roff + i, coff + j) += negate ? -m(i, j) : m(i, j);
        };
        for (const auto& b : bl) {
            if (b.rank == 0) continue;
            if (!b.shifted) {
                // internal differential on C_i
                place(lay.offset(gr.next(n), b.slice, false), b.offset, r.slice(b.slice).d(n),
                      false);
            } else {
                // -d on C_i[1]
                if (b.slice + 1 < M)  // shifted blocks exist only below the top
                    place(lay.offset(gr.next(n), b.slice, true), b.offset,
                          r.slice(b.slice).d(gr.next(n)), true);
                // identity edge C_i[1] -> C_i
                place(lay.offset(gr.next(n), b.slice, false), b.offset,
                      Matrix<NovikovScalar>::identity(b.rank), false);
                // connecting edge c_i into C_{i+1}
                place(lay.offset(gr.next(n), b.slice + 1, false), b.offset,
                      r.map(b.slice).block(gr.next(n)), false);
            }
        }
        out.set_differential(n, std::move(d));
    }
    return out;
}

Strictification strictify(const Ray& r, std::size_t M) {
    const Grading& gr = r.slice(0).grading();
    Strictification out;
    for (std::size_t m = 1; m <= M; ++m) out.strict_ray.prefix.push_back(telescope(r, m));
    for (std::size_t m = 1; m < M; ++m) {
        // inclusion F^m into F^{m+1}: blocks map to the blocks of equal name
        auto lsrc = TelescopeLayout::at(r, m);
        auto ldst = TelescopeLayout::at(r, m + 1);
        ChainMap inc{out.strict_ray.prefix[m - 1], out.strict_ray.prefix[m], {}};
        for (const auto& [n, bl] : lsrc.blocks) {
            Matrix<NovikovScalar> b(out.strict_ray.prefix[m].rank(n),
                                    out.strict_ray.prefix[m - 1].rank(n));
            for (const auto& blk : bl)
                for (std::size_t j = 0; j < blk.rank; ++j)
                    b(ldst.offset(n, blk.slice, blk.shifted) + j, blk.offset + j) =
                        NovikovScalar::one();
            inc.blocks[n] = std::move(b);
        }
        out.strict_ray.prefix_maps.push_back(std::move(inc));
    }
    out.strict_ray.tail = {ChainMap::identity(out.strict_ray.prefix.back()), TailKind::Constant,
                           std::nullopt};
    for (std::size_t m = 1; m <= M; ++m) {
        // comparison F^m -> C_m: (-1)^i c_{i -> m-1} on plain blocks, 0 on
        // shifted blocks (i the 0-based slice index)
        auto lay = TelescopeLayout::at(r, m);
        ChainMap cmp{out.strict_ray.prefix[m - 1], r.slice(m - 1), {}};
        for (const auto& [n, bl] : lay.blocks) {
            Matrix<NovikovScalar> b(r.slice(m - 1).rank(n),
                                    out.strict_ray.prefix[m - 1].rank(n));
            for (const auto& blk : bl) {
                if (blk.shifted || blk.rank == 0) continue;
                Matrix<NovikovScalar> comp =
                    Matrix<NovikovScalar>::identity(r.slice(blk.slice).rank(n));
                for (std::size_t i = blk.slice; i + 1 < m; ++i)
                    comp = r.map(i).block(n) * comp;
                const NovikovScalar sign =
                    NovikovScalar::constant(rat(blk.slice % 2 == 0 ? 1 : -1));
                for (std::size_t i = 0; i < comp.rows(); ++i)
                    for (std::size_t j = 0; j < comp.cols(); ++j)
                        b(i, blk.offset + j) = sign * comp(i, j);
            }
            cmp.blocks[n] = std::move(b);
        }
        cmp.validate();
        out.comparison.push_back(std::move(cmp));
    }
    (void)gr;
    return out;
}

ColimitModel::ColimitModel(const Ray& r, const Rational& lambda) : lambda_(lambda) {
    if (lambda <= 0) throw ValidationError("truncation level must be positive");
    r.validate();
    tail_index_ = r.slices() - 1;
    const GradedComplex& c = r.slice(tail_index_);
    const ChainMap& phi = r.tail.phi;
    const Grading& gr = c.grading();

    // Least positive valuation among phi's entries (for the stabilization cap).
    std::optional<Rational> delta_min;
    for (int n : c.degrees()) {
        Matrix<NovikovScalar> b = phi.block(n);
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j) {
                if (b(i, j).is_zero()) continue;
                const Rational v = *b(i, j).valuation();
                if (v > 0 && (!delta_min || v < *delta_min)) delta_min = v;
            }
    }
    long cap = static_cast<long>(c.total_rank()) + 2;
    if (delta_min) cap += ceil_long(lambda_ / *delta_min);

    std::map<int, Matrix<NovikovScalar>> power, kernels;
    for (int n : c.degrees()) power[n] = Matrix<NovikovScalar>::identity(c.rank(n));
    bool stable = false;
    for (long m = 1; m <= cap && !stable; ++m) {
        std::map<int, Matrix<NovikovScalar>> next_k;
        for (int n : c.degrees()) {
            power[n] = (phi.block(n) * power[n])
                           .map([&](const NovikovScalar& s) { return s.truncate(lambda_); });
            next_k[n] = kernel_mod(power[n], lambda_);
        }
        if (m > 1) {
            stable = true;
            for (int n : c.degrees())
                if (!same_span_mod(kernels[n], next_k[n], lambda_)) {
                    stable = false;
                    break;
                }
        }
        kernels = std::move(next_k);
    }
    if (!stable)
        throw UnsupportedError("tail not supported: kernel chain did not stabilize within " +
                               std::to_string(cap) + " iterations");

    quotient_ = GradedComplex(gr);
    for (int n : c.degrees()) {
        DegreeData dd;
        dd.kernel = kernels[n];
        auto d = snf_mod(power[n], lambda_);
        std::vector<std::size_t> free_idx;
        for (std::size_t i = 0; i < d.rank; ++i) {
            if (d.exps[i] == 0)
                free_idx.push_back(i);
            else
                throw UnsupportedError(
                    "tail not supported: colimit is not free over the truncated ring at degree " +
                    std::to_string(n));
        }
        dd.proj = d.Vinv.submatrix_rows(free_idx).map(
            [&](const NovikovScalar& s) { return s.truncate(lambda_); });
        dd.liftm = d.V.submatrix_cols(free_idx).map(
            [&](const NovikovScalar& s) { return s.truncate(lambda_); });
        degs_[n] = std::move(dd);
        std::vector<std::string> labels;
        for (std::size_t j = 0; j < free_idx.size(); ++j)
            labels.push_back("g" + std::to_string(j + 1));
        quotient_.set_generators(n, std::move(labels));
    }
    for (int n : c.degrees()) {
        if (!degs_.count(gr.next(n))) continue;
        quotient_.set_differential(
            n, (degs_[gr.next(n)].proj * c.d(n) * degs_[n].liftm)
                   .map([&](const NovikovScalar& s) { return s.truncate(lambda_); }));
    }
    for (int n : c.degrees()) {
        DegreeData& dd = degs_[n];
        dd.pbar = (dd.proj * phi.block(n) * dd.liftm)
                      .map([&](const NovikovScalar& s) { return s.truncate(lambda_); });
        auto d = snf_mod(dd.pbar, lambda_);
        bool invertible = d.rank == dd.pbar.rows() && dd.pbar.rows() == dd.pbar.cols();
        for (const auto& e : d.exps)
            if (e != 0) invertible = false;
        if (!invertible)
            throw UnsupportedError(
                "tail not supported: induced endomorphism is not bijective at degree " +
                std::to_string(n));
        dd.pbar_inv = (d.V * d.U).map([&](const NovikovScalar& s) { return s.truncate(lambda_); });
    }
    quotient_.validate_mod(lambda_);
}

std::vector<NovikovScalar> ColimitModel::project(int degree,
                                                 const std::vector<NovikovScalar>& chain) const {
    auto it = degs_.find(quotient_.grading().normalize(degree));
    if (it == degs_.end()) {
        if (!chain.empty()) throw ValidationError("chain in empty degree");
        return {};
    }
    auto out = it->second.proj.apply(chain);
    for (auto& s : out) s = s.truncate(lambda_);
    return out;
}

std::vector<NovikovScalar> ColimitModel::lift(int degree,
                                              const std::vector<NovikovScalar>& coords) const {
    auto it = degs_.find(quotient_.grading().normalize(degree));
    if (it == degs_.end()) {
        if (!coords.empty()) throw ValidationError("coords in empty degree");
        return {};
    }
    auto out = it->second.liftm.apply(coords);
    for (auto& s : out) s = s.truncate(lambda_);
    return out;
}

Matrix<NovikovScalar> ColimitModel::phi_bar(int degree) const {
    auto it = degs_.find(quotient_.grading().normalize(degree));
    if (it == degs_.end()) return Matrix<NovikovScalar>(0, 0);
    return it->second.pbar;
}

Matrix<NovikovScalar> ColimitModel::phi_bar_inv(int degree) const {
    auto it = degs_.find(quotient_.grading().normalize(degree));
    if (it == degs_.end()) return Matrix<NovikovScalar>(0, 0);
    return it->second.pbar_inv;
}

Matrix<NovikovScalar> ColimitModel::kernel_generators(int degree) const {
    auto it = degs_.find(quotient_.grading().normalize(degree));
    if (it == degs_.end()) return Matrix<NovikovScalar>(0, 0);
    return it->second.kernel;
}

GradedComplex colimit_mod(const Ray& r, const Rational& lambda) {
    return ColimitModel(r, lambda).complex();
}

Ray tensor_rays(const Ray& a, const Ray& b) {
    Ray out;
    const std::size_t n = std::max(a.slices(), b.slices());
    for (std::size_t i = 0; i < n; ++i) out.prefix.push_back(tensor(a.slice(i), b.slice(i)));
    for (std::size_t i = 0; i + 1 < n; ++i)
        out.prefix_maps.push_back(tensor_maps(a.map(i), b.map(i)));
    out.tail.phi = tensor_maps(a.tail.phi, b.tail.phi);
    if (a.tail.kind == TailKind::Constant && b.tail.kind == TailKind::Constant) {
        out.tail.kind = TailKind::Constant;
    } else if ((a.tail.kind == TailKind::Constant || a.tail.kind == TailKind::PositiveShift) &&
               (b.tail.kind == TailKind::Constant || b.tail.kind == TailKind::PositiveShift)) {
        out.tail.kind = TailKind::PositiveShift;
        Rational d = 0;
        if (a.tail.kind == TailKind::PositiveShift) d += *a.tail.delta;
        if (b.tail.kind == TailKind::PositiveShift) d += *b.tail.delta;
        out.tail.delta = d;
    } else {
        out.tail.kind = TailKind::General;
    }
    return out;
}

}  // namespace novtel
