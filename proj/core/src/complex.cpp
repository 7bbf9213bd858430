#include "novtel/complex.hpp"

#include <algorithm>
#include <sstream>

#include "novtel/errors.hpp"

namespace novtel {

void GradedComplex::set_generators(int degree, std::vector<std::string> labels) {
    gens_[grading_.normalize(degree)] = std::move(labels);
}

void GradedComplex::set_differential(int degree, Matrix<NovikovScalar> d) {
    diff_[grading_.normalize(degree)] = std::move(d);
}

std::size_t GradedComplex::rank(int degree) const {
    auto it = gens_.find(grading_.normalize(degree));
    return it == gens_.end() ? 0 : it->second.size();
}

const std::vector<std::string>& GradedComplex::labels(int degree) const {
    static const std::vector<std::string> empty;
    auto it = gens_.find(grading_.normalize(degree));
    return it == gens_.end() ? empty : it->second;
}

Matrix<NovikovScalar> GradedComplex::d(int degree) const {
    const int n = grading_.normalize(degree);
    auto it = diff_.find(n);
    if (it != diff_.end()) return it->second;
    return Matrix<NovikovScalar>(rank(grading_.next(n)), rank(n));
}

std::vector<int> GradedComplex::degrees() const {
    std::vector<int> out;
    for (const auto& [deg, labels] : gens_)
        if (!labels.empty()) out.push_back(deg);
    return out;
}

std::size_t GradedComplex::total_rank() const {
    std::size_t n = 0;
    for (const auto& [deg, labels] : gens_) n += labels.size();
    return n;
}

namespace {

void check_complex(const GradedComplex& c, const std::optional<Rational>& lambda) {
    for (int n : c.degrees()) {
        Matrix<NovikovScalar> dn = c.d(n);
        if (dn.rows() != c.rank(c.grading().next(n)) || dn.cols() != c.rank(n))
            throw ValidationError("differential shape mismatch at degree " + std::to_string(n));
        for (std::size_t i = 0; i < dn.rows(); ++i)
            for (std::size_t j = 0; j < dn.cols(); ++j)
                if (!dn(i, j).in_ring())
                    throw ValidationError("differential entry (" + std::to_string(i) + "," +
                                          std::to_string(j) + ") at degree " + std::to_string(n) +
                                          " has negative valuation");
        Matrix<NovikovScalar> sq = c.d(c.grading().next(n)) * dn;
        if (lambda) sq = sq.map([&](const NovikovScalar& x) { return x.truncate(*lambda); });
        for (std::size_t i = 0; i < sq.rows(); ++i)
            for (std::size_t j = 0; j < sq.cols(); ++j)
                if (!sq(i, j).is_zero())
                    throw ValidationError("d^2 != 0 at degree " + std::to_string(n) + ", entry (" +
                                          std::to_string(i) + "," + std::to_string(j) +
                                          ") = " + sq(i, j).str());
    }
}

}  // namespace

void GradedComplex::validate() const { check_complex(*this, std::nullopt); }
void GradedComplex::validate_mod(const Rational& lambda) const { check_complex(*this, lambda); }

Matrix<NovikovScalar> ChainMap::block(int degree) const {
    const int n = source.grading().normalize(degree);
    auto it = blocks.find(n);
    if (it != blocks.end()) return it->second;
    return Matrix<NovikovScalar>(target.rank(n), source.rank(n));
}

void ChainMap::validate() const {
    if (source.grading() != target.grading())
        throw ValidationError("chain map between complexes of different gradings");
    for (int n : source.degrees()) {
        Matrix<NovikovScalar> lhs = target.d(n) * block(n);
        Matrix<NovikovScalar> rhs = block(source.grading().next(n)) * source.d(n);
        if (!(lhs - rhs).is_zero())
            throw ValidationError("chain map does not commute with d at degree " +
                                  std::to_string(n));
    }
}

ChainMap ChainMap::identity(const GradedComplex& c) {
    ChainMap f{c, c, {}};
    for (int n : c.degrees()) f.blocks[n] = Matrix<NovikovScalar>::identity(c.rank(n));
    return f;
}

ChainMap ChainMap::scalar(const GradedComplex& c, const NovikovScalar& s) {
    ChainMap f{c, c, {}};
    for (int n : c.degrees())
        f.blocks[n] = Matrix<NovikovScalar>::identity(c.rank(n)).scaled(s);
    return f;
}

ChainMap ChainMap::compose(const ChainMap& inner) const {
    ChainMap out{inner.source, target, {}};
    for (int n : inner.source.degrees()) out.blocks[n] = block(n) * inner.block(n);
    return out;
}

Matrix<NovikovScalar> Homotopy::block(int degree) const {
    const int n = source.grading().normalize(degree);
    auto it = blocks.find(n);
    if (it != blocks.end()) return it->second;
    return Matrix<NovikovScalar>(target.rank(source.grading().prev(n)), source.rank(n));
}

void Homotopy::validate(const ChainMap& f, const ChainMap& g) const {
    for (int n : source.degrees()) {
        const auto& gr = source.grading();
        // f - g = d'∘h + h∘d  at degree n
        Matrix<NovikovScalar> rhs = target.d(gr.prev(n)) * block(n) + block(gr.next(n)) * source.d(n);
        Matrix<NovikovScalar> lhs = f.block(n) - g.block(n);
        if (!(lhs - rhs).is_zero())
            throw ValidationError("homotopy identity fails at degree " + std::to_string(n));
    }
}

bool Barcode::empty() const {
    for (const auto& [deg, b] : degrees)
        if (!b.empty()) return false;
    return true;
}

bool Barcode::has_full_bar() const {
    for (const auto& [deg, b] : degrees)
        if (b.free_rank > 0) return true;
    return false;
}

Barcode Barcode::clip(const Rational& lambda) const {
    Barcode out;
    out.precision = lambda;
    for (const auto& [deg, b] : degrees) {
        Degree nb;
        nb.free_rank = b.free_rank;
        for (const auto& t : b.torsion) {
            if (t >= lambda)
                ++nb.free_rank;
            else
                nb.torsion.push_back(t);
        }
        if (!nb.empty()) out.degrees[deg] = std::move(nb);
    }
    return out;
}

std::string Barcode::str() const {
    std::ostringstream os;
    if (precision) os << "[precision " << to_string(*precision) << "] ";
    bool any = false;
    for (const auto& [deg, b] : degrees) {
        if (b.empty()) continue;
        any = true;
        os << "deg " << deg << ": ";
        if (b.free_rank) os << b.free_rank << (precision ? " full" : " inf") << " bar(s) ";
        if (!b.torsion.empty()) {
            os << "torsion {";
            for (std::size_t i = 0; i < b.torsion.size(); ++i)
                os << (i ? "," : "") << to_string(b.torsion[i]);
            os << "}";
        }
        os << "; ";
    }
    if (!any) os << "(empty)";
    return os.str();
}

GradedComplex shift(const GradedComplex& c, int k) {
    GradedComplex out(c.grading());
    for (int n : c.degrees()) {
        std::vector<std::string> labels;
        for (const auto& l : c.labels(n)) labels.push_back(l);
        out.set_generators(n - k, labels);
    }
    const NovikovScalar sign = NovikovScalar::constant(rat(k % 2 == 0 ? 1 : -1));
    for (int n : c.degrees()) out.set_differential(n - k, c.d(n).scaled(sign));
    return out;
}

GradedComplex cone(const ChainMap& f) {
    // Cone^n = C^{n+1} ⊕ C'^n with d(x,y) = (-dx, f(x)+d'y).
    f.validate();
    const GradedComplex &a = f.source, &b = f.target;
    const Grading gr = a.grading();
    GradedComplex out(gr);
    std::vector<int> degs;
    {
        std::map<int, bool> seen;
        for (int n : a.degrees()) seen[gr.normalize(n - 1)] = true;
        for (int n : b.degrees()) seen[n] = true;
        for (auto& [n, _] : seen) degs.push_back(n);
    }
    for (int n : degs) {
        std::vector<std::string> labels;
        for (const auto& l : a.labels(gr.next(n))) labels.push_back(l + "[1]");
        for (const auto& l : b.labels(n)) labels.push_back(l);
        out.set_generators(n, labels);
    }
    for (int n : degs) {
        const int np = gr.next(n);
        const std::size_t ra = a.rank(np), rb = b.rank(n);
        const std::size_t ra1 = a.rank(gr.next(np)), rb1 = b.rank(np);
        Matrix<NovikovScalar> d(ra1 + rb1, ra + rb);
        Matrix<NovikovScalar> da = a.d(np), db = b.d(n), fb = f.block(np);
        for (std::size_t i = 0; i < ra1; ++i)
            for (std::size_t j = 0; j < ra; ++j) d(i, j) = -da(i, j);
        for (std::size_t i = 0; i < rb1; ++i)
            for (std::size_t j = 0; j < ra; ++j) d(ra1 + i, j) = fb(i, j);
        for (std::size_t i = 0; i < rb1; ++i)
            for (std::size_t j = 0; j < rb; ++j) d(ra1 + i, ra + j) = db(i, j);
        out.set_differential(n, std::move(d));
    }
    return out;
}

namespace {

// Ordered (p, q) components of one total degree of a tensor product.
struct ProductLayout {
    struct Component {
        int p, q;
        std::size_t ra, rb, offset;
    };
    std::vector<Component> comps;
    std::size_t total = 0;

    static ProductLayout at(const GradedComplex& a, const GradedComplex& b, int n) {
        ProductLayout lay;
        for (int p : a.degrees()) {
            int q = n - p;
            if (a.grading().mod2) q = ((n - p) % 2 + 2) % 2;
            if (b.rank(q) == 0) continue;
            lay.comps.push_back({p, q, a.rank(p), b.rank(q), lay.total});
            lay.total += a.rank(p) * b.rank(q);
        }
        return lay;
    }
};

}  // namespace

GradedComplex tensor(const GradedComplex& a, const GradedComplex& b) {
    if (a.grading() != b.grading())
        throw ValidationError("tensor product needs matching gradings");
    const Grading gr = a.grading();
    GradedComplex out(gr);
    std::vector<int> degs;
    {
        std::map<int, bool> seen;
        for (int p : a.degrees())
            for (int q : b.degrees()) seen[gr.normalize(p + q)] = true;
        for (auto& [n, _] : seen) degs.push_back(n);
    }
    for (int n : degs) {
        auto lay = ProductLayout::at(a, b, n);
        std::vector<std::string> labels;
        for (const auto& c : lay.comps)
            for (std::size_t i = 0; i < c.ra; ++i)
                for (std::size_t j = 0; j < c.rb; ++j)
                    labels.push_back(a.labels(c.p)[i] + "|" + b.labels(c.q)[j]);
        out.set_generators(n, std::move(labels));
    }
    for (int n : degs) {
        auto lay = ProductLayout::at(a, b, n);
        auto lay1 = ProductLayout::at(a, b, gr.next(n));
        Matrix<NovikovScalar> d(lay1.total, lay.total);
        auto find = [&](int p, int q) -> const ProductLayout::Component* {
            for (const auto& c : lay1.comps)
                if (c.p == gr.normalize(p) && c.q == gr.normalize(q)) return &c;
            return nullptr;
        };
        for (const auto& c : lay.comps) {
            // d_a ⊗ id into (p+1, q)
            if (const auto* t = find(c.p + 1, c.q)) {
                Matrix<NovikovScalar> da = a.d(c.p);
                for (std::size_t i = 0; i < t->ra; ++i)
                    for (std::size_t j = 0; j < c.ra; ++j) {
                        if (da(i, j).is_zero()) continue;
                        for (std::size_t l = 0; l < c.rb; ++l)
                            d(t->offset + i * t->rb + l, c.offset + j * c.rb + l) += da(i, j);
                    }
            }
            // (-1)^p id ⊗ d_b into (p, q+1)
            if (const auto* t = find(c.p, c.q + 1)) {
                Matrix<NovikovScalar> db = b.d(c.q);
                const Rational sign = rat(c.p % 2 == 0 ? 1 : -1);
                for (std::size_t i = 0; i < t->rb; ++i)
                    for (std::size_t l = 0; l < c.rb; ++l) {
                        if (db(i, l).is_zero()) continue;
                        for (std::size_t j = 0; j < c.ra; ++j)
                            d(t->offset + j * t->rb + i, c.offset + j * c.rb + l) +=
                                db(i, l).shift(sign, rat(0));
                    }
            }
        }
        out.set_differential(n, std::move(d));
    }
    return out;
}

ChainMap tensor_maps(const ChainMap& f, const ChainMap& g) {
    GradedComplex src = tensor(f.source, g.source);
    GradedComplex dst = tensor(f.target, g.target);
    ChainMap out{src, dst, {}};
    const Grading gr = src.grading();
    for (int n : src.degrees()) {
        auto lsrc = ProductLayout::at(f.source, g.source, n);
        auto ldst = ProductLayout::at(f.target, g.target, n);
        Matrix<NovikovScalar> m(dst.rank(n), src.rank(n));
        for (const auto& c : lsrc.comps) {
            const ProductLayout::Component* t = nullptr;
            for (const auto& tc : ldst.comps)
                if (tc.p == c.p && tc.q == c.q) t = &tc;
            if (!t) continue;
            Matrix<NovikovScalar> fb = f.block(c.p), gb = g.block(c.q);
            for (std::size_t i = 0; i < t->ra; ++i)
                for (std::size_t j = 0; j < c.ra; ++j) {
                    if (fb(i, j).is_zero()) continue;
                    for (std::size_t k = 0; k < t->rb; ++k)
                        for (std::size_t l = 0; l < c.rb; ++l) {
                            if (gb(k, l).is_zero()) continue;
                            m(t->offset + i * t->rb + k, c.offset + j * c.rb + l) +=
                                fb(i, j) * gb(k, l);
                        }
                }
        }
        (void)gr;
        out.blocks[n] = std::move(m);
    }
    return out;
}

std::vector<NovikovScalar> tensor_chain(const GradedComplex& a, const GradedComplex& b, int dega,
                                        int degb, const std::vector<NovikovScalar>& x,
                                        const std::vector<NovikovScalar>& y) {
    const Grading gr = a.grading();
    const int n = gr.normalize(dega + degb);
    auto lay = ProductLayout::at(a, b, n);
    std::vector<NovikovScalar> out(lay.total);
    for (const auto& c : lay.comps) {
        if (c.p != gr.normalize(dega) || c.q != gr.normalize(degb)) continue;
        if (x.size() != c.ra || y.size() != c.rb)
            throw ValidationError("tensor_chain rank mismatch");
        for (std::size_t i = 0; i < c.ra; ++i)
            for (std::size_t j = 0; j < c.rb; ++j) out[c.offset + i * c.rb + j] = x[i] * y[j];
        return out;
    }
    if (a.rank(dega) != 0 && b.rank(degb) != 0)
        throw ValidationError("tensor_chain: component not present");
    return out;
}

Barcode homology_barcode(const GradedComplex& c) {
    c.validate();
    Barcode out;
    const Grading gr = c.grading();
    for (int n : c.degrees()) {
        auto dn = snf_exact(c.d(n));
        const std::size_t rn = c.rank(n);
        const std::size_t g = rn - dn.rank;  // kernel rank
        // Image coordinates w.r.t. the kernel basis: bottom rows of Vinv * B.
        Matrix<NovikovScalar> b = c.d(gr.prev(n));
        auto bf = b.map([](const NovikovScalar& x) { return NovikovFraction(x); });
        Matrix<NovikovFraction> y = dn.Vinv * bf;
        for (std::size_t i = 0; i < dn.rank; ++i)
            for (std::size_t j = 0; j < y.cols(); ++j)
                if (!y(i, j).is_zero())
                    throw ValidationError("image not contained in kernel at degree " +
                                          std::to_string(n));
        Matrix<NovikovFraction> x(g, y.cols());
        for (std::size_t i = 0; i < g; ++i)
            for (std::size_t j = 0; j < y.cols(); ++j) x(i, j) = y(dn.rank + i, j);
        auto rel = snf_exact_frac(x);
        Barcode::Degree deg;
        deg.free_rank = g - rel.rank;
        for (const auto& e : rel.exps)
            if (e > 0) deg.torsion.push_back(e);
        std::sort(deg.torsion.begin(), deg.torsion.end());
        if (!deg.empty()) out.degrees[n] = std::move(deg);
    }
    return out;
}

bool is_quasi_iso(const ChainMap& f, const std::optional<Rational>& lambda) {
    Barcode b = homology_barcode(cone(f));
    if (b.has_full_bar()) return false;
    if (lambda)
        for (const auto& [deg, bd] : b.degrees)
            for (const auto& t : bd.torsion)
                if (t >= *lambda) return false;
    return true;
}

ModHomology::ModHomology(const GradedComplex& c, const Rational& lambda)
    : lambda_(lambda), cx_(c) {
    cx_.validate_mod(lambda);
    const Grading gr = cx_.grading();
    for (int n : cx_.degrees()) {
        DegreeData dd;
        dd.chain_rank = cx_.rank(n);
        dd.dn = snf_mod(cx_.d(n), lambda_);
        for (std::size_t i = 0; i < dd.chain_rank; ++i) {
            if (i < dd.dn.rank) {
                if (dd.dn.exps[i] == 0) continue;  // unit factor: no kernel generator
                dd.gen_idx.push_back(i);
                dd.gen_shift.push_back(lambda_ - dd.dn.exps[i]);
            } else {
                dd.gen_idx.push_back(i);
                dd.gen_shift.push_back(rat(0));
            }
        }
        const std::size_t g = dd.gen_idx.size();
        // Relations: image of the previous differential in kernel coordinates,
        // plus the internal annihilators T^{lambda - shift}.
        Matrix<NovikovScalar> b = cx_.d(gr.prev(n));
        Matrix<NovikovScalar> y = (dd.dn.Vinv * b).map(
            [&](const NovikovScalar& s) { return s.truncate(lambda_); });
        Matrix<NovikovScalar> rel(g, b.cols() + g);
        for (std::size_t i = 0; i < g; ++i) {
            for (std::size_t j = 0; j < b.cols(); ++j) {
                NovikovScalar s = y(dd.gen_idx[i], j);
                if (s.is_zero()) continue;
                if (*s.valuation() < dd.gen_shift[i])
                    throw ValidationError("image coordinate below kernel shift at degree " +
                                          std::to_string(n));
                rel(i, j) = s.shift(rat(1), -dd.gen_shift[i]);
            }
            rel(i, b.cols() + i) = NovikovScalar::monomial(rat(1), lambda_ - dd.gen_shift[i]);
        }
        dd.rel = snf_mod(rel, lambda_);
        for (std::size_t j = 0; j < g; ++j)
            dd.moduli.push_back(j < dd.rel.rank ? dd.rel.exps[j] : lambda_);
        Barcode::Degree deg;
        for (const auto& m : dd.moduli) {
            if (m == lambda_)
                ++deg.free_rank;
            else if (m > 0)
                deg.torsion.push_back(m);
        }
        std::sort(deg.torsion.begin(), deg.torsion.end());
        if (!deg.empty()) barcode_.degrees[n] = std::move(deg);
        degs_[n] = std::move(dd);
    }
    barcode_.precision = lambda_;
}

std::size_t ModHomology::slots(int degree) const {
    auto it = degs_.find(cx_.grading().normalize(degree));
    return it == degs_.end() ? 0 : it->second.moduli.size();
}

Rational ModHomology::modulus(int degree, std::size_t slot) const {
    return degs_.at(cx_.grading().normalize(degree)).moduli.at(slot);
}

std::vector<NovikovScalar> ModHomology::class_of(int degree,
                                                 const std::vector<NovikovScalar>& chain) const {
    const int n = cx_.grading().normalize(degree);
    auto it = degs_.find(n);
    if (it == degs_.end()) {
        if (!chain.empty()) throw ValidationError("chain in empty degree");
        return {};
    }
    const DegreeData& dd = it->second;
    if (chain.size() != dd.chain_rank) throw ValidationError("chain has wrong rank");
    // Cycle check mod T^lambda.
    {
        auto dz = cx_.d(n).apply(chain);
        for (const auto& s : dz)
            if (!s.truncate(lambda_).is_zero())
                throw ValidationError("chain is not a cycle mod T^lambda at degree " +
                                      std::to_string(n));
    }
    std::vector<NovikovScalar> y(dd.chain_rank);
    for (std::size_t i = 0; i < dd.chain_rank; ++i) {
        NovikovScalar acc;
        for (std::size_t j = 0; j < dd.chain_rank; ++j) acc += dd.dn.Vinv(i, j) * chain[j];
        y[i] = acc.truncate(lambda_);
    }
    const std::size_t g = dd.gen_idx.size();
    std::vector<NovikovScalar> coords(g);
    for (std::size_t i = 0; i < g; ++i) {
        NovikovScalar s = y[dd.gen_idx[i]];
        if (s.is_zero()) continue;
        if (*s.valuation() < dd.gen_shift[i])
            throw ValidationError("cycle coordinate below kernel shift");
        coords[i] = s.shift(rat(1), -dd.gen_shift[i]);
    }
    std::vector<NovikovScalar> cls(g);
    for (std::size_t i = 0; i < g; ++i) {
        NovikovScalar acc;
        for (std::size_t j = 0; j < g; ++j) acc += dd.rel.U(i, j) * coords[j];
        cls[i] = dd.moduli[i] > 0 ? acc.truncate(dd.moduli[i]) : NovikovScalar::zero();
    }
    return cls;
}

bool ModHomology::class_is_zero(int degree, const std::vector<NovikovScalar>& coords) const {
    for (const auto& c : coords)
        if (!c.is_zero()) return false;
    (void)degree;
    return true;
}

bool ModHomology::classes_equal(int degree, const std::vector<NovikovScalar>& a,
                                const std::vector<NovikovScalar>& b) const {
    const int n = cx_.grading().normalize(degree);
    const DegreeData& dd = degs_.at(n);
    if (a.size() != dd.moduli.size() || b.size() != dd.moduli.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        NovikovScalar diff = a[i] - b[i];
        if (dd.moduli[i] > 0 && !diff.truncate(dd.moduli[i]).is_zero()) return false;
    }
    return true;
}

std::vector<NovikovScalar> ModHomology::representative(int degree, std::size_t slot) const {
    const int n = cx_.grading().normalize(degree);
    const DegreeData& dd = degs_.at(n);
    const std::size_t g = dd.gen_idx.size();
    // coords = Uinv_rel * e_slot, chain = sum coords_i * T^{shift_i} * (V col idx_i)
    std::vector<NovikovScalar> chain(dd.chain_rank);
    for (std::size_t i = 0; i < g; ++i) {
        NovikovScalar ci = dd.rel.Uinv(i, slot);
        if (ci.is_zero()) continue;
        NovikovScalar scaled = ci.shift(rat(1), dd.gen_shift[i]);
        for (std::size_t r = 0; r < dd.chain_rank; ++r)
            chain[r] += (scaled * dd.dn.V(r, dd.gen_idx[i])).truncate(lambda_);
    }
    for (auto& s : chain) s = s.truncate(lambda_);
    return chain;
}

}  // namespace novtel
