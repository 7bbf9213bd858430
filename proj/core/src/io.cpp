#include "novtel/io.hpp"

#include <fstream>

#include "novtel/errors.hpp"

namespace novtel::io {

namespace {

const json& need(const json& j, const std::string& key) {
    if (!j.is_object() || !j.contains(key))
        throw ValidationError("missing field '" + key + "'");
    return j.at(key);
}

}  // namespace

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("malformed JSON in '" + path + "': " + e.what());
    }
}

json rational_to_json(const Rational& q) { return to_string(q); }

Rational rational_from_json(const json& j, const std::string& field) {
    if (j.is_number_integer()) return rat(j.get<long>());
    if (!j.is_string())
        throw ValidationError("field '" + field + "' must be a rational string");
    try {
        return parse_rational(j.get<std::string>());
    } catch (const std::exception& e) {
        throw ValidationError("field '" + field + "': " + e.what());
    }
}

json scalar_to_json(const NovikovScalar& s) { return s.str(); }

NovikovScalar scalar_from_json(const json& j, const std::string& field) {
    if (j.is_number_integer()) return NovikovScalar::constant(rat(j.get<long>()));
    if (!j.is_string())
        throw ValidationError("field '" + field + "' must be a scalar string");
    try {
        return parse_scalar(j.get<std::string>());
    } catch (const std::exception& e) {
        throw ValidationError("field '" + field + "': " + e.what());
    }
}

json matrix_to_json(const Matrix<NovikovScalar>& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(scalar_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix<NovikovScalar> matrix_from_json(const json& j, std::size_t rows, std::size_t cols,
                                       const std::string& field) {
    if (!j.is_array() || j.size() != rows)
        throw ValidationError("field '" + field + "' must be a " + std::to_string(rows) + "x" +
                              std::to_string(cols) + " matrix");
    Matrix<NovikovScalar> m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        const json& row = j.at(i);
        if (!row.is_array() || row.size() != cols)
            throw ValidationError("field '" + field + "', row " + std::to_string(i) +
                                  ": expected " + std::to_string(cols) + " entries");
        for (std::size_t k = 0; k < cols; ++k)
            m(i, k) = scalar_from_json(row.at(k), field + "[" + std::to_string(i) + "][" +
                                                      std::to_string(k) + "]");
    }
    return m;
}

json complex_to_json(const GradedComplex& c) {
    json j;
    j["grading"] = c.grading().mod2 ? "Z/2" : "Z";
    json degs = json::array();
    for (int n : c.degrees()) degs.push_back({{"degree", n}, {"generators", c.labels(n)}});
    j["degrees"] = std::move(degs);
    json diffs = json::array();
    for (int n : c.degrees())
        if (!c.d(n).is_zero())
            diffs.push_back({{"from_degree", n}, {"matrix", matrix_to_json(c.d(n))}});
    j["differential"] = std::move(diffs);
    return j;
}

GradedComplex complex_from_json(const json& j) {
    const std::string g = need(j, "grading").get<std::string>();
    if (g != "Z" && g != "Z/2") throw ValidationError("grading must be 'Z' or 'Z/2'");
    GradedComplex c(Grading{g == "Z/2"});
    for (const json& d : need(j, "degrees")) {
        const int n = need(d, "degree").get<int>();
        std::vector<std::string> labels;
        for (const json& l : need(d, "generators")) labels.push_back(l.get<std::string>());
        c.set_generators(n, std::move(labels));
    }
    if (j.contains("differential"))
        for (const json& d : j.at("differential")) {
            const int n = need(d, "from_degree").get<int>();
            c.set_differential(n, matrix_from_json(need(d, "matrix"),
                                                   c.rank(c.grading().next(n)), c.rank(n),
                                                   "differential@" + std::to_string(n)));
        }
    return c;
}

json chain_map_to_json(const ChainMap& m) {
    json blocks = json::array();
    for (int n : m.source.degrees())
        if (!m.block(n).is_zero())
            blocks.push_back({{"degree", n}, {"matrix", matrix_to_json(m.block(n))}});
    return {{"blocks", std::move(blocks)}};
}

ChainMap chain_map_from_json(const json& j, const GradedComplex& src, const GradedComplex& tgt) {
    ChainMap m{src, tgt, {}};
    for (const json& b : need(j, "blocks")) {
        const int n = need(b, "degree").get<int>();
        m.blocks[src.grading().normalize(n)] = matrix_from_json(
            need(b, "matrix"), tgt.rank(n), src.rank(n), "block@" + std::to_string(n));
    }
    return m;
}

json ray_to_json(const Ray& r) {
    json j;
    json prefix = json::array();
    for (const auto& c : r.prefix) prefix.push_back(complex_to_json(c));
    j["prefix"] = std::move(prefix);
    json maps = json::array();
    for (const auto& m : r.prefix_maps) maps.push_back(chain_map_to_json(m));
    j["maps"] = std::move(maps);
    json tail;
    tail["endomorphism"] = chain_map_to_json(r.tail.phi);
    switch (r.tail.kind) {
        case TailKind::Constant: tail["kind"] = "constant"; break;
        case TailKind::PositiveShift: tail["kind"] = "positive_shift"; break;
        case TailKind::General: tail["kind"] = "general"; break;
    }
    if (r.tail.delta) tail["delta"] = rational_to_json(*r.tail.delta);
    j["tail"] = std::move(tail);
    return j;
}

Ray ray_from_json(const json& j) {
    Ray r;
    for (const json& c : need(j, "prefix")) r.prefix.push_back(complex_from_json(c));
    if (r.prefix.empty()) throw ValidationError("ray needs a nonempty prefix");
    const json& maps = need(j, "maps");
    if (maps.size() + 1 != r.prefix.size())
        throw ValidationError("ray needs one connecting map per consecutive prefix pair");
    for (std::size_t i = 0; i < maps.size(); ++i)
        r.prefix_maps.push_back(chain_map_from_json(maps.at(i), r.prefix[i], r.prefix[i + 1]));
    const json& tail = need(j, "tail");
    r.tail.phi = chain_map_from_json(need(tail, "endomorphism"), r.prefix.back(),
                                     r.prefix.back());
    const std::string kind =
        tail.contains("kind") ? tail.at("kind").get<std::string>() : "general";
    if (kind == "constant")
        r.tail.kind = TailKind::Constant;
    else if (kind == "positive_shift")
        r.tail.kind = TailKind::PositiveShift;
    else if (kind == "general")
        r.tail.kind = TailKind::General;
    else
        throw ValidationError("unknown tail kind '" + kind + "'");
    if (tail.contains("delta")) r.tail.delta = rational_from_json(tail.at("delta"), "delta");
    return r;
}

json morphism_to_json(const RayMorphism& m) {
    json j;
    json f = json::array();
    for (const auto& fm : m.f) f.push_back(chain_map_to_json(fm));
    j["f"] = std::move(f);
    json h = json::array();
    for (const auto& hi : m.h) {
        json blocks = json::array();
        for (const auto& [n, mat] : hi)
            blocks.push_back({{"degree", n}, {"matrix", matrix_to_json(mat)}});
        h.push_back({{"blocks", std::move(blocks)}});
    }
    j["h"] = std::move(h);
    j["strict"] = m.strict;
    return j;
}

RayMorphism morphism_from_json(const json& j, const Ray& src, const Ray& tgt) {
    RayMorphism m;
    m.source = src;
    m.target = tgt;
    const json& f = need(j, "f");
    for (std::size_t i = 0; i < f.size(); ++i)
        m.f.push_back(chain_map_from_json(f.at(i), src.slice(i), tgt.slice(i)));
    if (j.contains("h")) {
        const json& h = j.at("h");
        const Grading& gr = src.slice(0).grading();
        for (std::size_t i = 0; i < h.size(); ++i) {
            std::map<int, Matrix<NovikovScalar>> hi;
            for (const json& b : need(h.at(i), "blocks")) {
                const int n = need(b, "degree").get<int>();
                hi[gr.normalize(n)] = matrix_from_json(
                    need(b, "matrix"), tgt.slice(i + 1).rank(gr.prev(n)), src.slice(i).rank(n),
                    "h[" + std::to_string(i) + "]@" + std::to_string(n));
            }
            m.h.push_back(std::move(hi));
        }
    }
    m.strict = j.contains("strict") && j.at("strict").get<bool>();
    return m;
}

json unit_to_json(const UnitData& u) {
    json j;
    json uu = json::array();
    for (const auto& ui : u.u) {
        json row = json::array();
        for (const auto& s : ui) row.push_back(scalar_to_json(s));
        uu.push_back(std::move(row));
    }
    j["u"] = std::move(uu);
    json pp = json::array();
    for (const auto& pi : u.p) {
        json row = json::array();
        for (const auto& s : pi) row.push_back(scalar_to_json(s));
        pp.push_back(std::move(row));
    }
    j["p"] = std::move(pp);
    return j;
}

UnitData unit_from_json(const json& j) {
    UnitData u;
    for (const json& row : need(j, "u")) {
        std::vector<NovikovScalar> v;
        for (const json& s : row) v.push_back(scalar_from_json(s, "u"));
        u.u.push_back(std::move(v));
    }
    if (j.contains("p"))
        for (const json& row : j.at("p")) {
            std::vector<NovikovScalar> v;
            for (const json& s : row) v.push_back(scalar_from_json(s, "p"));
            u.p.push_back(std::move(v));
        }
    return u;
}

json neck_to_json(const NeckParams& p) {
    json j;
    j["alpha"] = rational_to_json(p.alpha);
    j["s"] = rational_to_json(p.s);
    j["eps"] = rational_to_json(p.eps);
    j["delta"] = rational_to_json(p.delta);
    j["c"] = rational_to_json(p.c);
    j["K"] = rational_to_json(p.K);
    j["stilde"] = rational_to_json(p.stilde);
    json periods = json::array();
    for (const auto& t : p.reeb_periods) periods.push_back(rational_to_json(t));
    j["reeb_periods"] = std::move(periods);
    return j;
}

NeckParams neck_from_json(const json& j) {
    std::vector<Rational> periods;
    if (j.contains("reeb_periods"))
        for (const json& t : j.at("reeb_periods"))
            periods.push_back(rational_from_json(t, "reeb_periods"));
    return build_neck(rational_from_json(need(j, "alpha"), "alpha"),
                      rational_from_json(need(j, "s"), "s"),
                      rational_from_json(need(j, "eps"), "eps"),
                      rational_from_json(need(j, "delta"), "delta"),
                      rational_from_json(need(j, "c"), "c"),
                      rational_from_json(need(j, "K"), "K"), periods);
}

json orbit_to_json(const OrbitDatum& o) {
    json j;
    j["kind"] = o.kind == OrbitDatum::Kind::constant ? "constant" : "nonconstant";
    if (o.kind == OrbitDatum::Kind::constant) {
        j["region"] = o.region == OrbitDatum::Region::inner ? "inner" : "outer";
    } else {
        j["r"] = rational_to_json(o.r);
        j["period"] = rational_to_json(o.period);
    }
    j["cz"] = o.cz;
    return j;
}

OrbitDatum orbit_from_json(const json& j) {
    OrbitDatum o;
    const std::string kind = need(j, "kind").get<std::string>();
    if (kind == "constant") {
        o.kind = OrbitDatum::Kind::constant;
        const std::string region = need(j, "region").get<std::string>();
        if (region == "inner")
            o.region = OrbitDatum::Region::inner;
        else if (region == "outer")
            o.region = OrbitDatum::Region::outer;
        else
            throw ValidationError("orbit region must be 'inner' or 'outer'");
    } else if (kind == "nonconstant") {
        o.kind = OrbitDatum::Kind::nonconstant;
        o.r = rational_from_json(need(j, "r"), "r");
        o.period = rational_from_json(need(j, "period"), "period");
    } else {
        throw ValidationError("orbit kind must be 'constant' or 'nonconstant'");
    }
    if (j.contains("cz")) o.cz = j.at("cz").get<long>();
    return o;
}

std::map<std::string, OrbitDatum> orbit_map_from_json(const json& j) {
    std::map<std::string, OrbitDatum> out;
    if (!j.is_object()) throw ValidationError("orbit map must be an object keyed by label");
    for (const auto& [label, datum] : j.items()) out[label] = orbit_from_json(datum);
    return out;
}

json barcode_to_json(const Barcode& b) {
    json j;
    if (b.precision) j["precision"] = rational_to_json(*b.precision);
    json degs = json::array();
    for (const auto& [n, d] : b.degrees) {
        json torsion = json::array();
        for (const auto& t : d.torsion) torsion.push_back(rational_to_json(t));
        degs.push_back({{"degree", n},
                        {"free", d.free_rank},
                        {"torsion", std::move(torsion)}});
    }
    j["degrees"] = std::move(degs);
    return j;
}

json verdict_to_json(const VisibilityVerdict& v) {
    json j;
    j["verdict"] = v.verdict_str();
    j["certificate"] = v.certificate;
    json sched = json::array(), bars = json::array(), vis = json::array();
    for (const auto& lam : v.schedule) sched.push_back(rational_to_json(lam));
    for (const auto& b : v.barcodes) bars.push_back(barcode_to_json(b));
    for (bool f : v.visible_at) vis.push_back(f);
    j["schedule"] = std::move(sched);
    j["barcodes"] = std::move(bars);
    j["visible_at"] = std::move(vis);
    return j;
}

}  // namespace novtel::io
