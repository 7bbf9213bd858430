#include "cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>

#include "novtel/errors.hpp"
#include "novtel/io.hpp"

namespace novtel::cli {

namespace {

using io::json;

std::vector<Rational> parse_schedule(const std::string& s) {
    std::vector<Rational> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        const std::size_t comma = s.find(',', pos);
        const std::string tok = s.substr(pos, comma == std::string::npos ? comma : comma - pos);
        try {
            out.push_back(parse_rational(tok));
        } catch (const std::exception&) {
            throw ValidationError("bad schedule entry '" + tok + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    for (std::size_t i = 0; i + 1 < out.size(); ++i)
        if (!(out[i] < out[i + 1]))
            throw ValidationError("schedule must be strictly increasing");
    if (out.empty() || !(out.front() > 0))
        throw ValidationError("schedule entries must be positive");
    return out;
}

// Degree-shifted block families (homotopy data): [{"blocks":[{degree,matrix}]}]
// with entry i mapping src slice i to tgt slice i+tgt_off, degree n -> n-drop.
std::vector<std::map<int, Matrix<NovikovScalar>>> blocks_from_json(
    const json& j, const Ray& src, const Ray& tgt, int drop, std::size_t tgt_off,
    const std::string& field) {
    std::vector<std::map<int, Matrix<NovikovScalar>>> out;
    const Grading& gr = src.slice(0).grading();
    for (std::size_t i = 0; i < j.size(); ++i) {
        std::map<int, Matrix<NovikovScalar>> blocks;
        if (!j.at(i).is_object() || !j.at(i).contains("blocks"))
            throw ValidationError("field '" + field + "' entries need 'blocks'");
        for (const json& b : j.at(i).at("blocks")) {
            int n = b.at("degree").get<int>();
            n = gr.normalize(n);
            int m = n;
            for (int k = 0; k < drop; ++k) m = gr.prev(m);
            blocks[n] = io::matrix_from_json(
                b.at("matrix"), tgt.slice(i + tgt_off).rank(m), src.slice(i).rank(n),
                field + "[" + std::to_string(i) + "]@" + std::to_string(n));
        }
        out.push_back(std::move(blocks));
    }
    return out;
}

void render_text(const json& j, std::ostream& out, int indent = 0) {
    const std::string pad(indent, ' ');
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) {
            if (v.is_object() || (v.is_array() && !v.empty() && !v.front().is_primitive())) {
                out << pad << k << ":\n";
                render_text(v, out, indent + 2);
            } else {
                out << pad << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump())
                    << "\n";
            }
        }
    } else if (j.is_array()) {
        for (const auto& v : j) {
            if (v.is_primitive()) {
                out << pad << "- " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
            } else {
                out << pad << "-\n";
                render_text(v, out, indent + 2);
            }
        }
    } else {
        out << pad << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
    }
}

void emit(const json& j, const std::string& format, std::ostream& out) {
    if (format == "text")
        render_text(j, out);
    else
        out << j.dump(2) << "\n";
}

Ray load_ray(const std::string& path) {
    Ray r = io::ray_from_json(io::load_json(path));
    r.validate();
    return r;
}

std::size_t cap_override(std::size_t fallback) {
    if (const char* env = std::getenv("NOVTEL_MAX_RANK")) {
        const long v = std::atol(env);
        if (v > 0) return static_cast<std::size_t>(v);
    }
    return fallback;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact Novikov-ring telescope calculator"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string format = "json";
    app.add_option("--format", format, "Report format")
        ->check(CLI::IsMember({"json", "text"}));
    std::size_t max_rank = cap_override(4096);
    app.add_option("--max-rank", max_rank, "Total rank cap for assembled complexes");

    std::string path, path2, lambda_s = "1", schedule_s = "1", cap_s = "10";
    std::vector<std::string> a_factors;
    std::size_t M = 4;

    auto* validate = app.add_subcommand("validate", "Structural checks on a complex or ray file");
    validate->add_option("file", path)->required();

    auto* homology = app.add_subcommand("homology", "Exact barcode of a complex");
    homology->add_option("complex", path)->required();

    auto* telh = app.add_subcommand("tel-homology", "Truncated completed-telescope homology");
    telh->add_option("ray", path)->required();
    telh->add_option("--lambda", lambda_s, "Precision")->required();

    auto* vis = app.add_subcommand("visibility", "Visibility verdict along a lambda schedule");
    vis->add_option("ray", path)->required();
    vis->add_option("--schedule", schedule_s, "Comma-separated lambdas")->required();

    auto* unitc = app.add_subcommand("unit-check", "Validate unit data on a ray");
    unitc->add_option("ray", path)->required();
    unitc->add_option("unit", path2)->required();

    auto* realc = app.add_subcommand("realize-check", "Validate a realization bundle");
    realc->add_option("bundle", path)->required();
    std::string real_schedule;
    realc->add_option("--schedule", real_schedule, "Also run the unit visibility test");

    auto* neckc = app.add_subcommand("neck-check", "Derive and check neck constants");
    neckc->add_option("neck", path)->required();
    std::string bound_s;
    neckc->add_option("--bound", bound_s, "Check |F-f| bounds against this constant");

    auto* ell = app.add_subcommand("ellipsoid", "Reeb orbits of an ellipsoid up to a period cap");
    ell->add_option("--a", a_factors, "Ellipsoid factors")->required();
    ell->add_option("--cap", cap_s, "Period cap")->required();

    auto* phia = app.add_subcommand("phi-apply", "Rescale an orbit-labeled ray through a neck");
    phia->add_option("ray", path)->required();
    phia->add_option("neck", path2)->required();

    auto* oracle = app.add_subcommand("oracle", "Brute-force finite-telescope homology");
    oracle->add_option("ray", path)->required();
    oracle->add_option("--M", M, "Number of slices")->required();
    oracle->add_option("--lambda", lambda_s, "Precision")->required();

    std::vector<const char*> argv;
    argv.push_back("novtel");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 1;
    }

    json report;
    if (*validate) {
        const json j = io::load_json(path);
        if (j.contains("prefix")) {
            load_ray(path);
            report = {{"status", "ok"}, {"kind", "ray"}};
        } else if (j.contains("grading")) {
            io::complex_from_json(j).validate();
            report = {{"status", "ok"}, {"kind", "complex"}};
        } else {
            throw ValidationError("file is neither a ray nor a complex");
        }
    } else if (*homology) {
        GradedComplex c = io::complex_from_json(io::load_json(path));
        c.validate();
        report = io::barcode_to_json(homology_barcode(c));
    } else if (*telh) {
        Ray r = load_ray(path);
        report = io::barcode_to_json(truncated_homology(r, parse_rational(lambda_s)));
    } else if (*vis) {
        Ray r = load_ray(path);
        report = io::verdict_to_json(visibility(r, parse_schedule(schedule_s)));
    } else if (*unitc) {
        Ray r = load_ray(path);
        UnitData u = io::unit_from_json(io::load_json(path2));
        validate_unit(r, u);
        report = {{"status", "ok"}};
    } else if (*realc) {
        const json j = io::load_json(path);
        Realization r;
        r.c = io::ray_from_json(j.at("c"));
        r.cprime = io::ray_from_json(j.at("cprime"));
        r.c.validate();
        r.cprime.validate();
        Ray target = io::ray_from_json(j.at("target"));
        target.validate();
        r.f = io::morphism_from_json(j.at("f"), r.c, target);
        r.f.validate();
        Ray tens = tensor_rays(r.cprime, r.c);
        r.prod = io::morphism_from_json(j.at("prod"), tens, target);
        r.prod.validate();
        r.unit = io::unit_from_json(j.at("unit"));
        if (j.contains("k")) r.k = blocks_from_json(j.at("k"), r.c, target, 1, 0, "k");
        if (j.contains("q")) r.q = blocks_from_json(j.at("q"), r.c, target, 2, 1, "q");
        check_realization(r);
        report = {{"status", "ok"}};
        if (!real_schedule.empty()) {
            UnitVisibility uv = visibility_via_unit(r, parse_schedule(real_schedule));
            report["unit_zero"] = uv.unit_zero;
            report["visibility"] = io::verdict_to_json(uv.vis);
        }
    } else if (*neckc) {
        NeckParams p = io::neck_from_json(io::load_json(path));
        report = io::neck_to_json(p);
        report["admissible"] = true;
        if (!bound_s.empty()) {
            BoundsReport b = check_bounds(p, parse_rational(bound_s),
                                          {rat(10), rat(1000), rat(1000000)});
            report["bounds_ok"] = b.ok;
            report["end_inner"] = io::rational_to_json(b.end_inner);
            report["end_outer"] = io::rational_to_json(b.end_outer);
            if (!b.ok) report["witness"] = b.witness;
        }
    } else if (*ell) {
        std::vector<Rational> a;
        for (const auto& s : a_factors) a.push_back(parse_rational(s));
        bool degenerate = false;
        auto orbits = ellipsoid_orbits(a, parse_rational(cap_s), &degenerate);
        json table = json::array();
        for (const auto& o : orbits) table.push_back(io::orbit_to_json(o));
        report = {{"orbits", std::move(table)}, {"degenerate", degenerate}};
        if (degenerate) report["warning"] = "integral period ratio: indices may be degenerate";
    } else if (*phia) {
        Ray r = load_ray(path);
        const json nj = io::load_json(path2);
        NeckParams p = io::neck_from_json(nj);
        if (!nj.contains("orbits"))
            throw ValidationError("neck file needs an 'orbits' map for phi-apply");
        auto orbits = io::orbit_map_from_json(nj.at("orbits"));
        auto [rescaled, phi] = apply_phi(r, orbits, p);
        report = {{"ray", io::ray_to_json(rescaled)}, {"phi", io::morphism_to_json(phi)}};
        if (nj.contains("probe")) {
            // completion probe: {bound_a, cap1?, at_cap1?, at_cap2?, lambdas?}
            const json& pj = nj.at("probe");
            IndexTable table;
            if (pj.contains("at_cap1")) {
                std::vector<OrbitDatum> o1, o2;
                for (const json& o : pj.at("at_cap1")) o1.push_back(io::orbit_from_json(o));
                for (const json& o : pj.at("at_cap2")) o2.push_back(io::orbit_from_json(o));
                table = index_bounded_check(o1, o2, parse_rational(pj.at("cap1").get<std::string>()));
            } else {
                std::vector<OrbitDatum> listed;
                for (const auto& [l, o] : orbits) listed.push_back(o);
                table = index_bounded_check(listed);
            }
            std::vector<Rational> lambdas;
            if (pj.contains("lambdas"))
                for (const json& l : pj.at("lambdas"))
                    lambdas.push_back(io::rational_from_json(l, "lambdas"));
            const auto v = phi_extends(r, rescaled, orbits, p,
                                       parse_rational(pj.at("bound_a").get<std::string>()), table,
                                       lambdas);
            if (!v.extends) throw UnsupportedError(v.detail);
            report["extends"] = true;
            report["detail"] = v.detail;
        }
    } else if (*oracle) {
        Ray r = load_ray(path);
        report = io::barcode_to_json(
            brute_force_telescope_homology(r, M, parse_rational(lambda_s), max_rank));
    }
    emit(report, format, out);
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        return dispatch(args, out, err);
    } catch (const ResourceCapError& e) {
        err << "resource cap: " << e.what() << "\n";
        return 3;
    } catch (const UnsupportedError& e) {
        err << "unsupported: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        err << "invalid: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace novtel::cli
