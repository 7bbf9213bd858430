#pragma once

#include <string>

#include <json.hpp>

#include "novtel/completion.hpp"
#include "novtel/neck.hpp"
#include "novtel/ray.hpp"
#include "novtel/unital.hpp"

namespace novtel::io {

using nlohmann::json;

/// Parses a file, wrapping parse errors in ValidationError with the path.
json load_json(const std::string& path);

json rational_to_json(const Rational& q);
Rational rational_from_json(const json& j, const std::string& field);

json scalar_to_json(const NovikovScalar& s);
NovikovScalar scalar_from_json(const json& j, const std::string& field);

json matrix_to_json(const Matrix<NovikovScalar>& m);
Matrix<NovikovScalar> matrix_from_json(const json& j, std::size_t rows, std::size_t cols,
                                       const std::string& field);

json complex_to_json(const GradedComplex& c);
GradedComplex complex_from_json(const json& j);

json chain_map_to_json(const ChainMap& m);
ChainMap chain_map_from_json(const json& j, const GradedComplex& src, const GradedComplex& tgt);

json ray_to_json(const Ray& r);
Ray ray_from_json(const json& j);

json morphism_to_json(const RayMorphism& m);
RayMorphism morphism_from_json(const json& j, const Ray& src, const Ray& tgt);

json unit_to_json(const UnitData& u);
UnitData unit_from_json(const json& j);

json neck_to_json(const NeckParams& p);
NeckParams neck_from_json(const json& j);

json orbit_to_json(const OrbitDatum& o);
OrbitDatum orbit_from_json(const json& j);
std::map<std::string, OrbitDatum> orbit_map_from_json(const json& j);

json barcode_to_json(const Barcode& b);
json verdict_to_json(const VisibilityVerdict& v);

}  // namespace novtel::io
