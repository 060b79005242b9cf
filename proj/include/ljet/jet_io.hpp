#pragma once

// ljet-1 JSON schema for HypersurfaceJet.
//
//   {"schema": "ljet-1", "n": 5, "g": [[...]], "lambda": [[...]],
//    "lambda3": [[[...]]], "curvature": {"C1_11a": [...], "C1_1ab": [[...]],
//    "Cn_ab1": [[...]], "Ca_b1c": [[[...]]], "Ca_bce": [[[[...]]]],
//    "C_11a": [...], "C_1ab": [[...]]}, "nu": 0, "nu_a": [...],
//    "nu_ab": [[...]], "rho": 0, "rho_a": [...], "rho_ab": [[...]],
//    "phi1": 0, "phi_a": [...], "harmonic_normalized": false}
//
// phi1, phi_a and harmonic_normalized are optional; every other key is
// required and unknown keys are rejected.

#include <iosfwd>
#include <json.hpp>
#include <string>

#include "ljet/jet.hpp"

namespace ljet {

inline constexpr const char* kJetSchema = "ljet-1";

nlohmann::json to_json(const HypersurfaceJet& jet);
// Throws SchemaError naming the offending field.
HypersurfaceJet jet_from_json(const nlohmann::json& doc);

// Parse + schema + validate.  Throws ParseError, SchemaError or
// ValidationError respectively.
HypersurfaceJet parse_jet(const std::string& text, const Tolerances& tol = Tolerances{});
HypersurfaceJet load_jet(std::istream& in, const Tolerances& tol = Tolerances{});
HypersurfaceJet load_jet(const std::string& path, const Tolerances& tol = Tolerances{});

std::string save_jet(const HypersurfaceJet& jet);
void save_jet(const HypersurfaceJet& jet, const std::string& path);

// Array helpers shared with the report writers.
nlohmann::json to_json(const Vector& v);
nlohmann::json to_json(const Matrix& a);
nlohmann::json to_json(const Tensor3& t);
nlohmann::json to_json(const Tensor4& t);

}  // namespace ljet
