#pragma once

// Full invariant pipeline on one jet: foci, harmonic pole, h, mu, H, the
// screen objects, the normalizing forms and the gamma_2 connection.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ljet/connection.hpp"

namespace ljet {

struct NormalizationResult {
  FociReport foci;
  FundamentalTensor h;
  PoleRegularity pole;
  MuInvariants mu;
  std::optional<Vector> umbilical_mu_a;
  std::optional<HAffinor> H;
  std::optional<NormalizingObjects> objects;
  std::optional<NormalizingForms> forms;
  std::optional<InvariantPoint> point;
};

struct ConnectionReport {
  Torsion torsion;
  Gamma2Curvature curvature;
  Integrability integrability;
  std::optional<Gamma1Curvature> gamma1;
};

struct Analysis {
  // regular | umbilical | special-type | singular-pole
  std::string classification = "regular";
  NormalizationResult result;
  std::optional<ConnectionReport> connection;
  std::map<std::string, double> residuals;
  std::vector<std::string> notes;
  bool degenerate() const { return classification != "regular"; }
};

// Throws ValidationError when the jet fails validation.
Analysis analyze(const HypersurfaceJet& jet, const Tolerances& tol = Tolerances{});

nlohmann::json to_json(const Analysis& a);

}  // namespace ljet
