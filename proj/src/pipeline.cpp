#include "ljet/pipeline.hpp"

#include <cmath>

#include "ljet/errors.hpp"
#include "ljet/jet_io.hpp"

namespace ljet {

Analysis analyze(const HypersurfaceJet& input, const Tolerances& tol) {
  const ValidationReport vr = validate(input, tol);
  if (!vr.ok()) throw ValidationError(vr.summary());

  Analysis out;
  NormalizationResult& r = out.result;
  const HypersurfaceJet jet =
      input.harmonic_normalized ? input : normalize_to_harmonic_pole(input);
  if (!input.harmonic_normalized) out.notes.push_back("moved A_1 to the harmonic pole");
  const int m = jet.m();
  const ScreenMetric g = jet.metric();

  r.foci = singular_points(input, tol);
  double sum = 0.0;
  for (double s : r.foci.s) sum += s;
  out.residuals["foci_vieta"] = std::abs(sum - m * r.foci.lambda_mean);
  r.h = fundamental_tensor(jet);
  out.residuals["trace_h"] = std::abs(r.h.h_mixed.trace());
  r.pole = pole_regularity(jet, tol);
  r.mu = mu_invariants(jet);

  if (is_umbilical(r.h, jet.g, tol)) {
    out.classification = "umbilical";
    if (m >= 2 && jet.n > 3) r.umbilical_mu_a = umbilical_mu_a(jet);
    return out;
  }
  if (!r.pole.regular) out.classification = "singular-pole";

  r.H = H_affinor(jet, r.mu.mu, tol);
  out.residuals["trace_H"] = std::abs(r.H->H_mixed.trace());
  if (r.H->singular()) {
    out.classification = "special-type";
    return out;
  }
  out.residuals["H_inverse"] =
      max_abs(Matrix(r.H->H_mixed * *r.H->H_inv - Matrix::Identity(m, m)));
  r.objects = normalizing_objects(jet, r.mu.mu, r.mu.mu_a, *r.H);

  try {
    r.forms = solve_normalizing_forms(jet, tol);
  } catch (const DegenerateError& e) {
    out.notes.push_back(std::string("connection stage skipped: ") + e.what());
    return out;
  }
  out.residuals["normalizing_solve"] = r.forms->residual;
  r.point = invariant_point(g, r.forms->tau_ab);
  std::complex<double> zsum = 0.0;
  for (const auto& z : r.point->congruence_foci) zsum += z;
  out.residuals["invariant_point_trace"] = std::abs(zsum + double(m) * r.point->tau);

  ConnectionReport c;
  c.torsion = gamma2_torsion(jet, *r.forms);
  c.curvature = gamma2_curvature(jet, *r.forms);
  out.residuals["curvature_crosscheck"] =
      max_difference(c.curvature, gamma2_curvature_from_forms(jet, *r.forms));
  c.integrability = integrability(jet, *r.forms, tol);
  out.residuals["integrability_identity"] = c.integrability.identity_residual;
  if (jet.phi1 && jet.phi_a) {
    c.gamma1 = gamma1_curvature(jet, *r.forms);
  } else {
    out.notes.push_back("gamma_1 curvature needs fifth-order data");
  }
  out.connection = std::move(c);
  return out;
}

namespace {

nlohmann::json complex_list(const std::vector<std::complex<double>>& z) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& v : z) a.push_back({v.real(), v.imag()});
  return a;
}

nlohmann::json forms_json(const std::vector<TwoForm>& f) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& w : f) a.push_back(to_json(w));
  return a;
}

}  // namespace

nlohmann::json to_json(const Analysis& a) {
  using nlohmann::json;
  const NormalizationResult& r = a.result;
  json j;
  j["classification"] = a.classification;
  j["foci"] = {{"s", r.foci.s},
               {"distinct", r.foci.distinct},
               {"multiplicities", r.foci.multiplicities},
               {"lambda_mean", r.foci.lambda_mean},
               {"pole_coordinate", r.foci.pole_coordinate}};
  json n;
  n["h_ab"] = to_json(r.h.h_ab);
  n["h_mixed"] = to_json(r.h.h_mixed);
  n["pole"] = {{"regular", r.pole.regular}, {"det", r.pole.det}, {"relative_det", r.pole.relative_det}};
  n["mu"] = r.mu.mu;
  n["mu_a"] = to_json(r.mu.mu_a);
  if (r.umbilical_mu_a) n["umbilical_mu_a"] = to_json(*r.umbilical_mu_a);
  if (r.H) {
    n["H_mixed"] = to_json(r.H->H_mixed);
    n["H_relative_det"] = r.H->relative_det;
    if (r.H->H_inv) n["H_inv"] = to_json(*r.H->H_inv);
  }
  if (r.objects) {
    n["M_a"] = to_json(r.objects->M);
    n["N_a"] = to_json(r.objects->N);
    n["P_a"] = to_json(r.objects->P);
    n["Q_a"] = to_json(r.objects->Q);
  }
  if (r.forms) {
    n["sigma_a"] = to_json(r.forms->sigma_a);
    n["tau_a"] = to_json(r.forms->tau_a);
    n["sigma_ab"] = to_json(r.forms->sigma_ab);
    n["tau_ab"] = to_json(r.forms->tau_ab);
  }
  if (r.point) {
    n["tau"] = r.point->tau;
    n["Cn_coordinate"] = r.point->Cn_coordinate;
    n["congruence_foci"] = complex_list(r.point->congruence_foci);
  }
  j["normalization"] = n;
  if (a.connection) {
    const ConnectionReport& c = *a.connection;
    json cj;
    cj["torsion_1_1a"] = to_json(c.torsion.torsion_1_1a);
    cj["torsion_1_ab"] = to_json(c.torsion.torsion_1_ab);
    cj["torsion_a_1b"] = to_json(c.torsion.torsion_a_1b);
    cj["R1_11a"] = to_json(c.curvature.R1_11a);
    cj["R1_1ab"] = to_json(c.curvature.R1_1ab);
    cj["Ra_b1c"] = to_json(c.curvature.Ra_b1c);
    cj["Ra_bce"] = to_json(c.curvature.Ra_bce);
    cj["integrable_S"] = c.integrability.integrable_S;
    cj["integrable_Stilde"] = c.integrability.integrable_Stilde;
    cj["residual_S"] = c.integrability.residual_S;
    cj["residual_Stilde"] = c.integrability.residual_Stilde;
    if (c.gamma1) {
      json g1;
      g1["omega_11"] = to_json(c.gamma1->omega_11);
      g1["omega_a1"] = forms_json(c.gamma1->omega_a1);
      g1["omega_1a"] = forms_json(c.gamma1->omega_1a);
      json ab = json::array();
      for (const auto& row : c.gamma1->omega_ab) ab.push_back(forms_json(row));
      g1["omega_ab"] = ab;
      g1["weyl_terms_complete"] = c.gamma1->weyl_terms_complete;
      cj["gamma1"] = g1;
    }
    j["connection"] = cj;
  }
  j["residuals"] = a.residuals;
  j["notes"] = a.notes;
  return j;
}

}  // namespace ljet
