#include "ljet/tolerances.hpp"

#include <cstdlib>
#include <string>

#include "ljet/errors.hpp"

namespace ljet {

const char* to_string(Degeneracy d) {
  switch (d) {
    case Degeneracy::kUmbilical: return "umbilical";
    case Degeneracy::kSpecialType: return "special-type";
    case Degeneracy::kSingularPole: return "singular-pole";
    case Degeneracy::kSingularSystem: return "singular-system";
    case Degeneracy::kSingularChart: return "singular-chart";
    case Degeneracy::kFrameNotReduced: return "frame-not-reduced";
    case Degeneracy::kMissingData: return "missing-data";
  }
  return "unknown";
}

Tolerances Tolerances::defaults() { return Tolerances{}; }

Tolerances Tolerances::strict() {
  Tolerances t;
  t.symmetry = 1e-14;
  t.residual = 1e-12;
  t.det_threshold = 1e-12;
  t.cluster = 1e-10;
  t.umbilic = 1e-9;
  t.integrability = 1e-11;
  t.solve_residual = 1e-11;
  t.fd_symmetry = 1e-6;
  t.gauge = 1e-9;
  t.weight = 1e-7;
  return t;
}

Tolerances Tolerances::from_environment() {
  const char* profile = std::getenv("LJET_TOL_PROFILE");
  if (profile == nullptr) return defaults();
  const std::string p(profile);
  if (p == "strict") return strict();
  if (p == "default" || p.empty()) return defaults();
  throw PreconditionError("LJET_TOL_PROFILE must be 'strict' or 'default', got '" + p + "'");
}

namespace {

template <typename F>
void for_each_field(Tolerances& t, F&& f) {
  f("symmetry", t.symmetry);
  f("residual", t.residual);
  f("det_threshold", t.det_threshold);
  f("cluster", t.cluster);
  f("umbilic", t.umbilic);
  f("integrability", t.integrability);
  f("solve_residual", t.solve_residual);
  f("fd_symmetry", t.fd_symmetry);
  f("gauge", t.gauge);
  f("weight", t.weight);
}

}  // namespace

void Tolerances::set(std::string_view name, double value) {
  if (!(value > 0.0)) {
    throw PreconditionError("tolerance '" + std::string(name) + "' must be positive");
  }
  bool found = false;
  for_each_field(*this, [&](const char* field, double& slot) {
    if (name == field) {
      slot = value;
      found = true;
    }
  });
  if (!found) throw PreconditionError("unknown tolerance '" + std::string(name) + "'");
}

std::map<std::string, double> Tolerances::as_map() const {
  std::map<std::string, double> out;
  auto copy = *this;
  for_each_field(copy, [&](const char* field, double& slot) { out[field] = slot; });
  return out;
}

}  // namespace ljet
