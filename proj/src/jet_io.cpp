#include "ljet/jet_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "ljet/errors.hpp"

namespace ljet {

using nlohmann::json;

json to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json to_json(const Matrix& a) {
  json out = json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < a.cols(); ++j) row.push_back(a(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

json to_json(const Tensor3& t) {
  json out = json::array();
  for (int a = 0; a < t.m(); ++a) {
    json slab = json::array();
    for (int b = 0; b < t.m(); ++b) {
      json row = json::array();
      for (int c = 0; c < t.m(); ++c) row.push_back(t(a, b, c));
      slab.push_back(std::move(row));
    }
    out.push_back(std::move(slab));
  }
  return out;
}

json to_json(const Tensor4& t) {
  json out = json::array();
  for (int a = 0; a < t.m(); ++a) {
    json block = json::array();
    for (int b = 0; b < t.m(); ++b) {
      json slab = json::array();
      for (int c = 0; c < t.m(); ++c) {
        json row = json::array();
        for (int d = 0; d < t.m(); ++d) row.push_back(t(a, b, c, d));
        slab.push_back(std::move(row));
      }
      block.push_back(std::move(slab));
    }
    out.push_back(std::move(block));
  }
  return out;
}

json to_json(const HypersurfaceJet& jet) {
  const auto& c = jet.curvature;
  json doc;
  doc["schema"] = kJetSchema;
  doc["n"] = jet.n;
  doc["g"] = to_json(jet.g);
  doc["lambda"] = to_json(jet.lambda);
  doc["lambda3"] = to_json(jet.lambda3);
  doc["curvature"] = {
      {"C1_11a", to_json(c.C1_11a)}, {"C1_1ab", to_json(c.C1_1ab)},
      {"Cn_ab1", to_json(c.Cn_ab1)}, {"Ca_b1c", to_json(c.Ca_b1c)},
      {"Ca_bce", to_json(c.Ca_bce)}, {"C_11a", to_json(c.C_11a)},
      {"C_1ab", to_json(c.C_1ab)},
  };
  doc["nu"] = jet.nu;
  doc["nu_a"] = to_json(jet.nu_a);
  doc["nu_ab"] = to_json(jet.nu_ab);
  doc["rho"] = jet.rho;
  doc["rho_a"] = to_json(jet.rho_a);
  doc["rho_ab"] = to_json(jet.rho_ab);
  if (jet.phi1) doc["phi1"] = *jet.phi1;
  if (jet.phi_a) doc["phi_a"] = to_json(*jet.phi_a);
  doc["harmonic_normalized"] = jet.harmonic_normalized;
  return doc;
}

namespace {

const json& require(const json& obj, const std::string& key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError("missing field \"" + where + key + "\"");
  return *it;
}

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!known.count(it.key())) throw SchemaError("unknown field \"" + where + it.key() + "\"");
  }
}

double number(const json& v, const std::string& name) {
  if (!v.is_number()) throw SchemaError("field \"" + name + "\" must be a number");
  return v.get<double>();
}

const json& array_of(const json& v, std::size_t len, const std::string& name) {
  if (!v.is_array()) throw SchemaError("field \"" + name + "\" must be an array");
  if (v.size() != len) {
    throw SchemaError("field \"" + name + "\" has length " + std::to_string(v.size()) +
                      ", expected " + std::to_string(len));
  }
  return v;
}

Vector read_vector(const json& v, int m, const std::string& name) {
  array_of(v, static_cast<std::size_t>(m), name);
  Vector out(m);
  for (int i = 0; i < m; ++i) out(i) = number(v[i], name);
  return out;
}

Matrix read_matrix(const json& v, int m, const std::string& name) {
  array_of(v, static_cast<std::size_t>(m), name);
  Matrix out(m, m);
  for (int i = 0; i < m; ++i) {
    const auto& row = array_of(v[i], static_cast<std::size_t>(m), name);
    for (int j = 0; j < m; ++j) out(i, j) = number(row[j], name);
  }
  return out;
}

Tensor3 read_tensor3(const json& v, int m, const std::string& name) {
  array_of(v, static_cast<std::size_t>(m), name);
  Tensor3 out(m);
  for (int a = 0; a < m; ++a) {
    const Matrix slab = read_matrix(v[a], m, name);
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) out(a, b, c) = slab(b, c);
  }
  return out;
}

Tensor4 read_tensor4(const json& v, int m, const std::string& name) {
  array_of(v, static_cast<std::size_t>(m), name);
  Tensor4 out(m);
  for (int a = 0; a < m; ++a) {
    const Tensor3 block = read_tensor3(v[a], m, name);
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c)
        for (int d = 0; d < m; ++d) out(a, b, c, d) = block(b, c, d);
  }
  return out;
}

}  // namespace

HypersurfaceJet jet_from_json(const json& doc) {
  if (!doc.is_object()) throw SchemaError("jet document must be a JSON object");
  reject_unknown(doc,
                 {"schema", "n", "g", "lambda", "lambda3", "curvature", "nu", "nu_a", "nu_ab",
                  "rho", "rho_a", "rho_ab", "phi1", "phi_a", "harmonic_normalized"},
                 "");
  const json& schema = require(doc, "schema", "");
  if (!schema.is_string() || schema.get<std::string>() != kJetSchema) {
    throw SchemaError(std::string("field \"schema\" must be \"") + kJetSchema + "\"");
  }
  const json& n_field = require(doc, "n", "");
  if (!n_field.is_number_integer()) throw SchemaError("field \"n\" must be an integer");
  HypersurfaceJet jet;
  jet.n = n_field.get<int>();
  if (jet.n < 4) throw SchemaError("field \"n\" must be >= 4");
  const int m = jet.m();

  jet.g = read_matrix(require(doc, "g", ""), m, "g");
  jet.lambda = read_matrix(require(doc, "lambda", ""), m, "lambda");
  jet.lambda3 = read_tensor3(require(doc, "lambda3", ""), m, "lambda3");

  const json& curv = require(doc, "curvature", "");
  if (!curv.is_object()) throw SchemaError("field \"curvature\" must be an object");
  reject_unknown(curv, {"C1_11a", "C1_1ab", "Cn_ab1", "Ca_b1c", "Ca_bce", "C_11a", "C_1ab"},
                 "curvature.");
  auto& c = jet.curvature;
  c.C1_11a = read_vector(require(curv, "C1_11a", "curvature."), m, "curvature.C1_11a");
  c.C1_1ab = read_matrix(require(curv, "C1_1ab", "curvature."), m, "curvature.C1_1ab");
  c.Cn_ab1 = read_matrix(require(curv, "Cn_ab1", "curvature."), m, "curvature.Cn_ab1");
  c.Ca_b1c = read_tensor3(require(curv, "Ca_b1c", "curvature."), m, "curvature.Ca_b1c");
  c.Ca_bce = read_tensor4(require(curv, "Ca_bce", "curvature."), m, "curvature.Ca_bce");
  c.C_11a = read_vector(require(curv, "C_11a", "curvature."), m, "curvature.C_11a");
  c.C_1ab = read_matrix(require(curv, "C_1ab", "curvature."), m, "curvature.C_1ab");

  jet.nu = number(require(doc, "nu", ""), "nu");
  jet.nu_a = read_vector(require(doc, "nu_a", ""), m, "nu_a");
  jet.nu_ab = read_matrix(require(doc, "nu_ab", ""), m, "nu_ab");
  jet.rho = number(require(doc, "rho", ""), "rho");
  jet.rho_a = read_vector(require(doc, "rho_a", ""), m, "rho_a");
  jet.rho_ab = read_matrix(require(doc, "rho_ab", ""), m, "rho_ab");

  if (auto it = doc.find("phi1"); it != doc.end()) jet.phi1 = number(*it, "phi1");
  if (auto it = doc.find("phi_a"); it != doc.end()) jet.phi_a = read_vector(*it, m, "phi_a");
  if (auto it = doc.find("harmonic_normalized"); it != doc.end()) {
    if (!it->is_boolean()) throw SchemaError("field \"harmonic_normalized\" must be a boolean");
    jet.harmonic_normalized = it->get<bool>();
  }
  return jet;
}

HypersurfaceJet parse_jet(const std::string& text, const Tolerances& tol) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  HypersurfaceJet jet = jet_from_json(doc);
  const ValidationReport report = validate(jet, tol);
  if (!report.ok()) throw ValidationError("jet failed validation:\n" + report.summary());
  return jet;
}

HypersurfaceJet load_jet(std::istream& in, const Tolerances& tol) {
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_jet(buffer.str(), tol);
}

HypersurfaceJet load_jet(const std::string& path, const Tolerances& tol) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open jet file '" + path + "'");
  return load_jet(in, tol);
}

std::string save_jet(const HypersurfaceJet& jet) { return to_json(jet).dump(2) + "\n"; }

void save_jet(const HypersurfaceJet& jet, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write jet file '" + path + "'");
  out << save_jet(jet);
}

}  // namespace ljet
