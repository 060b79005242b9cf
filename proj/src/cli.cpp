#include "ljet/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "ljet/cartan.hpp"
#include "ljet/errors.hpp"
#include "ljet/flat_model.hpp"
#include "ljet/gauge.hpp"
#include "ljet/jet_io.hpp"
#include "ljet/pipeline.hpp"

namespace ljet {

namespace {

using nlohmann::json;

constexpr int kOk = 0, kCheckFailed = 1, kInvalid = 2, kDegenerate = 3;

struct RunConfig {
  std::string command;
  std::vector<std::string> inputs;
  std::string params;
  std::string out;
  std::string format = "json";
  std::vector<std::string> tol_overrides;
  int jobs = 1;
  unsigned seed = 1;
  int n = 0;
  Tolerances tol;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Runs f(i) for i in [0, count) on `jobs` threads; f must not touch shared
// output.
void parallel_for(int count, int jobs, const std::function<void(int)>& f) {
  jobs = std::max(1, std::min(jobs, count));
  if (jobs == 1) {
    for (int i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < jobs; ++w)
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) f(i);
    });
  for (auto& t : pool) t.join();
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

Vector vec_of(const json& j, const char* what) {
  if (!j.is_array()) throw SchemaError(std::string(what) + " must be an array");
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw SchemaError(std::string(what) + " must hold numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

Matrix mat_of(const json& j, const char* what) {
  if (!j.is_array()) throw SchemaError(std::string(what) + " must be an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Matrix a(rows, rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Vector row = vec_of(j[r], what);
    if (row.size() != rows) throw SchemaError(std::string(what) + " must be square");
    a.row(r) = row.transpose();
  }
  return a;
}

double num_of(const json& j, const char* key, double dflt) {
  if (!j.contains(key)) return dflt;
  if (!j[key].is_number()) throw SchemaError(std::string(key) + " must be a number");
  return j[key].get<double>();
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out.empty() || cfg.out == "-") {
    out << text;
    return;
  }
  std::ofstream f(cfg.out);
  if (!f) throw PreconditionError("cannot write '" + cfg.out + "'");
  f << text;
}

// ---------------------------------------------------------------- analyze

struct AnalyzeItem {
  json report;
  std::string csv;
  int code = kOk;
  std::string error;
};

int cmd_analyze(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.inputs.empty()) throw PreconditionError("analyze needs --input");
  const int count = static_cast<int>(cfg.inputs.size());
  std::vector<AnalyzeItem> items(count);
  parallel_for(count, cfg.jobs, [&](int i) {
    AnalyzeItem& it = items[i];
    try {
      const HypersurfaceJet jet = load_jet(cfg.inputs[i], cfg.tol);
      const Analysis a = analyze(jet, cfg.tol);
      it.report = to_json(a);
      it.code = a.degenerate() ? kDegenerate : kOk;
      std::string foci;
      for (double s : a.result.foci.s) foci += (foci.empty() ? "" : ";") + num(s);
      it.csv = a.classification + "," + std::to_string(jet.m()) + "," + num(a.result.mu.mu) + "," +
               num(a.result.foci.lambda_mean) + "," + foci;
    } catch (const DegenerateError& e) {
      it.code = kDegenerate;
      it.error = e.what();
    } catch (const Error& e) {
      it.code = kInvalid;
      it.error = e.what();
    }
  });

  int code = kOk;
  std::string text;
  if (cfg.format == "csv") {
    text = "input,classification,m,mu,lambda_mean,foci\n";
    for (int i = 0; i < count; ++i)
      if (items[i].error.empty()) text += cfg.inputs[i] + "," + items[i].csv + "\n";
  } else {
    json doc;
    if (count == 1 && items[0].error.empty()) {
      doc = items[0].report;
    } else {
      doc = json::array();
      for (int i = 0; i < count; ++i) {
        json e = {{"input", cfg.inputs[i]}};
        if (items[i].error.empty())
          e["report"] = items[i].report;
        else
          e["error"] = items[i].error;
        doc.push_back(e);
      }
    }
    text = doc.dump(2) + "\n";
  }
  for (int i = 0; i < count; ++i) {
    if (!items[i].error.empty()) err << cfg.inputs[i] << ": " << items[i].error << "\n";
    code = std::max(code, items[i].code);
  }
  if (count == 1 && !items[0].error.empty()) return items[0].code;
  emit(cfg, text, out);
  return code;
}

// ----------------------------------------------------------- gauge-check

GaugeParams params_from_json(const json& j, int m) {
  if (!j.is_object()) throw SchemaError("gauge params must be an object");
  GaugeParams p;
  p.pi00 = num_of(j, "pi00", 0.0);
  p.pi11 = num_of(j, "pi11", 0.0);
  p.pi01 = num_of(j, "pi01", 0.0);
  p.pi_n0 = num_of(j, "pi_n0", 0.0);
  if (j.contains("pi_ab")) p.pi_ab = mat_of(j["pi_ab"], "pi_ab");
  if (j.contains("pi_a0")) p.pi_a0 = vec_of(j["pi_a0"], "pi_a0");
  if (j.contains("pi_a1")) p.pi_a1 = vec_of(j["pi_a1"], "pi_a1");
  try {
    return p.completed(m);
  } catch (const DimensionError& e) {
    throw SchemaError(std::string("gauge params: ") + e.what());
  }
}

int cmd_gauge_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.inputs.size() != 1) throw PreconditionError("gauge-check needs one --input jet");
  if (cfg.params.empty()) throw PreconditionError("gauge-check needs --params");
  const HypersurfaceJet jet = load_jet(cfg.inputs[0], cfg.tol);
  {
    const ValidationReport vr = validate(jet, cfg.tol);
    if (!vr.ok()) throw ValidationError(vr.summary());
  }
  const json pj = read_json_file(cfg.params);
  const GaugeParams p = params_from_json(pj, jet.m());
  const double t = num_of(pj, "t", 0.1);
  const double steps_d = num_of(pj, "steps", 1000);
  const int steps = static_cast<int>(steps_d);
  if (steps < 100) throw PreconditionError("steps must be >= 100");

  std::vector<std::pair<std::string, double>> laws;
  bool ok = true;
  const FlowResult fr = integrate_gauge_flow(jet, p, t, steps, cfg.tol);
  const FlowResiduals& r = fr.residuals;
  const std::pair<const char*, double> raw[] = {
      {"h_recompute", r.h_recompute},   {"lambda_recompute", r.lambda_recompute},
      {"mu_recompute", r.mu_recompute}, {"H_recompute", r.H_recompute},
      {"MN_recompute", r.MN_recompute}, {"PQ_recompute", r.PQ_recompute},
      {"PQ_law", r.PQ_law},             {"z_tau", r.z_tau},
      {"focus", r.focus}};
  for (const auto& [name, v] : raw)
    if (v >= 0.0) laws.emplace_back(name, v);
  laws.emplace_back("focus_invariance", check_focus_invariance(jet, p, t, steps));
  {
    const int half = steps;  // finer than the full flow, not a replay
    const FlowState a = integrate_state(fr.initial, p, t / 2, half);
    const FlowState b = integrate_state(a, p, t / 2, half);
    laws.emplace_back("composition", state_difference(b, fr.state));
  }
  for (const auto& [name, v] : laws)
    if (!(v < cfg.tol.gauge)) ok = false;

  json weights = json::array();
  for (const char* q : {"mu", "nu", "h_ab", "H", "H_tilde", "tau", "tau_a", "tau_ab"}) {
    try {
      const WeightMeasurement w = check_weight(q, jet, p, t, steps);
      const bool pass = std::abs(w.measured - w.expected) < cfg.tol.weight;
      ok = ok && pass;
      weights.push_back({{"quantity", w.quantity},
                         {"measured", w.measured},
                         {"expected", w.expected},
                         {"generator", w.generator},
                         {"pass", pass}});
    } catch (const Error& e) {
      weights.push_back({{"quantity", q}, {"skipped", e.what()}});
    }
  }

  std::string text;
  if (cfg.format == "csv") {
    text = "law,residual\n";
    for (const auto& [name, v] : laws) text += name + "," + num(v) + "\n";
    for (const auto& w : weights)
      if (w.contains("measured"))
        text += "weight_" + w["quantity"].get<std::string>() + "," +
                num(std::abs(w["measured"].get<double>() - w["expected"].get<double>())) + "\n";
  } else {
    json doc;
    json lj = json::object();
    for (const auto& [name, v] : laws) lj[name] = v;
    doc["t"] = t;
    doc["steps"] = steps;
    doc["residuals"] = lj;
    doc["weights"] = weights;
    doc["tolerance"] = {{"gauge", cfg.tol.gauge}, {"weight", cfg.tol.weight}};
    doc["pass"] = ok;
    text = doc.dump(2) + "\n";
  }
  emit(cfg, text, out);
  if (!ok) err << "gauge-check: residual above tolerance\n";
  return ok ? kOk : kCheckFailed;
}

// ----------------------------------------------------------------- cartan

int cmd_cartan(const RunConfig& cfg, std::ostream& out) {
  const CartanReport rep = characters(cfg.n, cfg.seed);
  std::string text;
  if (cfg.format == "csv") {
    std::string s;
    for (int v : rep.s) s += (s.empty() ? "" : ";") + std::to_string(v);
    text = "n,Q,N,involutive,s\n" + std::to_string(rep.n) + "," + std::to_string(rep.Q) + "," +
           std::to_string(rep.N) + "," + (rep.involutive ? "true" : "false") + "," + s + "\n";
  } else {
    json doc = {{"n", rep.n}, {"s", rep.s}, {"Q", rep.Q}, {"N", rep.N}, {"involutive", rep.involutive}};
    text = doc.dump(2) + "\n";
  }
  emit(cfg, text, out);
  return kOk;
}

// ------------------------------------------------------------------ model

struct ModelRun {
  ModelSpec spec;
  std::vector<double> r_end;
};

ModelRun model_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("model spec must be an object");
  ModelRun run;
  ModelSpec& s = run.spec;
  if (!j.contains("variant") || !j["variant"].is_string()) throw SchemaError("model spec needs variant");
  const std::string v = j["variant"];
  if (v == "null-cone")
    s.variant = ModelSpec::Variant::kNullCone;
  else if (v == "null-ruled")
    s.variant = ModelSpec::Variant::kNullRuled;
  else
    throw SchemaError("unknown variant '" + v + "'");
  if (!j.contains("n") || !j["n"].is_number_integer()) throw SchemaError("model spec needs integer n");
  s.n = j["n"];
  if (s.variant == ModelSpec::Variant::kNullRuled) {
    if (!j.contains("base") || !j["base"].is_object()) throw SchemaError("null-ruled spec needs base");
    const json& b = j["base"];
    if (b.contains("radius")) {
      s.axes = Vector::Constant(s.n - 1, num_of(b, "radius", 1.0));
    } else {
      if (!b.contains("axes")) throw SchemaError("base needs axes or radius");
      s.axes = vec_of(b["axes"], "axes");
    }
    s.base_time = num_of(b, "time", 0.0);
  } else {
    if (!j.contains("vertex")) throw SchemaError("null-cone spec needs vertex");
    s.vertex = vec_of(j["vertex"], "vertex");
  }
  s.h_fd = num_of(j, "h_fd", s.h_fd);
  s.h_outer = num_of(j, "h_outer", s.h_outer);
  if (!j.contains("generators") || !j["generators"].is_array() || j["generators"].empty())
    throw SchemaError("model spec needs a non-empty generators array");
  for (const auto& g : j["generators"]) {
    if (!g.is_object() || !g.contains("u")) throw SchemaError("generator needs u");
    ModelGenerator mg{vec_of(g["u"], "u"), num_of(g, "r", 1.0)};
    s.generators.push_back(mg);
    run.r_end.push_back(num_of(g, "r_end", mg.r + 1.0));
  }
  try {
    s.validate();
  } catch (const DimensionError& e) {
    throw SchemaError(e.what());
  }
  return run;
}

struct ModelItem {
  std::string jet_text, dev_csv;
  std::vector<double> foci;
  std::string error;
  bool degenerate = false;
};

int cmd_model(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.inputs.size() != 1) throw PreconditionError("model needs one --input spec");
  if (cfg.out.empty()) throw PreconditionError("model needs --out directory");
  const ModelRun run = model_from_json(read_json_file(cfg.inputs[0]));
  const ModelSpec& spec = run.spec;
  const int count = static_cast<int>(spec.generators.size());
  std::vector<ModelItem> items(count);
  parallel_for(count, cfg.jobs, [&](int i) {
    ModelItem& it = items[i];
    const ModelGenerator& g = spec.generators[i];
    try {
      const GeneratedJet gj = generate_jet_report(spec, g);
      it.jet_text = save_jet(gj.jet);
      for (const auto& ep : pencil_eigen(ScreenMetric(gj.jet.g, 1e-9), gj.raw_lambda_ab))
        it.foci.push_back(ep.value);
      const Development d = develop_along_generator(spec, g, run.r_end[i]);
      std::ostringstream csv;
      const int dim = spec.n + 2;
      csv << "t";
      for (int c = 0; c < dim; ++c)
        for (int k = 0; k < dim; ++k) csv << ",A" << c << "_" << k;
      csv << "\n";
      for (std::size_t s = 0; s < d.t.size(); ++s) {
        csv << num(d.t[s]);
        for (int c = 0; c < dim; ++c)
          for (int k = 0; k < dim; ++k) csv << "," << num(d.frames[s](k, c));
        csv << "\n";
      }
      it.dev_csv = csv.str();
    } catch (const DegenerateError& e) {
      it.degenerate = true;
      it.error = e.what();
    }
  });

  namespace fs = std::filesystem;
  fs::create_directories(cfg.out);
  int code = kOk;
  std::ostringstream foci;
  foci << "generator";
  for (int a = 0; a < spec.m(); ++a) foci << ",s" << a + 1;
  foci << "\n";
  for (int i = 0; i < count; ++i) {
    if (!items[i].error.empty()) {
      err << "generator " << i << ": " << items[i].error << "\n";
      code = kDegenerate;
      continue;
    }
    std::ofstream(fs::path(cfg.out) / ("jet_" + std::to_string(i) + ".json")) << items[i].jet_text;
    std::ofstream(fs::path(cfg.out) / ("development_" + std::to_string(i) + ".csv")) << items[i].dev_csv;
    foci << i;
    for (double s : items[i].foci) foci << "," << num(s);
    foci << "\n";
  }
  std::ofstream(fs::path(cfg.out) / "foci.csv") << foci.str();
  out << "wrote " << count - std::count_if(items.begin(), items.end(),
                                            [](const ModelItem& it) { return !it.error.empty(); })
      << " of " << count << " generators to " << cfg.out << "\n";
  return code;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"lightlike hypersurface jet invariants"};
  app.require_subcommand(1);

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out, "output file (directory for model)");
    sub->add_option("--format", cfg.format, "report format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--tol", cfg.tol_overrides, "tolerance override name=value");
    sub->add_option("--jobs", cfg.jobs, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.seed, "random seed");
  };
  CLI::App* analyze_cmd = app.add_subcommand("analyze", "invariants of jet files");
  analyze_cmd->add_option("--input,inputs", cfg.inputs, "jet files")->required();
  common(analyze_cmd);
  CLI::App* gauge_cmd = app.add_subcommand("gauge-check", "transformation-law residuals");
  gauge_cmd->add_option("--input", cfg.inputs, "jet file")->required();
  gauge_cmd->add_option("--params", cfg.params, "gauge params file")->required();
  common(gauge_cmd);
  CLI::App* cartan_cmd = app.add_subcommand("cartan", "Cartan characters");
  cartan_cmd->add_option("--n,n", cfg.n, "dimension")->required();
  common(cartan_cmd);
  CLI::App* model_cmd = app.add_subcommand("model", "flat-model fixtures");
  model_cmd->add_option("--input", cfg.inputs, "model spec")->required();
  common(model_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kInvalid;
  }

  try {
    cfg.tol = Tolerances::from_environment();
    for (const auto& kv : cfg.tol_overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw PreconditionError("--tol expects name=value, got '" + kv + "'");
      double v = 0.0;
      try {
        std::size_t used = 0;
        v = std::stod(kv.substr(eq + 1), &used);
        if (used != kv.size() - eq - 1) throw std::invalid_argument(kv);
      } catch (const std::logic_error&) {
        throw PreconditionError("bad tolerance value in '" + kv + "'");
      }
      cfg.tol.set(kv.substr(0, eq), v);
    }
    if (*analyze_cmd) return cmd_analyze(cfg, out, err);
    if (*gauge_cmd) return cmd_gauge_check(cfg, out, err);
    if (*cartan_cmd) return cmd_cartan(cfg, out);
    return cmd_model(cfg, out, err);
  } catch (const DegenerateError& e) {
    err << "degenerate: " << e.what() << "\n";
    return kDegenerate;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  }
}

}  // namespace ljet
