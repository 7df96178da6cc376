#include "spinorbench/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#include "spinorbench/errors.hpp"

namespace spinorbench {

// ---- serializer ---------------------------------------------------------------------------

namespace {

bool is_scalar(const Json& j) { return !j.is_array() && !j.is_object(); }

void write_json(const Json& j, int indent, int depth, std::string& out) {
  const std::string pad = indent > 0 ? std::string(static_cast<size_t>(indent) * (depth + 1), ' ') : "";
  const std::string close = indent > 0 ? std::string(static_cast<size_t>(indent) * depth, ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        return;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += buf;
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // short rows of numbers stay on one line
      const bool flat = std::all_of(j.begin(), j.end(), is_scalar);
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat ? ", " : ",";
        if (!flat) out += std::string(nl) + pad;
        write_json(e, indent, depth + 1, out);
        first = false;
      }
      if (!flat) out += std::string(nl) + close;
      out += ']';
      return;
    }
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        out += std::string(nl) + pad + Json(it.key()).dump() + (indent > 0 ? ": " : ":");
        write_json(it.value(), indent, depth + 1, out);
        first = false;
      }
      out += std::string(nl) + close + '}';
      return;
    }
    default:
      out += j.dump();
  }
}

RMat matrix_from_json(const Json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw InputError(std::string(what) + " must be a non-empty array of rows");
  const int n = static_cast<int>(j.size());
  RMat m(n, n);
  for (int i = 0; i < n; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != n) throw InputError(std::string(what) + " must be square");
    for (int k = 0; k < n; ++k) {
      if (!j[i][k].is_number()) throw InputError(std::string(what) + " entries must be numbers");
      m(i, k) = j[i][k].get<double>();
    }
  }
  return m;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::vector<RVec> head(const std::vector<RVec>& v, size_t k) {
  return {v.begin(), v.begin() + static_cast<std::ptrdiff_t>(std::min(k, v.size()))};
}

constexpr size_t kFitPoints = 10;

Json header(const RunConfig& cfg, Json inputs) {
  Json tol = Json::object();
  for (const auto& [k, v] : cfg.tol.values()) tol[k] = v;
  inputs["tolerances"] = tol;
  Json j;
  j["schema"] = kSchema;
  j["command"] = cfg.command;
  j["inputs_digest"] = inputs_digest(inputs);
  j["inputs"] = inputs;
  return j;
}

Json run_inputs(const RunConfig& cfg) {
  Json in;
  in["chart"] = cfg.chart;
  in["spinor"] = cfg.spinor;
  in["lambda"] = cfg.lambda ? to_json(*cfg.lambda) : Json(nullptr);
  in["seed"] = cfg.seed;
  in["samples"] = cfg.samples;
  in["tol_overrides"] = cfg.tol_overrides;
  return in;
}

void finish(Report& r, const std::vector<Check>& checks, const RunConfig& cfg,
            std::chrono::steady_clock::time_point t0) {
  r.pass = all_pass(checks);
  r.body["checks"] = to_json(checks);
  r.body["verdict"] = r.pass ? "pass" : "fail";
  if (cfg.timing)
    r.body["timing_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::string dump_json(const Json& j, int indent) {
  std::string out;
  write_json(j, indent, 0, out);
  return out;
}

// ---- value I/O --------------------------------------------------------------------------

Json to_json(const PForm& w) {
  Json terms = Json::array();
  for (const auto& [idx, c] : w.terms) terms.push_back({{"idx", idx}, {"c", c}});
  return {{"degree", w.degree}, {"terms", terms}};
}

PForm pform_from_json(const Json& j, const Signature& sig) {
  if (!j.is_object() || !j.contains("degree") || !j.contains("terms")) throw InputError("p-form needs degree and terms");
  PForm w(sig, j["degree"].get<int>());
  for (const auto& t : j["terms"]) {
    MultiIndex idx = t.at("idx").get<MultiIndex>();
    if (static_cast<int>(idx.size()) != w.degree) throw InputError("p-form index length differs from degree");
    for (size_t i = 0; i < idx.size(); ++i)
      if (idx[i] < 0 || idx[i] >= sig.dim() || (i > 0 && idx[i] <= idx[i - 1]))
        throw InputError("p-form indices must be strictly increasing and in range");
    w.set(idx, w.get(idx) + t.at("c").get<double>());
  }
  return w;
}

Json to_json(const RMat& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json r = Json::array();
    for (int k = 0; k < m.cols(); ++k) r.push_back(m(i, k));
    rows.push_back(r);
  }
  return rows;
}

Json to_json(const RVec& v) {
  Json r = Json::array();
  for (int i = 0; i < v.size(); ++i) r.push_back(v(i));
  return r;
}

Json to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const SkewOperator& op) { return {{"gram", to_json(op.gram)}, {"b", to_json(op.b)}}; }

SkewOperator operator_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("gram") || !j.contains("b")) throw InputError("operator needs gram and b");
  SkewOperator op{matrix_from_json(j["gram"], "gram"), matrix_from_json(j["b"], "b")};
  if (op.gram.rows() != op.b.rows()) throw InputError("gram and b sizes differ");
  return op;
}

SkewOperator operator_from_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("operator JSON parse error: ") + e.what());
  }
  try {
    return operator_from_json(j);
  } catch (const Json::exception& e) {
    throw InputError(std::string("operator JSON has wrong shape: ") + e.what());
  }
}

Json to_json(const Check& c) {
  Json j{{"name", c.name}, {"residual", c.residual}, {"tol", c.tol}, {"pass", c.pass}};
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

Json to_json(const std::vector<Check>& cs) {
  Json a = Json::array();
  for (const auto& c : cs) a.push_back(to_json(c));
  return a;
}

Json to_json(const Block& b) {
  return {{"kind", to_string(b.kind)}, {"name", b.name()}, {"params", b.params}, {"size", b.size()}, {"index", b.index()}};
}

Json to_json(const BlockDecomposition& d) {
  Json blocks = Json::array();
  for (const auto& b : d.blocks) blocks.push_back(to_json(b));
  return {{"blocks", blocks},
          {"type", to_string(d.type)},
          {"basis", to_json(d.basis)},
          {"residual_b", d.residual_b},
          {"residual_gram", d.residual_gram}};
}

Json catalog_manifest() {
  Json charts = Json::array();
  for (const auto& e : catalog_entries()) {
    const ChartPtr c = catalog_chart(e.id);
    charts.push_back({{"id", e.id},
                      {"family", e.family},
                      {"n", e.n},
                      {"signature", {c->signature().p, c->signature().q}},
                      {"box", {{"lo", to_json(c->box().lo)}, {"hi", to_json(c->box().hi)}}},
                      {"spinors", e.spinors},
                      {"lambda", to_json(e.lambda)},
                      {"cone", "cone:" + e.id},
                      {"description", e.description}});
  }
  return {{"schema", kSchema}, {"charts", charts}};
}

std::string inputs_digest(const Json& inputs) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : dump_json(inputs, 0)) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return hex64(h);
}

// ---- classify ----------------------------------------------------------------------------

Report classify_report(const SkewOperator& op, const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  Report r;
  Json in{{"operator", to_json(op)}};
  r.body = header(cfg, in);
  const ValidationReport v = validate(op, cfg.tol["validation"]);
  if (!v.ok) {
    std::string msg = "operator fails validation:";
    for (const auto& m : v.messages) msg += " " + m + ";";
    throw InputError(msg);
  }
  const BlockDecomposition d = classify(op);
  r.body["decomposition"] = to_json(d);
  r.body["type"] = to_string(d.type);
  r.body["refused"] = d.type == GenericType::zero_form;
  r.body["stabilizer_dim"] = stabilizer_dimension(d);
  const auto cc = causal_contraction_test(op, cfg.seed);
  r.body["causal_contraction"] = {{"verdict", to_string(cc.verdict)},
                                  {"table_rule", cc.table_rule},
                                  {"lightlike_possible", cc.lightlike_possible},
                                  {"sampled_max_ratio", cc.sampled_max_ratio},
                                  {"samples", cc.samples},
                                  {"witness", cc.witness ? to_json(*cc.witness) : Json(nullptr)}};
  const double scale = std::max(1.0, op.b.cwiseAbs().maxCoeff());
  finish(r,
         {make_check("reconstruction_b", d.residual_b / scale, cfg.tol["reconstruction"]),
          make_check("reconstruction_gram", d.residual_gram, cfg.tol["reconstruction"])},
         cfg, t0);
  return r;
}

// ---- verify-killing --------------------------------------------------------------------

Report verify_killing_report(const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  if (cfg.samples < 1) throw InputError("--samples must be positive");
  Report r;
  r.body = header(cfg, run_inputs(cfg));
  const KillingSpinor ks = catalog_spinor(cfg.chart, cfg.spinor, cfg.lambda);
  const cplx lambda = cfg.lambda.value_or(ks.lambda);
  const Chart& chart = *ks.chart;
  const SpinorSpace& S = *ks.space;
  const int n = chart.dim();
  const Tolerances& tol = cfg.tol;
  const auto pts = sample_points(chart, cfg.samples, cfg.seed);
  const auto fit = head(pts, kFitPoints);

  r.body["chart"] = {{"id", chart.id()}, {"n", n}, {"signature", {chart.signature().p, chart.signature().q}}};
  r.body["spinor"] = {{"id", ks.spinor_id}, {"catalog_lambda", to_json(ks.lambda)}};
  if (ks.ancestor_type) r.body["spinor"]["ancestor_type"] = to_string(*ks.ancestor_type);
  r.body["lambda"] = to_json(lambda);

  std::vector<Check> checks;
  const SampledResidual kr = killing_residual(chart, S, ks.field, lambda, pts);
  checks.push_back(make_check("killing", kr.max, tol["killing"], "nabla_X phi = lambda X.phi"));
  r.body["killing_residual"] = kr.max;
  if (!checks.back().pass) {
    r.body["skipped"] = "structural checks need a verified Killing spinor";
    finish(r, checks, cfg, t0);
    return r;
  }

  const auto ir = integrability_checks(chart, S, ks.field, lambda, pts, tol);
  r.body["integrability"] = {{"scal_expected", ir.scal_expected}, {"ricci_image_type", to_string(ir.ricci_image_type)}};
  checks.insert(checks.end(), {ir.scal, ir.weyl_action, ir.ricci_image});
  checks.push_back(dirac_eigen_check(chart, S, ks.field, lambda, pts, tol["dirac_eigen"]));

  const bool imaginary = lambda.real() == 0.0 && lambda.imag() != 0.0;
  if (imaginary) checks.push_back(length_constancy_check(S, ks.field, pts, tol["length"]));

  const CurrentReport cr = dirac_current_report(chart, S, ks.field, pts, fit, tol);
  checks.push_back(cr.killing);
  Json cur{{"behaviour", to_string(cr.behaviour)},
           {"g_VV_min", cr.min_norm},
           {"g_VV_max", cr.max_norm},
           {"special_killing_c", cr.special_killing_c},
           {"special_killing_fit", to_json(cr.special_killing_fit)},
           {"candidate_constants", {1.0, 2.0}}};
  // The fitted constant is informational; its fit residual is judged.
  if (imaginary) checks.push_back(cr.special_killing_fit);

  const bool timelike = cr.behaviour == CurrentBehaviour::timelike_constant ||
                        cr.behaviour == CurrentBehaviour::timelike_nonconstant;
  if (timelike) checks.push_back(einstein_check(chart, pts, tol["einstein"]));

  bool sasaki = false;
  const VectorFieldFn V = dirac_current_field(S, ks.field);
  if (imaginary && cr.behaviour == CurrentBehaviour::timelike_constant) {
    const double s = std::sqrt(-cr.min_norm);
    const VectorFieldFn U = [V, s](const RVec& x) -> RVec { return V(x) / s; };
    const SasakiReport sr = sasaki_check(chart, U, fit, tol);
    sasaki = sr.sasaki;
    r.body["sasaki"] = {{"preconditions", to_json(sr.preconditions)},
                        {"identities", to_json(sr.identities)},
                        {"lorentzian_sasaki", sr.sasaki}};
    checks.insert(checks.end(), sr.preconditions.begin(), sr.preconditions.end());
    checks.insert(checks.end(), sr.identities.begin(), sr.identities.end());
  }
  if (cr.behaviour == CurrentBehaviour::changes_type) {
    const HessianReport hr = conformal_factor_checks(chart, V, fit, tol);
    cur["conformal_factor_points"] = hr.used_points;
    checks.insert(checks.end(), {hr.hessian, hr.length_pair, hr.gradient_pair});
  }
  if (cr.behaviour == CurrentBehaviour::lightlike) {
    const BrinkmannReport br = brinkmann_check(chart, fit, tol["brinkmann"]);
    r.body["brinkmann"] = {{"parallel_null_found", br.found},
                           {"parallel_dim", br.parallel_dim},
                           {"residual", br.residual},
                           {"vector", br.found ? to_json(br.vector) : Json(nullptr)}};
  }
  r.body["dirac_current"] = cur;

  if (auto w = warped_data(chart.id())) {
    const int m = w->fibre->dim();
    const double scal_k = curvature(*w->fibre, 0.5 * (w->fibre->box().lo + w->fibre->box().hi)).scal;
    std::vector<double> ts;
    for (const auto& x : pts) ts.push_back(x(0));
    const auto fs = build_spinor_space(w->fibre->signature());
    const RVec c0 = 0.5 * (w->fibre->box().lo + w->fibre->box().hi);
    const auto fibre_phi = killing_transport(w->fibre, fs, w->fibre_lambda, c0, CVec::Unit(fs->dim_spinor, 0));
    const auto fpts = sample_points(*w->fibre, std::min<int>(cfg.samples, 10), cfg.seed);
    r.body["warped"] = {{"kind", to_string(w->kind)},
                        {"fibre", w->fibre->id()},
                        {"fibre_scal", scal_k},
                        {"fibre_lambda", to_json(w->fibre_lambda)}};
    checks.push_back(make_check("fibre_scal", std::abs(scal_k - expected_fibre_scal(w->kind, m)), tol["scal"]));
    checks.push_back(make_check("warp_ode", warped_ode_residual(w->kind, scal_k, m, ts), tol["ode"] * std::max(1.0, std::abs(scal_k)),
                                "f'^2 - f^2 = scal_k / ((n-1)(n-2))"));
    checks.push_back(make_check("fibre_killing", killing_residual(*w->fibre, *fs, fibre_phi, w->fibre_lambda, fpts).max,
                                tol["killing"]));
    if (!timelike) checks.push_back(einstein_check(chart, pts, tol["einstein"]));
  }

  r.body["case"] = case_tag(lambda, cr.behaviour, sasaki);
  finish(r, checks, cfg, t0);
  return r;
}

// ---- lift-cone ---------------------------------------------------------------------------

Report lift_cone_report(const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  if (cfg.samples < 1) throw InputError("--samples must be positive");
  Report r;
  r.body = header(cfg, run_inputs(cfg));
  const KillingSpinor ks = catalog_spinor(cfg.chart, cfg.spinor, cfg.lambda);
  const cplx lambda = cfg.lambda.value_or(ks.lambda);
  if (std::abs(lambda * lambda + 0.25) > 1e-12)
    throw InputError("cone lift needs lambda = +-i/2 (scal = -n(n-1) normalization)");
  const Chart& chart = *ks.chart;
  const int n = chart.dim();
  const Tolerances& tol = cfg.tol;
  const auto pts = sample_points(chart, cfg.samples, cfg.seed);

  std::vector<Check> checks;
  const double kres = killing_residual(chart, *ks.space, ks.field, lambda, pts).max;
  checks.push_back(make_check("killing", kres, tol["killing"]));
  r.body["killing_residual"] = kres;
  if (!checks.back().pass) {
    r.body["parallel_residual"] = nullptr;
    r.body["lemma32_residual"] = nullptr;
    r.body["type"] = nullptr;
    r.body["skipped"] = "base spinor is not a Killing spinor for this lambda";
    finish(r, checks, cfg, t0);
    return r;
  }

  const Intertwiner I = ks.cone_map ? *ks.cone_map : build_intertwiner(n, lambda);
  const ChartPtr cone = cone_chart(ks.chart);
  const auto cpts = cone_points(pts, {0.75, 1.0, 1.5});
  const SpinorFieldFn lifted = lift_spinor(I, ks.field);
  const double pres = parallel_residual(*cone, *I.cone, lifted, cpts);
  checks.push_back(make_check("parallel_spinor", pres, tol["parallel"]));

  double l32 = 0.0, nat = 0.0;
  std::optional<GenericType> type;
  bool consistent = true;
  CausalVerdict verdict = CausalVerdict::all_timelike;
  for (const auto& x : pts) {
    const CVec phi = ks.field(x);
    l32 = std::max(l32, dirac_current_contraction_check(I, phi, 1.0) / std::max(1.0, phi.squaredNorm()));
    nat = std::max(nat, naturality_residual(I, phi, phi));
    const PForm w = associated_p_form(Spinor(I.cone, I.plus * phi), 2);
    const GenericType t = classify(operator_from_form(w)).type;
    if (!type) {
      type = t;
      verdict = causal_contraction_test(operator_from_form(w), cfg.seed).verdict;
    }
    consistent = consistent && t == *type;
  }
  checks.push_back(make_check("lemma32", l32, tol["lemma32"], "d_r -| alpha^2 = V^flat at r = 1"));
  checks.push_back(make_check("naturality", nat, tol["naturality"], "<phi,phi> = <d_r . minus phi, plus phi>"));
  checks.push_back(make_check("type_constant", consistent ? 0.0 : 1.0, 0.5, "2-form type equal at all samples"));
  checks.push_back(make_check("contraction_causal", verdict == CausalVerdict::fails ? 1.0 : 0.0, 0.5,
                              "timelike contractions of the lifted 2-form are causal"));
  if (ks.ancestor_type)
    checks.push_back(make_check("type_matches_ancestor", *type == *ks.ancestor_type ? 0.0 : 1.0, 0.5));

  // Dirac current 1-form lifted with the fitted constant.
  const auto fit = head(pts, kFitPoints);
  const CurrentReport cr = dirac_current_report(chart, *ks.space, ks.field, fit, fit, tol);
  const FormFieldFn Vf = flat_field(chart.signature(), dirac_current_field(*ks.space, ks.field));
  const double fres = parallel_residual(*cone, lift_form(ks.chart, Vf, cr.special_killing_c), cone_points(fit, {0.75, 1.0, 1.5}));
  checks.push_back(make_check("parallel_current_form", fres, tol["parallel"], "r dr ^ V + (r^2/c) dV, c fitted"));

  r.body["parallel_residual"] = pres;
  r.body["lemma32_residual"] = l32;
  r.body["type"] = to_string(*type);
  r.body["cone"] = {{"id", cone->id()}, {"signature", {cone->signature().p, cone->signature().q}},
                    {"image_chirality", I.image == Chirality::none ? "none" : I.image == Chirality::plus ? "plus" : "minus"}};
  if (ks.ancestor_type) r.body["ancestor_type"] = to_string(*ks.ancestor_type);
  r.body["special_killing_c"] = cr.special_killing_c;
  r.body["current_form_parallel_residual"] = fres;
  r.body["causal_contraction"] = to_string(verdict);
  finish(r, checks, cfg, t0);
  return r;
}

}  // namespace spinorbench
