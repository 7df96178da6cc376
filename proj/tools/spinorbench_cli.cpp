// spinorbench command line: classify, verify-killing, lift-cone, catalog.
//
// Exit codes: 0 all checks pass, 2 a check failed, 3 input error, 4 numerical failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "spinorbench/errors.hpp"
#include "spinorbench/report.hpp"

using namespace spinorbench;

namespace {

enum Exit { kPass = 0, kFail = 2, kInput = 3, kNumerical = 4 };

cplx parse_lambda(const std::string& s) {
  const auto comma = s.find(',');
  try {
    size_t used = 0;
    if (comma == std::string::npos) {
      const double re = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return {re, 0.0};
    }
    const std::string a = s.substr(0, comma), b = s.substr(comma + 1);
    const double re = std::stod(a, &used);
    if (used != a.size()) throw std::invalid_argument(s);
    const double im = std::stod(b, &used);
    if (used != b.size()) throw std::invalid_argument(s);
    return {re, im};
  } catch (const std::logic_error&) {
    throw InputError("--lambda expects re,im (got '" + s + "')");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const Json& body, const std::string& out, bool json) {
  const std::string text = dump_json(body) + "\n";
  if (!out.empty()) {
    std::ofstream f(out);
    if (!f) throw InputError("cannot write " + out);
    f << text;
  }
  if (json || out.empty()) {
    std::cout << text;
    return;
  }
  // Human summary when the JSON went to a file.
  std::cout << body.value("command", "") << ": " << body.value("verdict", "") << "\n";
  if (body.contains("checks"))
    for (const auto& c : body["checks"]) {
      std::printf("  %-24s %-4s residual %.3e  tol %.1e\n", c["name"].get<std::string>().c_str(),
                  c["pass"].get<bool>() ? "ok" : "FAIL", c["residual"].get<double>(), c["tol"].get<double>());
    }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Killing spinor and cone verification"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string lambda, out, op_file;
  bool json = false;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "sample seed")->capture_default_str();
    sub->add_option("--tol", cfg.tol_overrides, "tolerance override key=val (repeatable)");
    sub->add_option("--out", out, "write the JSON report here");
    sub->add_flag("--json", json, "print JSON to stdout even with --out");
    sub->add_flag("--timing", cfg.timing, "include wall time (breaks byte determinism)");
  };
  auto chart_opts = [&](CLI::App* sub) {
    sub->add_option("--chart", cfg.chart, "catalog chart id")->required();
    sub->add_option("--spinor", cfg.spinor, "catalog spinor id")->required();
    sub->add_option("--lambda", lambda, "Killing number re,im");
    sub->add_option("--samples", cfg.samples, "sample points")->capture_default_str();
  };

  auto* classify_cmd = app.add_subcommand("classify", "normal form of a skew operator JSON file");
  classify_cmd->add_option("operator", op_file, "operator JSON {gram, b}")->required();
  common(classify_cmd);

  auto* verify_cmd = app.add_subcommand("verify-killing", "check a catalog Killing spinor");
  chart_opts(verify_cmd);
  common(verify_cmd);

  auto* lift_cmd = app.add_subcommand("lift-cone", "lift a catalog Killing spinor to the cone");
  chart_opts(lift_cmd);
  common(lift_cmd);

  auto* catalog_cmd = app.add_subcommand("catalog", "print the catalog manifest");
  catalog_cmd->add_option("--out", out, "write the manifest here");
  catalog_cmd->add_flag("--json", json, "print JSON to stdout even with --out");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kInput;
  }

  try {
    for (const auto& t : cfg.tol_overrides) cfg.tol.parse_override(t);
    if (!lambda.empty()) cfg.lambda = parse_lambda(lambda);

    if (catalog_cmd->parsed()) {
      emit(catalog_manifest(), out, json || out.empty());
      return kPass;
    }

    Report rep;
    if (classify_cmd->parsed()) {
      cfg.command = "classify";
      rep = classify_report(operator_from_text(read_file(op_file)), cfg);
    } else if (verify_cmd->parsed()) {
      cfg.command = "verify-killing";
      rep = verify_killing_report(cfg);
    } else {
      cfg.command = "lift-cone";
      rep = lift_cone_report(cfg);
    }
    emit(rep.body, out, json);
    return rep.pass ? kPass : kFail;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  }
}
