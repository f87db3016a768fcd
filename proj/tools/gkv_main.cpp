// gkv command line tool. Talks to the core exclusively through the C API.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gkv.h"

namespace {

// exit codes: 0 pass, 1 residual failure, 2 spec/usage error, 3 ambiguous clustering
int exit_code_of(gkv_status st) {
  switch (st) {
    case GKV_OK: return 0;
    case GKV_E_AMBIGUOUS: return 3;
    case GKV_E_SPEC: return 2;
    default: return 2;
  }
}

struct OwnedString {
  char* s = nullptr;
  ~OwnedString() { gkv_string_free(s); }
};

bool write_file(const std::string& path, const char* text) {
  std::ofstream out(path);
  if (!out) {
    std::cerr << "gkv: cannot write '" << path << "'\n";
    return false;
  }
  out << text;
  return true;
}

int emit_report(gkv_report* report, const std::string& report_path, bool quiet) {
  OwnedString summary;
  if (gkv_report_summary(report, &summary.s) == GKV_OK && !quiet) std::cout << summary.s;
  if (!report_path.empty()) {
    OwnedString json;
    if (gkv_report_to_json(report, &json.s) != GKV_OK || !write_file(report_path, json.s)) {
      gkv_report_free(report);
      return 2;
    }
  }
  const int rc = gkv_report_passed(report) ? 0 : 1;
  gkv_report_free(report);
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical verification toolkit for generalized Kahler structures"};
  app.require_subcommand(1);

  // ---- check ---------------------------------------------------------------
  std::string check_spec, check_suite = "all", check_report;
  double check_tol = 0;
  int check_grid = 0;
  long long check_seed = -1;
  bool quiet = false;
  auto* check = app.add_subcommand("check", "run a verification suite on a spec file");
  check->add_option("spec", check_spec, "spec JSON file")->required();
  check->add_option("--suite", check_suite,
                    "validate|gk|identities|gauge|courant|eigendist|theorem|fourdim|all");
  check->add_option("--tol", check_tol, "override both residual tolerances");
  check->add_option("--grid", check_grid, "grid resolution per axis");
  check->add_option("--seed", check_seed, "sampling seed");
  check->add_option("--report", check_report, "write the JSON report here");
  check->add_flag("--quiet", quiet, "suppress the per-check summary");

  // ---- zoo -----------------------------------------------------------------
  std::string zoo_name, zoo_emit;
  std::vector<std::string> zoo_params;
  auto* zoo = app.add_subcommand("zoo", "generate a built-in example spec (Z1..Z5)");
  zoo->add_option("name", zoo_name, "zoo example name")->required();
  zoo->add_option("--param", zoo_params, "parameter overrides, key=value");
  zoo->add_option("--emit", zoo_emit, "write the spec JSON here (default: stdout)");

  // ---- courant -------------------------------------------------------------
  std::string cour_spec, cour_sections, cour_report;
  auto* cour = app.add_subcommand("courant", "Courant brackets of user-supplied section pairs");
  cour->add_option("spec", cour_spec, "spec JSON file")->required();
  cour->add_option("--sections", cour_sections, "sections JSON file")->required();
  cour->add_option("--report", cour_report, "write the JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (check->parsed()) {
    gkv_spec* spec = nullptr;
    gkv_status st = gkv_spec_load_file(check_spec.c_str(), &spec);
    if (st != GKV_OK) {
      std::cerr << "gkv: " << gkv_last_error() << "\n";
      return exit_code_of(st);
    }
    gkv_options opt;
    gkv_options_init(&opt);
    if (check_tol > 0) {
      opt.tol_algebraic = check_tol;
      opt.tol_derivative = check_tol;
    }
    if (check_grid > 0) opt.grid_per_axis = check_grid;
    if (check_seed >= 0) opt.seed = check_seed;
    gkv_report* report = nullptr;
    st = gkv_run_suite(spec, check_suite.c_str(), &opt, &report);
    gkv_spec_free(spec);
    if (st != GKV_OK) {
      std::cerr << "gkv: " << gkv_last_error() << "\n";
      return exit_code_of(st);
    }
    return emit_report(report, check_report, quiet);
  }

  if (zoo->parsed()) {
    std::vector<const char*> params;
    params.reserve(zoo_params.size());
    for (const auto& p : zoo_params) params.push_back(p.c_str());
    gkv_spec* spec = nullptr;
    gkv_status st =
        gkv_zoo_generate(zoo_name.c_str(), params.empty() ? nullptr : params.data(),
                         params.size(), &spec);
    if (st != GKV_OK) {
      std::cerr << "gkv: " << gkv_last_error() << "\n";
      return exit_code_of(st);
    }
    OwnedString json;
    st = gkv_spec_to_json(spec, &json.s);
    gkv_spec_free(spec);
    if (st != GKV_OK) {
      std::cerr << "gkv: " << gkv_last_error() << "\n";
      return exit_code_of(st);
    }
    if (zoo_emit.empty())
      std::cout << json.s;
    else if (!write_file(zoo_emit, json.s))
      return 2;
    return 0;
  }

  if (cour->parsed()) {
    std::ifstream in(cour_sections);
    if (!in) {
      std::cerr << "gkv: cannot open sections file '" << cour_sections << "'\n";
      return 2;
    }
    std::ostringstream buf;
    buf << in.rdbuf();

    gkv_spec* spec = nullptr;
    gkv_status st = gkv_spec_load_file(cour_spec.c_str(), &spec);
    if (st != GKV_OK) {
      std::cerr << "gkv: " << gkv_last_error() << "\n";
      return exit_code_of(st);
    }
    gkv_report* report = nullptr;
    st = gkv_run_courant_sections(spec, buf.str().c_str(), nullptr, &report);
    gkv_spec_free(spec);
    if (st != GKV_OK) {
      std::cerr << "gkv: " << gkv_last_error() << "\n";
      return exit_code_of(st);
    }
    return emit_report(report, cour_report, false);
  }

  return 2;
}
