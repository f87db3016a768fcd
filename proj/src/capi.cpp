#include "gkv.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "gkv/suites.hpp"
#include "gkv/zoo.hpp"

struct gkv_spec {
  gkv::ManifoldSpec spec;
};

struct gkv_report {
  gkv::Report report;
};

namespace {

thread_local std::string g_last_error;

gkv_status status_of(const gkv::Error& e) {
  g_last_error = e.what();
  switch (e.code()) {
    case gkv::errc::ambiguous_clustering:
      return GKV_E_AMBIGUOUS;
    case gkv::errc::spec_error:
    case gkv::errc::parse_error:
    case gkv::errc::dimension_limit:
      return GKV_E_SPEC;
    default:
      return GKV_E_RUNTIME;
  }
}

template <class F>
gkv_status guarded(F&& f) {
  try {
    f();
    return GKV_OK;
  } catch (const gkv::Error& e) {
    return status_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return GKV_E_RUNTIME;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

gkv::RunOptions to_run_options(const gkv_options* opt) {
  gkv::RunOptions r;
  if (!opt) return r;
  if (opt->tol_algebraic > 0) r.tol.algebraic = opt->tol_algebraic;
  if (opt->tol_derivative > 0) r.tol.derivative = opt->tol_derivative;
  if (opt->cluster_tol > 0) r.tol.cluster = opt->cluster_tol;
  if (opt->grid_per_axis > 0) r.grid_per_axis = opt->grid_per_axis;
  if (opt->random_count >= 0) r.random_count = opt->random_count;
  if (opt->seed >= 0) r.seed = opt->seed;
  if (opt->workers > 0) r.workers = opt->workers;
  return r;
}

}  // namespace

extern "C" {

void gkv_options_init(gkv_options* opt) {
  if (!opt) return;
  opt->tol_algebraic = 0;
  opt->tol_derivative = 0;
  opt->cluster_tol = 0;
  opt->grid_per_axis = 0;
  opt->random_count = -1;
  opt->seed = -1;
  opt->workers = 0;
}

const char* gkv_version(void) { return "0.1.0"; }

const char* gkv_last_error(void) { return g_last_error.c_str(); }

gkv_status gkv_spec_load_file(const char* path, gkv_spec** out) {
  if (!path || !out) {
    g_last_error = "null argument";
    return GKV_E_SPEC;
  }
  return guarded([&] { *out = new gkv_spec{gkv::load_spec_file(path)}; });
}

gkv_status gkv_spec_parse(const char* json_text, gkv_spec** out) {
  if (!json_text || !out) {
    g_last_error = "null argument";
    return GKV_E_SPEC;
  }
  return guarded([&] { *out = new gkv_spec{gkv::load_spec_json(json_text)}; });
}

gkv_status gkv_zoo_generate(const char* name, const char* const* params, size_t nparams,
                            gkv_spec** out) {
  if (!name || !out) {
    g_last_error = "null argument";
    return GKV_E_SPEC;
  }
  return guarded([&] {
    std::map<std::string, double> p;
    for (size_t i = 0; i < nparams; ++i) {
      const std::string kv = params[i];
      const size_t eq = kv.find('=');
      if (eq == std::string::npos)
        gkv::fail(gkv::errc::spec_error, "parameter '" + kv + "' is not of the form key=value");
      char* end = nullptr;
      const std::string vtext = kv.substr(eq + 1);
      const double v = std::strtod(vtext.c_str(), &end);
      if (!end || *end != '\0')
        gkv::fail(gkv::errc::spec_error, "parameter value '" + vtext + "' is not a number");
      p[kv.substr(0, eq)] = v;
    }
    *out = new gkv_spec{gkv::zoo_generate(name, p)};
  });
}

gkv_status gkv_spec_to_json(const gkv_spec* spec, char** out) {
  if (!spec || !out) {
    g_last_error = "null argument";
    return GKV_E_SPEC;
  }
  return guarded([&] { *out = dup_string(spec->spec.to_json()); });
}

void gkv_spec_free(gkv_spec* spec) { delete spec; }

gkv_status gkv_run_suite(const gkv_spec* spec, const char* suite, const gkv_options* opt,
                         gkv_report** out) {
  if (!spec || !suite || !out) {
    g_last_error = "null argument";
    return GKV_E_SPEC;
  }
  return guarded([&] {
    *out = new gkv_report{gkv::run_suite(spec->spec, suite, to_run_options(opt))};
  });
}

gkv_status gkv_run_courant_sections(const gkv_spec* spec, const char* sections_json,
                                    const gkv_options* opt, gkv_report** out) {
  if (!spec || !sections_json || !out) {
    g_last_error = "null argument";
    return GKV_E_SPEC;
  }
  return guarded([&] {
    *out = new gkv_report{
        gkv::run_courant_sections(spec->spec, sections_json, to_run_options(opt))};
  });
}

int gkv_report_passed(const gkv_report* report) {
  return report && report->report.passed() ? 1 : 0;
}

gkv_status gkv_report_to_json(const gkv_report* report, char** out) {
  if (!report || !out) {
    g_last_error = "null argument";
    return GKV_E_SPEC;
  }
  return guarded([&] { *out = dup_string(report->report.to_json()); });
}

gkv_status gkv_report_summary(const gkv_report* report, char** out) {
  if (!report || !out) {
    g_last_error = "null argument";
    return GKV_E_SPEC;
  }
  return guarded([&] { *out = dup_string(report->report.summary()); });
}

void gkv_report_free(gkv_report* report) { delete report; }

void gkv_string_free(char* s) { std::free(s); }

}  // extern "C"
