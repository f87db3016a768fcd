// exercises the shared-library surface the way an external client would
#include <cstdio>
#include <cstring>
#include <string>

#include "gkv.h"

static int failures = 0;

#define EXPECT(cond)                                                   \
  do {                                                                 \
    if (!(cond)) {                                                     \
      std::fprintf(stderr, "FAILED %s:%d: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                      \
    }                                                                  \
  } while (0)

int main() {
  EXPECT(std::strcmp(gkv_version(), "0.1.0") == 0);

  gkv_options opt;
  gkv_options_init(&opt);
  EXPECT(opt.seed == -1);

  // zoo -> json -> parse round trip
  const char* params[] = {"alpha=0.6", "beta=0.8", "gamma=0"};
  gkv_spec* z1 = nullptr;
  EXPECT(gkv_zoo_generate("Z1", params, 3, &z1) == GKV_OK);
  char* json = nullptr;
  EXPECT(gkv_spec_to_json(z1, &json) == GKV_OK);
  EXPECT(json && std::strstr(json, "\"dim\": 4"));
  gkv_spec* reparsed = nullptr;
  EXPECT(gkv_spec_parse(json, &reparsed) == GKV_OK);
  gkv_string_free(json);

  // run a fast suite
  opt.grid_per_axis = 2;
  opt.random_count = 4;
  gkv_report* report = nullptr;
  EXPECT(gkv_run_suite(reparsed, "validate", &opt, &report) == GKV_OK);
  EXPECT(gkv_report_passed(report) == 1);
  char* rj = nullptr;
  EXPECT(gkv_report_to_json(report, &rj) == GKV_OK);
  EXPECT(rj && std::strstr(rj, "\"passed\": true"));
  gkv_string_free(rj);
  char* summary = nullptr;
  EXPECT(gkv_report_summary(report, &summary) == GKV_OK);
  EXPECT(summary && std::strstr(summary, "validate.jplus_square"));
  gkv_string_free(summary);
  gkv_report_free(report);

  // courant sections endpoint
  const char* sections =
      "{\"pairs\": [[{\"vector\": [\"1\",\"0\",\"0\",\"0\"], \"form\": "
      "[\"0\",\"x1\",\"0\",\"0\"]}, {\"vector\": [\"0\",\"1\",\"0\",\"0\"], \"form\": "
      "[\"x2\",\"0\",\"0\",\"0\"]}]]}";
  gkv_report* cr = nullptr;
  EXPECT(gkv_run_courant_sections(reparsed, sections, &opt, &cr) == GKV_OK);
  EXPECT(gkv_report_passed(cr) == 1);
  gkv_report_free(cr);

  gkv_spec_free(reparsed);
  gkv_spec_free(z1);

  // error paths produce codes and messages
  gkv_spec* bad = nullptr;
  EXPECT(gkv_zoo_generate("Z99", nullptr, 0, &bad) == GKV_E_SPEC);
  EXPECT(std::strlen(gkv_last_error()) > 0);
  EXPECT(gkv_spec_parse("{\"dim\": 99}", &bad) == GKV_E_SPEC);
  const char* malformed[] = {"alpha"};
  EXPECT(gkv_zoo_generate("Z1", malformed, 1, &bad) == GKV_E_SPEC);
  gkv_spec* z1b = nullptr;
  EXPECT(gkv_zoo_generate("Z1", nullptr, 0, &z1b) == GKV_OK);
  gkv_report* r2 = nullptr;
  EXPECT(gkv_run_suite(z1b, "bogus", &opt, &r2) == GKV_E_SPEC);
  gkv_spec_free(z1b);

  if (failures == 0) std::printf("c api: all checks passed\n");
  return failures == 0 ? 0 : 1;
}
