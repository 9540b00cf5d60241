#include "run_config.hpp"

#include <doctest.h>

#include <cstdlib>
#include <string>

using namespace barrier;
using namespace barrier::cli;

namespace {
std::string failing_field(const RunConfig& c) {
  try {
    validate(c);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

RunConfig trace_config() {
  RunConfig c;
  c.command = "trace";
  c.geometry = Geometry::from_split(1.0, 1.0, 0.3);
  c.pairs = {{2, 1}, {3, 2}};
  c.h_ratios = {0.25, 0.5};
  return c;
}
}  // namespace

TEST_CASE("alpha sweep parsing") {
  const auto s = parse_alpha_sweep("0:1:0.25");
  CHECK(s.values().size() == 5);
  CHECK(s.values().back() == doctest::Approx(1.0));
  CHECK(parse_alpha_sweep("2:2:1").values().size() == 1);
  CHECK_THROWS_AS(parse_alpha_sweep("3:1:0.5"), ConfigError);
  CHECK_THROWS_AS(parse_alpha_sweep("0:1:0"), ConfigError);
  CHECK_THROWS_AS(parse_alpha_sweep("0:1"), ConfigError);
}

TEST_CASE("pair parsing") {
  const auto p = parse_pairs("2/1, 3/2");
  REQUIRE(p.size() == 2);
  CHECK(p[1] == std::pair{3, 2});
  CHECK(parse_pairs("").empty());
  CHECK_THROWS_AS(parse_pairs("2-1"), ConfigError);
}

TEST_CASE("json round trip") {
  RunConfig c = trace_config();
  c.seed = 77;
  c.numerics.l_max = 6.5;
  c.ensemble.kind = "xi";
  const auto j = config_to_json(c);
  const RunConfig back = config_from_json(j);
  CHECK(config_to_json(back) == j);
  CHECK(back.seed == 77);
  REQUIRE(back.geometry.has_value());
  CHECK(back.geometry->h2 == doctest::Approx(0.7));
  CHECK(back.pairs == c.pairs);
}

TEST_CASE("validation names the offending field") {
  RunConfig k;
  k.command = "kplus";
  k.k = 10.0;
  k.alpha_sweep = "0:1:0.1";
  CHECK(failing_field(k).empty());
  k.numerics.n_terms = 2;
  CHECK(failing_field(k) == "numerics.n_terms");
  k.numerics.n_terms = 0;
  k.alpha_sweep = "1:0:0.1";
  CHECK(failing_field(k) == "alpha_sweep");

  RunConfig e;
  e.command = "ensemble";
  e.ensemble.dim = 300;
  CHECK(failing_field(e) == "ensemble.dim");
  e.ensemble.kind = "lax";
  e.ensemble.dim = 11;
  e.ensemble.alpha = 0.3;
  CHECK(failing_field(e) == "ensemble.alpha");
  e.ensemble.kind = "Q";
  CHECK(failing_field(e) == "ensemble.kind");

  RunConfig t = trace_config();
  CHECK(failing_field(t).empty());
  t.pairs = {{2, 2}};
  CHECK(failing_field(t) == "pairs");
  t = trace_config();
  t.numerics.l_max = 1.5;
  CHECK(failing_field(t) == "numerics.l_max");
  t = trace_config();
  t.r_dims = {5};
  CHECK(failing_field(t) == "r_dims");

  RunConfig s;
  s.command = "spectrum";
  CHECK(failing_field(s) == "geometry");
  s.geometry = Geometry{};
  s.k_min = 5.0;
  s.k_max = 5.0;
  CHECK(failing_field(s) == "k_max");

  RunConfig m;
  m.command = "smatrix";
  m.k = std::acos(-1.0);
  m.matrix = "exact";
  CHECK(failing_field(m) == "k");

  RunConfig bad;
  bad.command = "frobnicate";
  CHECK(failing_field(bad) == "command");
}

TEST_CASE("output directory hashing") {
  RunConfig a = trace_config();
  RunConfig b = trace_config();
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  b.output_dir = "elsewhere";
  CHECK(config_hash(a) == config_hash(b));
  b.seed = 2;
  CHECK(config_hash(a) != config_hash(b));
  CHECK(resolve_output_dir(b) == "elsewhere");

  setenv("BARRIER_OUTPUT_ROOT", "/tmp/runs-root", 1);
  CHECK(default_output_root() == "/tmp/runs-root");
  CHECK(resolve_output_dir(a) == "/tmp/runs-root/trace-" + config_hash(a));
  unsetenv("BARRIER_OUTPUT_ROOT");
  CHECK(default_output_root() == "barrier_runs");
}
