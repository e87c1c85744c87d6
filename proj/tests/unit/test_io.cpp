#include "stefan/check.hpp"
#include "stefan/config.hpp"
#include "stefan/report.hpp"
#include "stefan/tasks.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>

using namespace stefan;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fixture_text() { return slurp(std::string(STEFAN_SOURCE_DIR) + "/configs/fixture_a.yaml"); }

std::vector<std::string> errors_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.errors();
  }
  return {};
}

bool mentions(const std::vector<std::string>& errs, const std::string& what) {
  for (const auto& e : errs) {
    if (e.find(what) != std::string::npos) return true;
  }
  return false;
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("fixture config round trip") {
  const auto text = fixture_text();
  REQUIRE_FALSE(text.empty());
  const auto cfg = parse_config(text);
  CHECK(serialize(cfg) == text);
  CHECK(serialize(parse_config(serialize(cfg))) == serialize(cfg));
  CHECK(cfg.domain.n == 2);
  CHECK(cfg.outer_radius() == doctest::Approx(3.0));
}

TEST_CASE("missing key is named") {
  const auto errs = errors_of(replace(fixture_text(), "  sigma: 1\n", ""));
  CHECK(mentions(errs, "problem.sigma"));
}

TEST_CASE("negative gamma message") {
  const auto errs = errors_of(replace(fixture_text(), "  gamma: 0\n", "  gamma: -0.5\n"));
  CHECK(mentions(errs, "gamma >= 0"));
}

TEST_CASE("unknown key reports its line") {
  const auto errs = errors_of(replace(fixture_text(), "  sigma: 1\n", "  sigma: 1\n  sigmaa: 2\n"));
  CHECK(mentions(errs, "sigmaa"));
  CHECK(mentions(errs, "line"));
}

TEST_CASE("non-finite numbers are rejected") {
  CHECK_FALSE(errors_of(replace(fixture_text(), "  sigma: 1\n", "  sigma: .nan\n")).empty());
  CHECK_FALSE(errors_of(replace(fixture_text(), "  sigma: 1\n", "  sigma: 1e999\n")).empty());
}

TEST_CASE("empty check suite list warns") {
  auto cfg = parse_config(fixture_text());
  cfg.check = CheckTask{};
  const auto r = run_check_suite(cfg);
  CHECK(r.passed());
  CHECK(r.warnings.size() == 1);
}

TEST_CASE("invalid material fails the check") {
  auto cfg = parse_config(fixture_text());
  cfg.material.kappa1 = cfg.material.kappa2 = -1.0;
  cfg.check = CheckTask{{"thermo"}};
  const auto r = run_check_suite(cfg);
  CHECK_FALSE(r.passed());
  CHECK(r.exit_code() == 1);
}

TEST_CASE("equilibria task output is deterministic") {
  const auto cfg = parse_config(fixture_text());
  const auto a = run_equilibria_task(cfg);
  const auto b = run_equilibria_task(cfg);
  CHECK(dump_json(a.summary) == dump_json(b.summary));
  REQUIRE(a.tables.size() == 1);
  CHECK(a.tables[0].second.str() == b.tables[0].second.str());
  CHECK(a.summary["count"] == 2);
}

TEST_CASE("csv and number formatting") {
  CsvTable t;
  t.columns = {"a", "b"};
  t.add({0.1, std::nan("")});
  t.add({1e300, -std::numeric_limits<double>::infinity()});
  CHECK(t.str() == "a,b\n0.1,nan\n1e+300,-inf\n");
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(3.0) == "3");
  const double x = 28.274333882308138;
  CHECK(std::stod(format_number(x)) == x);
}
