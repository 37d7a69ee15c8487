#include "doctest.h"

#include "cli_checks.hpp"

namespace {

void require_none(const std::vector<std::string> &failures) {
  for (const auto &f : failures)
    FAIL_CHECK(f);
  CHECK(failures.empty());
}

} // namespace

TEST_CASE("exit codes") { require_none(cli_checks::exit_code_failures()); }

TEST_CASE("presets print parseable configs") {
  require_none(cli_checks::preset_round_trip_failures());
}

TEST_CASE("plot tables match the golden files") {
  require_none(cli_checks::golden_failures());
}

TEST_CASE("the overflow fixture really overflows") {
  const auto m = mspso::parse_well_proxy(cli_checks::overflowing_fixture());
  CHECK_THROWS_AS(m.evaluate(mspso::Vector(90, 0.5)), mspso::EvaluationError);
}
