#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "hcs/errors.hpp"
#include "hcs/shadow_io.hpp"

using namespace hcs;

namespace {
std::vector<ShadowRecord> some_records() {
  return simulate_shots(InitialStateSpec::named("ghz"), 7, {3, true}, 0.45, 5, 40, Exec::Serial);
}
}  // namespace

TEST_CASE("records round-trip through a stream") {
  const auto recs = some_records();
  std::stringstream ss;
  write_shadows(ss, recs);
  CHECK(read_shadows(ss) == recs);
}

TEST_CASE("one record per line") {
  const auto recs = some_records();
  const std::string line = record_to_line(recs[3]);
  CHECK(line.find('\n') == std::string::npos);
  CHECK(record_from_line(line) == recs[3]);
}

TEST_CASE("comments and blank lines are skipped") {
  const auto recs = some_records();
  std::stringstream ss;
  ss << "# header\n\n" << record_to_line(recs[0]) << "\n# more\n" << record_to_line(recs[1]) << "\n";
  const auto back = read_shadows(ss);
  REQUIRE(back.size() == 2);
  CHECK(back[1] == recs[1]);
}

TEST_CASE("malformed lines report their line number") {
  const auto recs = some_records();
  std::stringstream ss;
  ss << "# header\n" << record_to_line(recs[0]) << "\n{\"n_qubits\": 3}\n";
  try {
    read_shadows(ss);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  std::stringstream junk("not json\n");
  CHECK_THROWS_AS(read_shadows(junk), ParseError);
}

TEST_CASE("files support append") {
  const auto recs = some_records();
  const auto path = std::filesystem::temp_directory_path() / "hcs_io_test.jsonl";
  std::filesystem::remove(path);
  write_shadows(path, {recs.begin(), recs.begin() + 10});
  write_shadows(path, {recs.begin() + 10, recs.end()}, true);
  CHECK(read_shadows(path) == recs);
  std::filesystem::remove(path);
  CHECK_THROWS(read_shadows(path));
}
