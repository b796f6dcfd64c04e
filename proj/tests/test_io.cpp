#include <doctest.h>

#include <sstream>
#include <string>

#include "ehbc/errors.hpp"
#include "ehbc/flowright.hpp"
#include "ehbc/io.hpp"

using namespace ehbc;
using nlohmann::json;

namespace {

const json kReference = json::parse(R"({
  "bits": [8e8, 1e8],
  "harvests": [{"t": 0, "E": 10}, {"t": 2, "E": 10}, {"t": 5, "E": 20},
               {"t": 7, "E": 40}, {"t": 9, "E": 60}, {"t": 10, "E": 70},
               {"t": 11, "E": 90}, {"t": 13, "E": 180}, {"t": 14, "E": 190},
               {"t": 15, "E": 100}, {"t": 18, "E": 50}, {"t": 20, "E": 30},
               {"t": 23, "E": 10}],
  "channel": {"W_hz": 1e5, "N0": 1e-13, "pathloss_db": [70, 75]}
})");

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    out.push_back(line);
  }
  return out;
}

}  // namespace

TEST_CASE("instance JSON in hours") {
  const ProblemInstance inst = instance_from_json(kReference, TimeUnit::Hours);
  REQUIRE(inst.harvests.size() == 13);
  CHECK(inst.harvests[1].time == 7200.0);
  CHECK(inst.bits1 == 8e8);
  CHECK(inst.is_physical());
  const auto& u = std::get<PhysicalUnits>(inst.units);
  CHECK(u.bandwidth_hz == 1e5);
  CHECK(u.pathloss_db[1] == 75.0);
}

TEST_CASE("instance JSON round trip") {
  const ProblemInstance a = instance_from_json(kReference, TimeUnit::Hours);
  const ProblemInstance b = instance_from_json(instance_to_json(a));
  CHECK(b.bits1 == a.bits1);
  CHECK(b.bits2 == a.bits2);
  REQUIRE(b.harvests.size() == a.harvests.size());
  for (std::size_t i = 0; i < a.harvests.size(); ++i) {
    CHECK(b.harvests[i].time == a.harvests[i].time);
    CHECK(b.harvests[i].energy == a.harvests[i].energy);
  }
  const json n = json::parse(R"({"bits": [1, 2], "harvests": [{"t": 0, "E": 18}],
                                  "channel": {"s1": 1, "s2": 0.5, "sigma2": 1}})");
  const ProblemInstance c = instance_from_json(instance_to_json(instance_from_json(n)));
  CHECK_FALSE(c.is_physical());
  CHECK(c.channel.s2 == 0.5);
  CHECK(c.bits2 == 2.0);
}

TEST_CASE("malformed instance JSON") {
  CHECK_THROWS_AS(instance_from_json(json::parse(R"({"harvests": []})")), ParseError);
  CHECK_THROWS_AS(instance_from_json(json::parse(R"({"bits": [1], "harvests": [{"t": 0, "E": 1}],
      "channel": {"s1": 1, "s2": 0.5, "sigma2": 1}})")), ParseError);
  CHECK_THROWS_AS(instance_from_json(json::parse(R"({"bits": [1, 1], "harvests": [{"t": 0, "E": 1}],
      "channel": {"s1": 0.5, "s2": 1, "sigma2": 1}})")), InvalidInstance);
  CHECK_THROWS_AS(read_json_file("/nonexistent/instance.json"), ParseError);
}

TEST_CASE("schedule JSON round trip") {
  const ProblemInstance inst = instance_from_json(kReference, TimeUnit::Hours);
  const SolveResult r = solve(inst);
  const json j = schedule_to_json(r.schedule, &r.diagnostics);
  CHECK(j.at("T").get<double>() == r.schedule.completion_time);
  CHECK(j.at("iterations").get<std::size_t>() == r.diagnostics.iterations);
  CHECK(j.at("stop_reason").get<std::string>() == "converged");
  const Schedule back = schedule_from_json(j);
  CHECK(back.completion_time == doctest::Approx(r.schedule.completion_time).epsilon(1e-12));
  const auto a = r.schedule.segments();
  const auto b = back.segments();
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(b[i].power == doctest::Approx(a[i].power).epsilon(1e-12));
    CHECK(b[i].rate1 == doctest::Approx(a[i].rate1).epsilon(1e-12));
  }
}

TEST_CASE("CSV export of the reference schedule") {
  const ProblemInstance inst = instance_from_json(kReference, TimeUnit::Hours);
  const Schedule s = solve(inst).schedule;
  std::ostringstream os;
  write_csv(os, s);
  const auto rows = lines(os.str());
  REQUIRE(rows.size() == 12);
  CHECK(rows[0] == "t_start,t_end,power_W,r1,r2,cum_b1,cum_b2");
  std::istringstream last(rows.back());
  std::vector<double> cols;
  for (std::string cell; std::getline(last, cell, ',');) {
    cols.push_back(std::stod(cell));
  }
  REQUIRE(cols.size() == 7);
  CHECK(cols[5] == doctest::Approx(8e8).epsilon(1e-9));
  CHECK(cols[6] == doctest::Approx(1e8).epsilon(1e-9));
}

TEST_CASE("CSV export of an empty schedule is header only") {
  std::ostringstream os;
  write_csv(os, Schedule{});
  CHECK(lines(os.str()).size() == 1);
}
