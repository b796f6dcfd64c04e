#include <doctest.h>

#include "ehbc/generate.hpp"
#include "ehbc/io.hpp"

using namespace ehbc;

TEST_CASE("same seed, same instance") {
  GenOptions g;
  g.seed = 42;
  g.harvests = 6;
  CHECK(instance_to_json(generate_instance(g)).dump() ==
        instance_to_json(generate_instance(g)).dump());
  GenOptions h = g;
  h.seed = 43;
  CHECK(instance_to_json(generate_instance(g)).dump() !=
        instance_to_json(generate_instance(h)).dump());
}

TEST_CASE("one harvest") {
  GenOptions g;
  g.harvests = 1;
  const ProblemInstance inst = generate_instance(g);
  CHECK(inst.harvests.size() == 1);
  CHECK(inst.harvests[0].time == 0.0);
}

TEST_CASE("generated instances are feasible and valid") {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    GenOptions g;
    g.seed = seed;
    g.harvests = 1 + seed % 12;
    const ProblemInstance inst = generate_instance(g);
    CAPTURE(seed);
    CHECK_NOTHROW(inst.validate());
    CHECK(check_feasible(inst).feasible);
    CHECK(inst.harvests.size() == g.harvests);
  }
}

TEST_CASE("fixed channel") {
  GenOptions g;
  g.random_channel = false;
  const ProblemInstance inst = generate_instance(g);
  CHECK(inst.channel.s1 == 1.0);
  CHECK(inst.channel.s2 == 0.5);
  CHECK(inst.channel.sigma2 == 1.0);
}
