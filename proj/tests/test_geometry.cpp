#include <doctest.h>

#include "skinfx/geometry.hpp"

using namespace skinfx;

TEST_CASE("shorthand config expands to explicit lists") {
  const ChainSpec c = chain_from_config(R"({"N":3, "length":1, "spacing":1, "gamma":1, "delta":0.001, "v_b":1})");
  CHECK(c.lengths == std::vector<double>{1, 1, 1});
  CHECK(c.spacings == std::vector<double>{1, 1});
  CHECK(c.gammas == std::vector<double>{1, 1, 1});
  CHECK(c.delta == 0.001);
  CHECK(c.v_b == 1.0);
}

TEST_CASE("explicit lists pass through") {
  const ChainSpec c = chain_from_config(R"({"lengths":[1,1], "spacings":[2], "gammas":[0.5,0.5], "delta":0.01, "v_b":2})");
  CHECK(c.size() == 2);
  CHECK(c.spacings[0] == 2.0);
  CHECK(c.v_b == 2.0);
}

TEST_CASE("invalid documents are rejected") {
  CHECK_THROWS_WITH_AS(chain_from_config(R"({"lengths":[1,-1], "spacings":[1], "gamma":1})"),
                       "non-positive length", ValidationError);
  CHECK_THROWS_WITH_AS(chain_from_config(R"({"lengths":[1,1], "spacings":[0], "gamma":1})"),
                       "non-positive spacing", ValidationError);
  CHECK_THROWS_WITH_AS(chain_from_config(R"({"lengths":[1,1], "spacings":[1,1], "gamma":1})"),
                       "inconsistent list lengths", ValidationError);
  CHECK_THROWS_WITH_AS(chain_from_config(R"({"N":3, "lengths":[1,1], "spacing":1, "gamma":1})"),
                       "inconsistent list lengths", ValidationError);
  CHECK_THROWS_AS(chain_from_config(R"({"N":2, "length":1, "spacing":1, "gamma":1, "colour":3})"), ValidationError);
  CHECK_THROWS_AS(chain_from_config(R"({"N":2, "length":1,)"), ValidationError);
  CHECK_THROWS_AS(chain_from_config(R"([1,2,3])"), ValidationError);
  CHECK_THROWS_AS(chain_from_config(R"({"N":2, "length":1, "spacing":1})"), ValidationError);
  CHECK_THROWS_AS(chain_from_config(R"({"N":2, "length":1, "spacing":1, "gamma":1, "delta":-1})"), ValidationError);
  CHECK_THROWS_WITH_AS(
      chain_from_config(R"({"N":2, "length":1, "spacing":1, "gamma":1, "speeds":[[1,0]]})"),
      "inconsistent list lengths", ValidationError);
}

TEST_CASE("speeds are read as re/im pairs and the config round-trips") {
  const ChainSpec c =
      chain_from_config(R"({"N":2, "length":1, "spacing":1, "gamma":0, "speeds":[[1,1.38],[1,-1.42]]})");
  REQUIRE(c.speeds);
  CHECK((*c.speeds)[0] == Complex(1, 1.38));
  CHECK((*c.speeds)[1] == Complex(1, -1.42));
  const ChainSpec again = chain_from_json(chain_to_config(c));
  CHECK(again.lengths == c.lengths);
  CHECK(again.spacings == c.spacings);
  CHECK(again.gammas == c.gammas);
  CHECK(*again.speeds == *c.speeds);
  CHECK(chain_to_config(again) == chain_to_config(c));
}

TEST_CASE("resonator positions accumulate lengths and gaps") {
  ChainSpec c = uniform_chain(2, 0.0);
  auto p = resonator_positions(c);
  REQUIRE(p.size() == 2);
  CHECK(p[0].left == 0.0);
  CHECK(p[0].right == 1.0);
  CHECK(p[1].left == 2.0);
  CHECK(p[1].right == 3.0);

  c = chain_from_config(R"({"lengths":[2], "gamma":0})");
  p = resonator_positions(c);
  REQUIRE(p.size() == 1);
  CHECK(p[0].left == 0.0);
  CHECK(p[0].right == 2.0);

  c = chain_from_config(R"({"lengths":[1,1,1], "spacings":[1,2], "gamma":0})");
  p = resonator_positions(c);
  CHECK(p[2].left == 5.0);
  CHECK(p[2].right == 6.0);

  c = chain_from_config(R"({"lengths":[0.3,1.7,0.1,2.9], "spacings":[0.7,1.3,0.2], "gamma":0})");
  p = resonator_positions(c);
  for (std::size_t i = 0; i < c.size(); ++i) {
    CHECK(p[i].right - p[i].left == doctest::Approx(c.lengths[i]).epsilon(1e-15));
    if (i + 1 < c.size()) CHECK(p[i + 1].left - p[i].right == doctest::Approx(c.spacings[i]).epsilon(1e-15));
  }
}

TEST_CASE("interface chain puts -gamma on the left block") {
  ChainSpec c = interface_chain(1, 1.0);
  CHECK(c.gammas == std::vector<double>{-1, 1, 1});
  c = interface_chain(2, 0.5);
  CHECK(c.gammas == std::vector<double>{-0.5, -0.5, 0.5, 0.5, 0.5});
  CHECK(c.size() == 5);
  CHECK_THROWS_AS(interface_chain(1, 0.0), ValidationError);
}

TEST_CASE("unit cells parse and build periodic chains") {
  const UnitCellSpec cell = cell_from_config(R"({"cell":{"lengths":[1,1],"spacings":[1,2]},"gamma":0.5})");
  CHECK(cell.period() == 5.0);
  CHECK(cell.gamma == 0.5);
  const ChainSpec chain = periodic_chain(cell, 3);
  CHECK(chain.size() == 6);
  CHECK(chain.spacings == std::vector<double>{1, 2, 1, 2, 1});
  CHECK_THROWS_AS(cell_from_config(R"({"cell":{"lengths":[1],"spacings":[1,2]}})"), ValidationError);
  CHECK_THROWS_AS(cell_from_config(R"({"cell":{"lengths":[1],"spacings":[1]}, "beta":1})"), ValidationError);
  const UnitCellSpec again = cell_from_json(cell_to_config(cell));
  CHECK(again.spacings == cell.spacings);
}
