#include <sstream>

#include "doctest.h"
#include "isocone/cli.hpp"
#include "isocone/errors.hpp"
#include "isocone/io.hpp"
#include "test_support.hpp"

using namespace isocone;
using isocone::testing::vec;

namespace {

const std::string data = ISOCONE_TEST_DATA;

struct Run {
  int code;
  Json report;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  Json j;
  if (!out.str().empty()) j = Json::parse(out.str());
  return {code, j, err.str()};
}

Vector vec_of(const Json& j) { return parse_vector(j); }

}  // namespace

TEST_CASE("cone round trip") {
  const Json specs[] = {
      Json::parse(R"({"type":"orthant","dim":3})"),
      Json::parse(R"({"type":"lorentz","dim":4})"),
      Json::parse(R"({"type":"simplicial","generators":[[1,0],[1,1]]})"),
      Json::parse(R"({"type":"generators","generators":[[1,0,0],[0,1,0],[1,1,1]]})"),
      Json::parse(R"({"type":"facets","normals":[[1,0],[1,1]]})"),
  };
  for (const Json& j : specs) {
    const Cone k = parse_cone(j);
    CHECK(to_json(k) == j);
  }
  const Cone sk = parse_cone(specs[2]);
  // columns, not rows
  CHECK(sk.generators().col(1) == vec({1, 1}));
}

TEST_CASE("set round trip and offsets") {
  const ConvexSet h = parse_set(Json::parse(R"({"type":"halfspace","normal":[0,2],"offset":4})"));
  CHECK(std::get<Halfspace>(h).offset() == doctest::Approx(4.0));
  CHECK(set_violation(h, vec({0, 3})) == doctest::Approx(1.0));

  const Json poly = Json::parse(
      R"({"type":"polyhedron","halfspaces":[{"normal":[1,0],"anchor":[1,0]},{"normal":[-1,0],"offset":0},
          {"normal":[0,1],"offset":1},{"normal":[0,-1],"offset":0}],"interior_point":[0.5,0.5]})");
  const ConvexSet p = parse_set(poly);
  const ConvexSet again = parse_set(to_json(p));
  CHECK(std::get<Polyhedron>(again).normals() == std::get<Polyhedron>(p).normals());
  CHECK(std::get<Polyhedron>(again).offsets().isApprox(std::get<Polyhedron>(p).offsets()));
}

TEST_CASE("schema errors") {
  CHECK_THROWS_AS(parse_cone(Json::parse(R"({"type":"orthant"})")), ParseError);
  CHECK_THROWS_AS(parse_cone(Json::parse(R"({"type":"cube","dim":2})")), ParseError);
  CHECK_THROWS_AS(parse_cone(Json::parse(R"({"type":"orthant","dim":2.5})")), ParseError);
  CHECK_THROWS_AS(parse_cone(Json::parse(R"({"type":"simplicial","generators":[[1,0],[1]]})")), ParseError);
  CHECK_THROWS_AS(parse_vector(Json::parse(R"([1,"a"])")), ParseError);
  CHECK_THROWS_AS(parse_vector(Json::parse(R"([])")), ParseError);
  CHECK_THROWS_AS(parse_set(Json::parse(R"({"type":"halfspace","normal":[1,0]})")), ParseError);
  CHECK_THROWS_AS(read_json_file(data + "/broken.json"), ParseError);
  CHECK_THROWS_AS(read_json_file(data + "/missing.json"), ParseError);
  // value errors from the constructors pass through
  CHECK_THROWS_AS(parse_cone(Json::parse(R"({"type":"simplicial","generators":[[1,0],[2,0]]})")), InvalidArgument);
}

TEST_CASE("project command") {
  Run r = run({"project", data + "/orthant2.json", data + "/v_1_m1.json"});
  CHECK(r.code == 0);
  CHECK(vec_of(r.report["projection"]) == vec({1, 0}));
  CHECK(vec_of(r.report["moreau"]["q"]) == vec({0, 1}));
  CHECK(r.report["moreau"]["residuals"]["reconstruction"].get<double>() == 0.0);

  r = run({"project", data + "/lorentz3.json", data + "/v_3_4_0.json"});
  CHECK((vec_of(r.report["projection"]) - vec({1.5, 2, 2.5})).norm() < 1e-15);

  // a point of the cone is its own projection
  r = run({"project", data + "/orthant2.json", data + "/v_1_3.json"});
  CHECK(vec_of(r.report["projection"]) == vec({1, 3}));
  CHECK(vec_of(r.report["moreau"]["q"]).isZero(0.0));

  CHECK(r.report["isocone_version"] == ISOCONE_VERSION);
  CHECK(r.report["seed"] == 0);
}

TEST_CASE("latop command") {
  Run r = run({"latop", "meet", data + "/orthant2.json", data + "/v_1_3.json", data + "/v_2_1.json"});
  CHECK(r.code == 0);
  CHECK(vec_of(r.report["value"]) == vec({1, 1}));
  CHECK(r.report["paths_agree"] == true);

  r = run({"latop", "join-star", data + "/lorentz3.json", data + "/v_3_4_0.json", data + "/v_3_4_0.json"});
  CHECK(r.code == 0);
  CHECK((vec_of(r.report["value"]) - vec({3, 4, 0})).norm() < 1e-14);

  r = run({"latop", "wedge", data + "/orthant2.json", data + "/v_1_3.json", data + "/v_2_1.json"});
  CHECK(r.code == 2);
  r = run({"latop", "meet", data + "/orthant3.json", data + "/v_1_3.json", data + "/v_2_1.json"});
  CHECK(r.code == 2);
}

TEST_CASE("check command") {
  Run r = run({"check", "classify-normal", data + "/normal_1_m1.json", data + "/orthant2.json"});
  CHECK(r.code == 0);
  CHECK(r.report["classification"]["case"] == "PairCone");
  CHECK(r.report["classification"]["p"] == 1);
  CHECK(r.report["classification"]["q"] == 2);

  r = run({"check", "isotone", data + "/halfspace_1_1.json", data + "/orthant2.json"});
  CHECK(r.code == 1);
  CHECK(r.report["report"]["verdict"] == "NotIsotone");
  CHECK(r.report["report"]["counterexample"]["relation"] == "isotone");

  r = run({"check", "invariant", data + "/box2.json", data + "/orthant2.json"});
  CHECK(r.code == 0);
  CHECK(r.report["report"]["verdict"] == "Invariant");
  CHECK(r.report["report"]["method"] == "exact+sampled");

  r = run({"check", "invariant", data + "/box2.json", data + "/orthant2.json", "--samples", "0"});
  CHECK(r.report["report"]["method"] == "exact");

  r = run({"check", "invariant", data + "/cylinder3.json", data + "/lorentz3.json", "--samples", "200"});
  CHECK(r.code == 4);

  r = run({"check", "sublattice", data + "/box2.json", data + "/orthant2.json"});
  CHECK(r.code == 0);
  CHECK(r.report["report"]["verdict"] == "Sublattice");

  r = run({"check", "enumerate-normals", data + "/skew2.json"});
  CHECK(r.code == 0);
  CHECK(r.report["families"].size() == 2 + 4);

  r = run({"check", "lorentz-product", data + "/box3.json", "--samples", "2000"});
  CHECK(r.code == 1);
  CHECK(r.report["report"]["verdict"] == "NotProductForm");

  r = run({"check", "tangent-facets", data + "/halfspace_1_1.json", data + "/orthant2.json"});
  CHECK(r.code == 2);
  r = run({"check", "sublattice", data + "/box3.json", data + "/lorentz3.json"});
  CHECK(r.code == 2);
  r = run({"check", "invariant", data + "/box2.json"});
  CHECK(r.code == 2);
  r = run({"check", "invariant", data + "/box2.json", data + "/orthant2.json", "--eps-rel", "0"});
  CHECK(r.code == 2);
}

TEST_CASE("same seed, same report") {
  const std::vector<std::string> args = {"check", "isotone", data + "/halfspace_1_1.json", data + "/orthant2.json",
                                         "--seed", "12345"};
  std::ostringstream a, b, err;
  run_cli(args, a, err);
  run_cli(args, b, err);
  CHECK(a.str() == b.str());
  std::ostringstream c;
  std::vector<std::string> other = args;
  other.back() = "54321";
  run_cli(other, c, err);
  CHECK(Json::parse(c.str())["seed"] == 54321);
}
