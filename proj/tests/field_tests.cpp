#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "nlop/field.hpp"

using namespace nlop;

TEST_CASE("grid geometry: cell centers, box, counts") {
  Grid g = Grid::make_1d(-2.0, 2.0, 8);
  CHECK(g.h == doctest::Approx(0.5));
  CHECK(g.node(0, 0).x == doctest::Approx(-1.75));
  CHECK(g.node(7, 0).x == doctest::Approx(1.75));
  CHECK(g.count() == 8);

  Grid g2 = Grid::make_2d({{-1.0, -0.5}, {1.0, 0.5}}, 16);
  CHECK(g2.ny == 8);  // aspect ratio 2:1
  CHECK(g2.box().hi.y == doctest::Approx(0.5));
}

TEST_CASE("sample clamps negative values; free/fixed split follows omega") {
  Grid g = Grid::make_1d(-1.0, 1.0, 32);
  Box omega{{-0.5, 0.0}, {0.5, 0.0}};
  Field u(g, omega, 0.5, Exterior::zero());
  u.sample([](Vec2 p) { return p.x; });
  for (int i = 0; i < g.nx; ++i) {
    CHECK(u.at(i, 0) >= 0.0);
    CHECK(u.free_node(i, 0) == (std::abs(g.node(i, 0).x) < 0.5));
  }
}

TEST_CASE("eval: bilinear inside, exterior continuation outside") {
  Grid g = Grid::make_2d({{-1.0, -1.0}, {1.0, 1.0}}, 20);
  Exterior ext = Exterior::custom([](Vec2 p) { return 3.0 + p.x; },
                                  FarField::profile_growth({{1, 0}, 3.0, 1.0, 1.0}));
  Field u(g, {{-0.5, -0.5}, {0.5, 0.5}}, 0.5, ext);
  u.sample([](Vec2 p) { return 3.0 + p.x + 0.25 * p.y; });
  // bilinear interpolation reproduces affine data exactly between nodes
  CHECK(u.eval({0.123, -0.321}) == doctest::Approx(3.0 + 0.123 - 0.25 * 0.321).epsilon(1e-12));
  // outside the grid box the exterior continuation takes over
  CHECK(u.eval({5.0, 0.0}) == doctest::Approx(8.0));
}

TEST_CASE("validate rejects negative values and modified fixed nodes") {
  Grid g = Grid::make_1d(-1.0, 1.0, 16);
  HalfSpaceProfile p{{1.0, 0.0}, 0.0, 1.0, 0.5};
  Field u = profile_field(g, {{-0.5, 0.0}, {0.5, 0.0}}, p);
  CHECK_NOTHROW(u.validate());
  Field bad = u;
  bad.at(8, 0) = -0.1;
  CHECK_THROWS_AS(bad.validate(), std::runtime_error);
  Field tampered = u;
  tampered.at(0, 0) += 1.0;  // fixed node (outside omega)
  CHECK_THROWS_AS(tampered.validate(), std::runtime_error);
}

TEST_CASE("save/load roundtrip is bit exact and keeps the exterior") {
  Grid g = Grid::make_2d({{-1.0, -1.0}, {1.0, 1.0}}, 12);
  HalfSpaceProfile p{{0.6, 0.8}, 0.1, 1.3, 0.4};
  Field u = profile_field(g, {{-0.6, -0.6}, {0.6, 0.6}}, p);
  u.at(5, 5) += 0.125;
  std::string prefix = "/tmp/nlop_field_roundtrip";
  u.save(prefix);
  Field v = Field::load(prefix);
  CHECK(v.grid == u.grid);
  CHECK(v.values == u.values);
  CHECK(v.s == u.s);
  CHECK(v.exterior.kind == Exterior::Kind::Profile);
  CHECK(v.exterior_value({3.0, 4.0}) == doctest::Approx(u.exterior_value({3.0, 4.0})));
  CHECK(v.omega.lo.x == u.omega.lo.x);
  std::remove((prefix + ".bin").c_str());
  std::remove((prefix + ".json").c_str());

  CHECK_THROWS_AS(Field::load("/tmp/nlop_field_does_not_exist"), std::runtime_error);
}

TEST_CASE("csv export: header plus one row per node, full precision") {
  Grid g = Grid::make_1d(0.0, 1.0, 4);
  Field u(g, {{0.25, 0.0}, {0.75, 0.0}}, 0.5, Exterior::zero());
  u.at(1, 0) = 1.0 / 3.0;
  std::string path = "/tmp/nlop_field_export.csv";
  u.export_csv(path);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "x,u");
  int rows = 0;
  bool found = false;
  while (std::getline(in, line)) {
    ++rows;
    if (line.find("0.33333333333333331") != std::string::npos) found = true;
  }
  CHECK(rows == 4);
  CHECK(found);
  std::remove(path.c_str());
}

TEST_CASE("exterior descriptor roundtrip for all kinds") {
  Exterior z = Exterior::zero();
  Exterior z2 = Exterior::from_descriptor(z.descriptor());
  CHECK(z2.kind == Exterior::Kind::Zero);
  CHECK(z2({1.0, 2.0}) == 0.0);

  HalfSpaceProfile p{{0.0, 1.0}, -0.2, 0.9, 0.6};
  Exterior e = Exterior::from_profile(p);
  Exterior e2 = Exterior::from_descriptor(e.descriptor());
  CHECK(e2({0.3, 0.7}) == doctest::Approx(e({0.3, 0.7})));

  // custom exteriors cannot be serialized
  Exterior c = Exterior::custom([](Vec2) { return 1.0; }, FarField::constant_value(1.0));
  CHECK_THROWS_AS(Exterior::from_descriptor(c.descriptor()), std::exception);
}
