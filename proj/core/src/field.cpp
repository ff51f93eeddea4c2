#include "nlop/field.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace nlop {

Grid Grid::make_1d(double a, double b, int nx) {
  if (!(b > a) || nx < 2) throw std::invalid_argument("make_1d: bad extent");
  Grid g;
  g.dim = 1;
  g.nx = nx;
  g.ny = 1;
  g.lo = {a, 0.0};
  g.h = (b - a) / nx;
  return g;
}

Grid Grid::make_2d(Box b, int nx) {
  if (!(b.hi.x > b.lo.x) || !(b.hi.y > b.lo.y) || nx < 2)
    throw std::invalid_argument("make_2d: bad extent");
  Grid g;
  g.dim = 2;
  g.nx = nx;
  g.h = (b.hi.x - b.lo.x) / nx;
  g.ny = std::max(2, static_cast<int>(std::lround((b.hi.y - b.lo.y) / g.h)));
  g.lo = b.lo;
  return g;
}

double Exterior::operator()(Vec2 p) const {
  switch (kind) {
    case Kind::Zero: return 0.0;
    case Kind::Profile: return profile(p);
    case Kind::Custom: return fn(p);
  }
  return 0.0;
}

FarField Exterior::far() const {
  switch (kind) {
    case Kind::Zero: return FarField::decaying();
    case Kind::Profile: return FarField::profile_growth(profile);
    case Kind::Custom: return custom_far;
  }
  return FarField::decaying();
}

nlohmann::json Exterior::descriptor() const {
  switch (kind) {
    case Kind::Zero: return {{"kind", "zero"}};
    case Kind::Profile: return {{"kind", "profile"}, {"profile", profile}};
    case Kind::Custom: return {{"kind", "derived"}};
  }
  return {};
}

Exterior Exterior::from_descriptor(const nlohmann::json& j) {
  auto kind = j.at("kind").get<std::string>();
  if (kind == "zero") return Exterior::zero();
  if (kind == "profile") return Exterior::from_profile(j.at("profile").get<HalfSpaceProfile>());
  throw std::invalid_argument("exterior descriptor '" + kind + "' is not loadable");
}

Field::Field(const Grid& g, const Box& omega_box, double s_order, Exterior ext)
    : grid(g), values(g.count(), 0.0), omega(omega_box), s(s_order), exterior(std::move(ext)) {
  Box b = grid.box();
  if (omega.lo.x < b.lo.x || omega.hi.x > b.hi.x ||
      (grid.dim == 2 && (omega.lo.y < b.lo.y || omega.hi.y > b.hi.y)))
    throw std::invalid_argument("omega must be contained in the grid box");
  enforce_exterior();
}

double Field::eval(Vec2 p) const {
  Box b = grid.box();
  if (!b.contains(p, grid.dim)) return exterior(p);
  double fx = (p.x - grid.lo.x) / grid.h - 0.5;
  int i0 = static_cast<int>(std::floor(fx));
  double tx = fx - i0;
  i0 = std::clamp(i0, 0, grid.nx - 2);
  tx = std::clamp(fx - i0, 0.0, 1.0);
  if (grid.dim == 1) {
    return (1.0 - tx) * at(i0, 0) + tx * at(i0 + 1, 0);
  }
  double fy = (p.y - grid.lo.y) / grid.h - 0.5;
  int j0 = static_cast<int>(std::floor(fy));
  j0 = std::clamp(j0, 0, grid.ny - 2);
  double ty = std::clamp(fy - j0, 0.0, 1.0);
  double v00 = at(i0, j0), v10 = at(i0 + 1, j0);
  double v01 = at(i0, j0 + 1), v11 = at(i0 + 1, j0 + 1);
  return (1.0 - ty) * ((1.0 - tx) * v00 + tx * v10) + ty * ((1.0 - tx) * v01 + tx * v11);
}

void Field::sample(const std::function<double(Vec2)>& fn) {
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i)
      at(i, j) = std::max(0.0, fn(grid.node(i, j)));
}

void Field::enforce_exterior() {
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i)
      if (!free_node(i, j)) at(i, j) = std::max(0.0, exterior(grid.node(i, j)));
}

void Field::validate() const {
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      double v = at(i, j);
      if (!(v >= 0.0)) throw std::runtime_error("field value negative or NaN");
      if (!free_node(i, j)) {
        double ref = std::max(0.0, exterior(grid.node(i, j)));
        if (std::abs(v - ref) > 1e-12 * (1.0 + std::abs(ref)))
          throw std::runtime_error("fixed node deviates from exterior data");
      }
    }
}

void Field::save(const std::string& path_prefix) const {
  {
    std::ofstream blob(path_prefix + ".bin", std::ios::binary);
    if (!blob) throw std::runtime_error("cannot write " + path_prefix + ".bin");
    blob.write(reinterpret_cast<const char*>(values.data()),
               static_cast<std::streamsize>(values.size() * sizeof(double)));
  }
  nlohmann::json side{{"dim", grid.dim},
                      {"nx", grid.nx},
                      {"ny", grid.ny},
                      {"lo", {grid.lo.x, grid.lo.y}},
                      {"spacing", grid.h},
                      {"omega_box", {{"lo", {omega.lo.x, omega.lo.y}}, {"hi", {omega.hi.x, omega.hi.y}}}},
                      {"exterior", exterior.descriptor()},
                      {"s", s}};
  std::ofstream js(path_prefix + ".json");
  if (!js) throw std::runtime_error("cannot write " + path_prefix + ".json");
  js << side.dump(2) << "\n";
}

Field Field::load(const std::string& path_prefix) {
  std::ifstream js(path_prefix + ".json");
  if (!js) throw std::runtime_error("cannot read " + path_prefix + ".json");
  nlohmann::json side = nlohmann::json::parse(js);
  Grid g;
  g.dim = side.at("dim").get<int>();
  g.nx = side.at("nx").get<int>();
  g.ny = side.at("ny").get<int>();
  g.lo = {side.at("lo").at(0).get<double>(), side.at("lo").at(1).get<double>()};
  g.h = side.at("spacing").get<double>();
  Box omega{{side.at("omega_box").at("lo").at(0).get<double>(),
             side.at("omega_box").at("lo").at(1).get<double>()},
            {side.at("omega_box").at("hi").at(0).get<double>(),
             side.at("omega_box").at("hi").at(1).get<double>()}};
  Field f(g, omega, side.at("s").get<double>(),
          Exterior::from_descriptor(side.at("exterior")));
  std::ifstream blob(path_prefix + ".bin", std::ios::binary);
  if (!blob) throw std::runtime_error("cannot read " + path_prefix + ".bin");
  blob.read(reinterpret_cast<char*>(f.values.data()),
            static_cast<std::streamsize>(f.values.size() * sizeof(double)));
  if (!blob) throw std::runtime_error("field blob truncated");
  return f;
}

void Field::export_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.precision(17);
  out << (grid.dim == 2 ? "x,y,u\n" : "x,u\n");
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      Vec2 p = grid.node(i, j);
      if (grid.dim == 2)
        out << p.x << "," << p.y << "," << at(i, j) << "\n";
      else
        out << p.x << "," << at(i, j) << "\n";
    }
}

Field profile_field(const Grid& g, const Box& omega_box, const HalfSpaceProfile& p) {
  Field f(g, omega_box, p.s, Exterior::from_profile(p));
  f.sample([&p](Vec2 x) { return p(x); });
  return f;
}

}  // namespace nlop
