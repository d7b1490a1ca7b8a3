#include "mintool/grid.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "mintool/reports.hpp"

namespace mintool::mms {

Grid::Grid(int nx_, int ny_, double h_, Eigen::Vector2d origin_)
    : nx(nx_), ny(ny_), h(h_), origin(std::move(origin_)) {
  if (nx < 3 || ny < 3) throw std::invalid_argument("Grid: nx, ny must be >= 3");
  if (!(h > 0.0)) throw std::invalid_argument("Grid: spacing must be positive");
}

DiscreteField::DiscreteField(const Grid& g, int m_) : grid(g), m(m_) {
  comps.assign(m, Eigen::MatrixXd::Zero(g.nodes_x(), g.nodes_y()));
}

bool DiscreteField::all_finite() const {
  for (const auto& c : comps)
    if (!c.allFinite()) return false;
  return true;
}

DiscreteField sample_field(const Grid& g, int m, const BoundaryFn& fn) {
  DiscreteField u(g, m);
  for (int i = 0; i < g.nodes_x(); ++i)
    for (int j = 0; j < g.nodes_y(); ++j) {
      const Eigen::VectorXd v = fn(g.x(i), g.y(j));
      for (int c = 0; c < m; ++c) u.at(c, i, j) = v[c];
    }
  return u;
}

void set_ring(DiscreteField& u, const BoundaryFn& fn) {
  const Grid& g = u.grid;
  for (int i = 0; i < g.nodes_x(); ++i)
    for (int j = 0; j < g.nodes_y(); ++j) {
      if (i != 0 && i != g.nodes_x() - 1 && j != 0 && j != g.nodes_y() - 1) continue;
      const Eigen::VectorXd v = fn(g.x(i), g.y(j));
      for (int c = 0; c < u.m; ++c) u.at(c, i, j) = v[c];
    }
}

BoundaryPreset make_affine_boundary(const Eigen::MatrixXd& X0, const Eigen::VectorXd& a) {
  BoundaryPreset p;
  p.name = "affine";
  p.m = static_cast<int>(X0.rows());
  p.fn = [X0, a](double x, double y) {
    return Eigen::VectorXd(a + X0 * Eigen::Vector2d(x, y));
  };
  return p;
}

BoundaryPreset make_harmonic_boundary(double delta) {
  BoundaryPreset p;
  p.name = "harmonic";
  p.m = 1;
  p.fn = [delta](double x, double y) {
    Eigen::VectorXd v(1);
    v[0] = delta * std::sin(M_PI * x) * std::cos(2.0 * M_PI * y);
    return v;
  };
  return p;
}

BoundaryPreset make_holomorphic_boundary(double lambda) {
  BoundaryPreset p;
  p.name = "holomorphic";
  p.m = 2;
  p.fn = [lambda](double x, double y) {
    Eigen::VectorXd v(2);
    v[0] = lambda * (x * x - y * y);
    v[1] = lambda * 2.0 * x * y;
    return v;
  };
  return p;
}

BoundaryPreset make_sine_bump_boundary(double delta) {
  BoundaryPreset p;
  p.name = "sine-bump";
  p.m = 1;
  p.fn = [delta](double x, double y) {
    Eigen::VectorXd v(1);
    v[0] = delta * (std::sin(2.0 * M_PI * x) + std::sin(2.0 * M_PI * y));
    return v;
  };
  return p;
}

BoundaryPreset boundary_preset_by_name(const std::string& name, double param) {
  if (name == "affine") {
    Eigen::MatrixXd X0(2, 2);
    X0 << param, 0.25, -0.5, param;
    Eigen::VectorXd a(2);
    a << 0.1, -0.2;
    return make_affine_boundary(X0, a);
  }
  if (name == "harmonic") return make_harmonic_boundary(param);
  if (name == "holomorphic") return make_holomorphic_boundary(param);
  if (name == "sine-bump") return make_sine_bump_boundary(param);
  throw std::invalid_argument("unknown boundary preset: " + name);
}

void write_field(const std::string& base_path, const DiscreteField& u) {
  nlohmann::json header = {
      {"schema_version", kSchemaVersion},
      {"nx", u.grid.nx},
      {"ny", u.grid.ny},
      {"h", u.grid.h},
      {"origin", {u.grid.origin[0], u.grid.origin[1]}},
      {"m", u.m},
      {"values", std::filesystem::path(base_path).filename().string() + ".csv"}};
  write_report(base_path + ".json", header);

  std::ofstream out(base_path + ".csv", std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + base_path + ".csv");
  out << "i,j,x,y";
  for (int c = 0; c < u.m; ++c) out << ",c" << c;
  out << "\n";
  char buf[64];
  for (int j = 0; j < u.grid.nodes_y(); ++j) {
    for (int i = 0; i < u.grid.nodes_x(); ++i) {
      out << i << "," << j;
      std::snprintf(buf, sizeof buf, ",%.17g,%.17g", u.grid.x(i), u.grid.y(j));
      out << buf;
      for (int c = 0; c < u.m; ++c) {
        std::snprintf(buf, sizeof buf, ",%.17g", u.at(c, i, j));
        out << buf;
      }
      out << "\n";
    }
  }
}

DiscreteField read_field(const std::string& base_path) {
  std::ifstream hdr(base_path + ".json");
  if (!hdr) throw std::runtime_error("cannot open " + base_path + ".json");
  nlohmann::json j;
  hdr >> j;
  Grid g(j.at("nx").get<int>(), j.at("ny").get<int>(), j.at("h").get<double>(),
         Eigen::Vector2d(j.at("origin")[0].get<double>(), j.at("origin")[1].get<double>()));
  DiscreteField u(g, j.at("m").get<int>());

  std::ifstream in(base_path + ".csv");
  if (!in) throw std::runtime_error("cannot open " + base_path + ".csv");
  std::string line;
  std::getline(in, line);  // header row
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> cells;
    size_t pos = 0;
    while (pos <= line.size()) {
      const size_t next = line.find(',', pos);
      const std::string tok =
          line.substr(pos, next == std::string::npos ? next : next - pos);
      cells.push_back(std::strtod(tok.c_str(), nullptr));
      if (next == std::string::npos) break;
      pos = next + 1;
    }
    if (cells.size() != static_cast<size_t>(4 + u.m))
      throw std::runtime_error("field csv: bad column count");
    const int i = static_cast<int>(cells[0]);
    const int jj = static_cast<int>(cells[1]);
    for (int c = 0; c < u.m; ++c) u.at(c, i, jj) = cells[4 + c];
  }
  return u;
}

}  // namespace mintool::mms
