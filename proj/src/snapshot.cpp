#include "rodsed/snapshot.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "rodsed/error.hpp"

namespace rodsed {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

void put(std::ostream& out, double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.write(buf, end - buf);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io, "cannot write '" + path + "'");
  return out;
}

json params_json(const ModelParams& p) { return {{"D_r", p.D_r}, {"delta", p.delta}, {"Re", p.Re}}; }

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw Error(ErrorKind::io, "write failed for '" + path + "'");
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> f;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    f.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (!f.empty() && !f.back().empty() && f.back().back() == '\r') f.back().pop_back();
  return f;
}

double to_real(const std::string& s, const std::string& path, int line) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || s.empty())
    throw Error(ErrorKind::io, path + ":" + std::to_string(line) + ": bad number '" + s + "'");
  return v;
}

struct CsvFile {
  json header;
  std::vector<std::vector<std::string>> rows;
  std::string path;
};

CsvFile read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open '" + path + "'");
  CsvFile f;
  f.path = path;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0)
    throw Error(ErrorKind::io, path + ": missing '# {...}' header line");
  try {
    f.header = json::parse(line.substr(2));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::io, path + ": bad header: " + e.what());
  }
  if (!std::getline(in, line)) throw Error(ErrorKind::io, path + ": missing column row");
  while (std::getline(in, line))
    if (!line.empty() && line != "\r") f.rows.push_back(split_fields(line));
  return f;
}

template <class T>
T field(const json& j, const char* key, const std::string& path) {
  if (!j.contains(key)) throw Error(ErrorKind::io, path + ": header lacks '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::io, path + ": header field '" + key + "': " + e.what());
  }
}

ModelParams read_params(const json& h, const std::string& path) {
  const json p = field<json>(h, "params", path);
  return {field<double>(p, "D_r", path), field<double>(p, "delta", path), field<double>(p, "Re", path)};
}

void moment_columns(std::ostream& out, int max_order) {
  out << "rho";
  for (int l = 1; l <= max_order; ++l) out << ",C" << l << ",S" << l;
}

}  // namespace

std::string velocity_path(const std::string& path) {
  fs::path p(path);
  const std::string stem = p.extension() == ".csv" ? p.stem().string() : p.filename().string();
  return (p.parent_path() / (stem + "_vel.csv")).string();
}

std::string write_snapshot(const std::string& path, double time, const ModelParams& params, const MomentField1D& q,
                           const StaggeredVelocity1D& w, const IndicatorFields* indicator) {
  const Grid1D& g = q.grid();
  const int kmax = q.resolution().max_order();
  const std::string vpath = velocity_path(path);
  json regions = json::array();
  for (const Region& r : q.resolution().regions()) regions.push_back({{"a", r.a}, {"b", r.b}, {"order", r.order}});
  const json grid = {{"x_left", g.x_left}, {"x_right", g.x_right}, {"cells", g.cells}};
  json h = {{"format", "rodsed-snapshot"}, {"dim", 1},           {"time", time},
            {"grid", grid},                {"regions", regions}, {"max_order", kmax},
            {"params", params_json(params)}, {"velocity_file", fs::path(vpath).filename().string()},
            {"indicator", indicator != nullptr}};

  std::ofstream out = open_out(path);
  out << "# " << h.dump() << "\nx,";
  moment_columns(out, kmax);
  if (indicator) out << ",R_2N+2,R_2N+3";
  out << '\n';
  const std::size_t width = moment_count(kmax);
  for (int i = 0; i < g.cells; ++i) {
    put(out, g.center(i));
    const auto c = q.cell(i);
    for (std::size_t k = 0; k < width; ++k) {
      out << ',';
      if (k < c.size()) put(out, c[k]);
    }
    if (indicator) {
      out << ',';
      put(out, indicator->r_even[i]);
      out << ',';
      put(out, indicator->r_odd[i]);
    }
    out << '\n';
  }
  finish(out, path);

  std::ofstream vout = open_out(vpath);
  vout << "# " << json{{"format", "rodsed-velocity"}, {"dim", 1}, {"time", time}, {"grid", grid}}.dump() << "\nx,w\n";
  for (int i = 0; i < g.cells; ++i) {
    put(vout, w.node_x(i));
    vout << ',';
    put(vout, w.w[i]);
    vout << '\n';
  }
  finish(vout, vpath);
  return vpath;
}

std::string write_snapshot(const std::string& path, double time, const ModelParams& params, const MomentField2D& q,
                           const StaggeredVelocity2D& v, const IndicatorFields* indicator) {
  const Grid2D& g = q.grid();
  const std::string vpath = velocity_path(path);
  const json grid = {{"x_left", g.x_left}, {"x_right", g.x_right}, {"nx", g.nx},
                     {"z_left", g.z_left}, {"z_right", g.z_right}, {"nz", g.nz}};
  json h = {{"format", "rodsed-snapshot"},
            {"dim", 2},
            {"time", time},
            {"grid", grid},
            {"regions", json::array({{{"order", q.order()}}})},
            {"max_order", q.order()},
            {"params", params_json(params)},
            {"velocity_file", fs::path(vpath).filename().string()},
            {"indicator", indicator != nullptr}};

  std::ofstream out = open_out(path);
  out << "# " << h.dump() << "\nx,z,";
  moment_columns(out, q.order());
  if (indicator) out << ",R_2N+2,R_2N+3";
  out << '\n';
  for (int j = 0; j < g.nz; ++j)
    for (int i = 0; i < g.nx; ++i) {
      put(out, g.x_center(i));
      out << ',';
      put(out, g.z_center(j));
      for (double x : q.cell(i, j)) {
        out << ',';
        put(out, x);
      }
      if (indicator) {
        out << ',';
        put(out, indicator->r_even[g.index(i, j)]);
        out << ',';
        put(out, indicator->r_odd[g.index(i, j)]);
      }
      out << '\n';
    }
  finish(out, path);

  std::ofstream vout = open_out(vpath);
  vout << "# " << json{{"format", "rodsed-velocity"}, {"dim", 2}, {"time", time}, {"grid", grid}}.dump()
       << "\nx,z,U,W\n";
  for (int j = 0; j < g.nz; ++j)
    for (int i = 0; i < g.nx; ++i) {
      put(vout, g.x_center(i));
      vout << ',';
      put(vout, g.z_center(j));
      vout << ',';
      put(vout, v.U[g.index(i, j)]);
      vout << ',';
      put(vout, v.W[g.index(i, j)]);
      vout << '\n';
    }
  finish(vout, vpath);
  return vpath;
}

Snapshot read_snapshot(const std::string& path) {
  const CsvFile f = read_csv(path);
  const json& h = f.header;
  if (field<std::string>(h, "format", path) != "rodsed-snapshot") throw Error(ErrorKind::io, path + ": not a snapshot");
  const int dim = field<int>(h, "dim", path);
  const double time = field<double>(h, "time", path);
  const ModelParams params = read_params(h, path);
  const json grid = field<json>(h, "grid", path);
  const std::string vpath =
      (fs::path(path).parent_path() / field<std::string>(h, "velocity_file", path)).string();
  const CsvFile vf = read_csv(vpath);

  try {
    if (dim == 1) {
      const Grid1D g{field<double>(grid, "x_left", path), field<double>(grid, "x_right", path),
                     field<int>(grid, "cells", path)};
      std::vector<Region> regions;
      for (const json& r : field<json>(h, "regions", path))
        regions.push_back({field<double>(r, "a", path), field<double>(r, "b", path), field<int>(r, "order", path)});
      MomentField1D q(g, ResolutionMap(std::move(regions)));
      if (static_cast<int>(f.rows.size()) != g.cells) throw Error(ErrorKind::io, path + ": row count differs from grid");
      for (int i = 0; i < g.cells; ++i) {
        const auto& row = f.rows[i];
        const auto c = q.cell(i);
        if (row.size() < c.size() + 1) throw Error(ErrorKind::io, path + ": short row " + std::to_string(i + 3));
        for (std::size_t k = 0; k < c.size(); ++k) c[k] = to_real(row[k + 1], path, i + 3);
      }
      StaggeredVelocity1D w(g);
      if (static_cast<int>(vf.rows.size()) != g.cells) throw Error(ErrorKind::io, vpath + ": row count differs from grid");
      for (int i = 0; i < g.cells; ++i) {
        if (vf.rows[i].size() < 2) throw Error(ErrorKind::io, vpath + ": short row " + std::to_string(i + 3));
        w.w[i] = to_real(vf.rows[i][1], vpath, i + 3);
      }
      return Snapshot1D{time, params, std::move(q), std::move(w)};
    }
    if (dim == 2) {
      const Grid2D g{field<double>(grid, "x_left", path), field<double>(grid, "x_right", path),
                     field<int>(grid, "nx", path),     field<double>(grid, "z_left", path),
                     field<double>(grid, "z_right", path), field<int>(grid, "nz", path)};
      g.validate();
      MomentField2D q(g, field<int>(h, "max_order", path));
      if (static_cast<int>(f.rows.size()) != g.cells()) throw Error(ErrorKind::io, path + ": row count differs from grid");
      StaggeredVelocity2D v(g);
      if (static_cast<int>(vf.rows.size()) != g.cells()) throw Error(ErrorKind::io, vpath + ": row count differs from grid");
      for (int c = 0; c < g.cells(); ++c) {
        const auto& row = f.rows[c];
        if (row.size() < q.moments() + 2) throw Error(ErrorKind::io, path + ": short row " + std::to_string(c + 3));
        for (std::size_t k = 0; k < q.moments(); ++k) q.cell(c)[k] = to_real(row[k + 2], path, c + 3);
        if (vf.rows[c].size() < 4) throw Error(ErrorKind::io, vpath + ": short row " + std::to_string(c + 3));
        v.U[c] = to_real(vf.rows[c][2], vpath, c + 3);
        v.W[c] = to_real(vf.rows[c][3], vpath, c + 3);
      }
      return Snapshot2D{time, params, std::move(q), std::move(v)};
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::io) throw;
    throw Error(ErrorKind::io, path + ": " + e.what());
  }
  throw Error(ErrorKind::io, path + ": unsupported dim " + std::to_string(dim));
}

}  // namespace rodsed
