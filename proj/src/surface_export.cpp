#include "pothenot/surface_export.hpp"

#include <charconv>
#include <fstream>
#include <numbers>
#include <numeric>
#include <ostream>

#include <json.hpp>

namespace pothenot {

namespace {

int find_root(std::vector<int>& parent, int i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

void unite(std::vector<int>& parent, int i, int j) {
  i = find_root(parent, i);
  j = find_root(parent, j);
  if (i != j) parent[std::max(i, j)] = std::min(i, j);
}

// The chart is a torus, and (θ, σ) and (-θ, -σ) give the same surface point,
// so blue cells are joined across the wrap and under that involution.
int count_blue_patches(const Decomposition& dec) {
  const int n = dec.grid;
  std::vector<int> parent(static_cast<std::size_t>(n) * n);
  std::iota(parent.begin(), parent.end(), 0);
  auto blue = [&](int i, int j) { return dec.samples[static_cast<std::size_t>(i) * n + j].color == Color::Blue; };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!blue(i, j)) continue;
      const int id = i * n + j;
      const int down = ((i + 1) % n) * n + j, right = i * n + (j + 1) % n;
      if (blue((i + 1) % n, j)) unite(parent, id, down);
      if (blue(i, (j + 1) % n)) unite(parent, id, right);
      unite(parent, id, (n - 1 - i) * n + (n - 1 - j));
    }
  }
  int patches = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (blue(i, j) && find_root(parent, i * n + j) == i * n + j) ++patches;
  return patches;
}

std::string count_text(const SurfaceSample& s) {
  if (s.ambiguous) return "ambiguous";
  switch (s.count.kind) {
    case CountKind::Infinite: return "inf";
    case CountKind::Unsupported: return "unsupported";
    case CountKind::Finite: return std::to_string(s.count.count);
  }
  return "";
}

std::string region_text(const SurfaceSample& s) { return s.ambiguous ? "ambiguous" : s.label.key(); }

void rgb(Color c, int& r, int& g, int& b) {
  switch (c) {
    case Color::Blue: r = 40, g = 90, b = 220; return;
    case Color::Brown: r = 150, g = 90, b = 40; return;
    case Color::Green: r = 40, g = 170, b = 70; return;
    case Color::Gray: r = 160, g = 160, b = 160; return;
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

ExportFormat parse_format(const std::string& name) {
  if (name == "csv") return ExportFormat::Csv;
  if (name == "ply") return ExportFormat::Ply;
  if (name == "json") return ExportFormat::Json;
  throw Error(ErrorCode::InvalidGrid, "unknown export format '" + name + "'");
}

const char* color_name(Color c) {
  switch (c) {
    case Color::Blue: return "blue";
    case Color::Brown: return "brown";
    case Color::Green: return "green";
    case Color::Gray: return "gray";
  }
  return "gray";
}

Decomposition decompose(const Triangle& T, int grid, const Tolerances& tol) {
  if (grid < 16) throw Error(ErrorCode::InvalidGrid, "grid must be at least 16");
  Decomposition dec;
  dec.grid = grid;
  dec.samples.reserve(static_cast<std::size_t>(grid) * grid);
  const double h = 2 * std::numbers::pi / grid;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      SurfaceSample s;
      s.theta = -std::numbers::pi + (i + 0.5) * h;
      s.sigma = -std::numbers::pi + (j + 0.5) * h;
      s.a = param_surface(s.theta, s.sigma);
      dec.max_surface_residual = std::max(dec.max_surface_residual, std::abs(pillow_value(s.a)));
      try {
        s.label = classify(T, s.a, tol);
        s.count = count_prediction(T, s.label);
      } catch (const Error&) {
        s.ambiguous = true;
      }
      if (!s.ambiguous && s.count.kind == CountKind::Finite &&
          s.label.kind == RegionKind::SurfaceOctant) {
        s.color = s.count.count == 2 ? Color::Blue : s.count.count == 1 ? Color::Brown : Color::Green;
      } else if (!s.ambiguous && s.count.kind == CountKind::Finite && s.label.kind == RegionKind::OnEllipse) {
        s.color = s.count.count == 1 ? Color::Brown : Color::Green;
      }
      ++dec.region_histogram[region_text(s)];
      ++dec.color_histogram[s.color];
      dec.samples.push_back(std::move(s));
    }
  }
  dec.blue_patches = count_blue_patches(dec);
  return dec;
}

void write_decomposition(const Triangle& T, const Decomposition& dec, ExportFormat format,
                         std::ostream& out, const Tolerances& tol) {
  const int n = dec.grid;
  if (format == ExportFormat::Csv) {
    out << "theta,sigma,a1,a2,a3,region,count\n";
    for (const SurfaceSample& s : dec.samples) {
      out << format_double(s.theta) << ',' << format_double(s.sigma) << ',' << format_double(s.a(0)) << ','
          << format_double(s.a(1)) << ',' << format_double(s.a(2)) << ',' << region_text(s) << ','
          << count_text(s) << '\n';
    }
    return;
  }
  if (format == ExportFormat::Ply) {
    const long faces = 2L * (n - 1) * (n - 1);
    out << "ply\nformat ascii 1.0\n";
    out << "comment open (theta, sigma) grid; rows theta = +-pi excluded\n";
    out << "comment colors: blue 2, brown 1, green 0, gray special or ambiguous\n";
    out << "element vertex " << dec.samples.size() << "\n";
    out << "property double x\nproperty double y\nproperty double z\n";
    out << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
    out << "element face " << faces << "\nproperty list uchar int vertex_indices\nend_header\n";
    for (const SurfaceSample& s : dec.samples) {
      int r = 0, g = 0, b = 0;
      rgb(s.color, r, g, b);
      out << format_double(s.a(0)) << ' ' << format_double(s.a(1)) << ' ' << format_double(s.a(2)) << ' '
          << r << ' ' << g << ' ' << b << '\n';
    }
    for (int i = 0; i + 1 < n; ++i) {
      for (int j = 0; j + 1 < n; ++j) {
        const int v00 = i * n + j, v01 = i * n + j + 1, v10 = (i + 1) * n + j, v11 = (i + 1) * n + j + 1;
        out << "3 " << v00 << ' ' << v10 << ' ' << v11 << "\n3 " << v00 << ' ' << v11 << ' ' << v01 << '\n';
      }
    }
    return;
  }

  nlohmann::ordered_json doc;
  nlohmann::ordered_json header;
  header["tool"] = "pothenot";
  header["version"] = kToolVersion;
  header["sides"] = {T.sides()(0), T.sides()(1), T.sides()(2)};
  header["cosines"] = {T.cosines()(0), T.cosines()(1), T.cosines()(2)};
  header["grid"] = n;
  header["chart"] = "cell centres of the open square (-pi, pi)^2; theta, sigma = +-pi excluded";
  header["tolerances"] = {{"eps_plane", tol.eps_plane},   {"eps_point", tol.eps_point},
                          {"eps_surface", tol.eps_surface}, {"eps_angle", tol.eps_angle},
                          {"accept", tol.accept}};
  doc["header"] = header;
  nlohmann::ordered_json samples = nlohmann::ordered_json::array();
  for (const SurfaceSample& s : dec.samples) {
    nlohmann::ordered_json j;
    j["theta"] = s.theta;
    j["sigma"] = s.sigma;
    j["a"] = {s.a(0), s.a(1), s.a(2)};
    j["region"] = region_text(s);
    j["count"] = count_text(s);
    j["color"] = color_name(s.color);
    samples.push_back(std::move(j));
  }
  doc["samples"] = std::move(samples);
  out << doc.dump() << '\n';
}

Decomposition export_decomposition(const Triangle& T, int grid, ExportFormat format,
                                   const std::string& path, const Tolerances& tol) {
  Decomposition dec = decompose(T, grid, tol);
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::IoFailure, "cannot open '" + path + "' for writing");
  write_decomposition(T, dec, format, file, tol);
  file.flush();
  if (!file) throw Error(ErrorCode::IoFailure, "failed writing '" + path + "'");
  return dec;
}

}  // namespace pothenot
