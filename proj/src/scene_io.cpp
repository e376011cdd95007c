#include "pcgrasp/scene_io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

namespace pcgrasp {

namespace {

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) throw FormatError("cannot read " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) throw FormatError("cannot write " + path.string());
  return out;
}

// Next whitespace-separated token of a PGM header, skipping '#' comments.
std::string pgm_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

int to_int(const std::string& s, const char* what) {
  try {
    return std::stoi(s);
  } catch (const std::exception&) {
    throw FormatError(std::string("bad PGM ") + what + ": '" + s + "'");
  }
}

}  // namespace

std::vector<Vec3> read_xyz(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<Vec3> out;
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    Vec3 p;
    if (!(ls >> p.x() >> p.y() >> p.z()) || !p.allFinite())
      throw FormatError(path.string() + ":" + std::to_string(row) + ": expected 'x y z'");
    out.push_back(p);
  }
  return out;
}

void write_xyz(const std::filesystem::path& path, std::span<const Vec3> points) {
  auto out = open_out(path);
  char buf[96];
  for (const auto& p : points) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g\n", p.x(), p.y(), p.z());
    out << buf;
  }
}

std::vector<Vec3> read_ply(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("ply", 0) != 0) throw FormatError("not a PLY file: " + path.string());
  bool ascii = false, in_vertex = false;
  std::size_t vertex_count = 0;
  std::vector<std::string> props;
  // Elements before "vertex" would need skipping; only count their rows.
  std::vector<std::pair<std::string, std::size_t>> elements;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "format") {
      std::string fmt;
      ls >> fmt;
      ascii = fmt == "ascii";
    } else if (tag == "element") {
      std::string name;
      std::size_t count = 0;
      ls >> name >> count;
      elements.emplace_back(name, count);
      in_vertex = name == "vertex";
      if (in_vertex) vertex_count = count;
    } else if (tag == "property" && in_vertex) {
      std::string type, name;
      ls >> type;
      if (type == "list") throw FormatError("list properties on vertices are not supported");
      ls >> name;
      props.push_back(name);
    } else if (tag == "end_header") {
      break;
    }
  }
  if (!ascii) throw FormatError("only ASCII PLY is supported: " + path.string());
  const auto index_of = [&](const char* name) -> int {
    auto it = std::find(props.begin(), props.end(), name);
    if (it == props.end()) throw FormatError(std::string("PLY vertex lacks property ") + name);
    return static_cast<int>(it - props.begin());
  };
  const int ix = index_of("x"), iy = index_of("y"), iz = index_of("z");
  for (const auto& [name, count] : elements) {
    if (name == "vertex") break;
    for (std::size_t i = 0; i < count; ++i) std::getline(in, line);
  }
  std::vector<Vec3> out;
  out.reserve(vertex_count);
  for (std::size_t i = 0; i < vertex_count; ++i) {
    if (!std::getline(in, line)) throw FormatError("PLY truncated: " + path.string());
    std::istringstream ls(line);
    std::vector<double> values(props.size());
    for (auto& v : values)
      if (!(ls >> v)) throw FormatError("bad PLY vertex row in " + path.string());
    out.emplace_back(values[ix], values[iy], values[iz]);
  }
  return out;
}

std::vector<Vec3> read_point_cloud(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".ply" ? read_ply(path) : read_xyz(path);
}

DepthImage read_depth_image(const std::filesystem::path& pgm, const std::filesystem::path& camera) {
  DepthImage image;
  {
    auto in = open_in(pgm, std::ios::binary);
    if (pgm_token(in) != "P5") throw FormatError("expected a binary (P5) PGM: " + pgm.string());
    image.width = to_int(pgm_token(in), "width");
    image.height = to_int(pgm_token(in), "height");
    const int maxval = to_int(pgm_token(in), "maxval");
    if (maxval <= 255) throw FormatError("depth PGM must be 16-bit: " + pgm.string());
    if (image.width <= 0 || image.height <= 0) throw FormatError("bad PGM size");
    const std::size_t n = static_cast<std::size_t>(image.width) * image.height;
    std::vector<unsigned char> raw(2 * n);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size()) throw FormatError("PGM truncated: " + pgm.string());
    image.depth.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const unsigned mm = (static_cast<unsigned>(raw[2 * i]) << 8) | raw[2 * i + 1];
      image.depth[i] = mm / 1000.0;
    }
  }
  auto in = open_in(camera);
  auto& k = image.intrinsics;
  double m[12];
  if (!(in >> k.fx >> k.fy >> k.cx >> k.cy)) throw FormatError("bad camera file: " + camera.string());
  for (double& v : m)
    if (!(in >> v)) throw FormatError("camera file needs 12 extrinsic values: " + camera.string());
  double m16[16] = {m[0], m[1], m[2], m[3], m[4], m[5], m[6], m[7], m[8], m[9], m[10], m[11], 0, 0, 0, 1};
  image.extrinsics = RigidTransform::from_matrix16(m16);
  if (image.extrinsics.orthonormality_error() > 1e-6)
    throw FormatError("camera extrinsic rotation is not orthonormal");
  image.extrinsics.rotation = orthonormalize(image.extrinsics.rotation);
  try {
    image.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("invalid camera: ") + e.what());
  }
  return image;
}

void write_depth_image(const DepthImage& image, const std::filesystem::path& pgm,
                       const std::filesystem::path& camera) {
  image.validate();
  {
    auto out = open_out(pgm, std::ios::binary);
    out << "P5\n" << image.width << ' ' << image.height << "\n65535\n";
    std::vector<unsigned char> raw(2 * image.depth.size());
    for (std::size_t i = 0; i < image.depth.size(); ++i) {
      const double d = image.depth[i];
      const double mm = std::isfinite(d) && d > 0.0 ? std::round(d * 1000.0) : 0.0;
      const auto v = static_cast<std::uint16_t>(std::clamp(mm, 0.0, 65535.0));
      raw[2 * i] = static_cast<unsigned char>(v >> 8);
      raw[2 * i + 1] = static_cast<unsigned char>(v & 0xFF);
    }
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  }
  auto out = open_out(camera);
  char buf[64];
  const auto& k = image.intrinsics;
  for (double v : {k.fx, k.fy, k.cx, k.cy}) {
    std::snprintf(buf, sizeof(buf), "%.17g ", v);
    out << buf;
  }
  out << '\n';
  double m[16];
  image.extrinsics.to_matrix16(m);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 4; ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g ", m[4 * r + c]);
      out << buf;
    }
    out << '\n';
  }
}

void save_sdf(const SignedDistanceGrid& grid, const std::filesystem::path& path) {
  auto out = open_out(path, std::ios::binary);
  char header[256];
  const auto& o = grid.origin();
  const auto& d = grid.dims();
  std::snprintf(header, sizeof(header), "%.17g %.17g %.17g %.17g %d %d %d\n", o.x(), o.y(), o.z(),
                grid.resolution(), d[0], d[1], d[2]);
  out << header;
  std::vector<unsigned char> raw(4 * grid.vertex_count());
  for (std::size_t i = 0; i < grid.vertex_count(); ++i) {
    const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(grid.values()[i]));
    for (int b = 0; b < 4; ++b) raw[4 * i + b] = static_cast<unsigned char>((bits >> (8 * b)) & 0xFF);
  }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!out) throw FormatError("write failed for " + path.string());
}

SignedDistanceGrid load_sdf(const std::filesystem::path& path) {
  auto in = open_in(path, std::ios::binary);
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty SDF file: " + path.string());
  std::istringstream hs(line);
  Vec3 origin;
  double resolution = 0.0;
  std::array<int, 3> dims{};
  if (!(hs >> origin.x() >> origin.y() >> origin.z() >> resolution >> dims[0] >> dims[1] >> dims[2]))
    throw FormatError("bad SDF header in " + path.string());
  if (!(resolution > 0.0) || dims[0] <= 0 || dims[1] <= 0 || dims[2] <= 0)
    throw FormatError("bad SDF header values in " + path.string());
  const std::size_t n = static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
  std::vector<unsigned char> raw(4 * n);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size()) throw FormatError("SDF file truncated: " + path.string());
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t bits = 0;
    for (int b = 0; b < 4; ++b) bits |= static_cast<std::uint32_t>(raw[4 * i + b]) << (8 * b);
    values[i] = std::bit_cast<float>(bits);
  }
  try {
    return SignedDistanceGrid(origin, resolution, dims, std::move(values));
  } catch (const SceneError& e) {
    throw FormatError(std::string("invalid SDF file: ") + e.what());
  }
}

}  // namespace pcgrasp
