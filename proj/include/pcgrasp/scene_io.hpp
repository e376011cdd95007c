#pragma once

#include "pcgrasp/scene.hpp"

#include <filesystem>

namespace pcgrasp {

/// One "x y z" triple per line; blank lines and '#' comments are skipped.
std::vector<Vec3> read_xyz(const std::filesystem::path& path);
void write_xyz(const std::filesystem::path& path, std::span<const Vec3> points);

/// ASCII PLY; reads the x, y, z properties of the vertex element.
std::vector<Vec3> read_ply(const std::filesystem::path& path);

/// Dispatches on the extension (.ply, otherwise XYZ).
std::vector<Vec3> read_point_cloud(const std::filesystem::path& path);

/// Binary 16-bit PGM (P5, maxval 65535, big-endian samples) in millimeters,
/// plus a camera file: "fx fy cx cy" followed by the 12 values of the 3x4
/// camera-to-base matrix, row-major.
DepthImage read_depth_image(const std::filesystem::path& pgm, const std::filesystem::path& camera);
void write_depth_image(const DepthImage& image, const std::filesystem::path& pgm,
                       const std::filesystem::path& camera);

/// Text header "ox oy oz resolution nx ny nz" then nx*ny*nz little-endian
/// float32 values, x fastest.
void save_sdf(const SignedDistanceGrid& grid, const std::filesystem::path& path);
SignedDistanceGrid load_sdf(const std::filesystem::path& path);

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pcgrasp
