#pragma once

#include "slr/model.hpp"

#include <filesystem>
#include <iosfwd>

namespace slr {

/// Reads an ASCII PLY (vertex element with x, y, z properties) or a plain XYZ
/// file with three whitespace-separated numbers per line. Binary PLY raises
/// UnsupportedFormat; malformed input raises ParseError naming the line.
PointCloud load_point_cloud(const std::filesystem::path& path);
PointCloud parse_point_cloud(std::istream& in);

enum class CloudFormat { Xyz, AsciiPly };

/// Writes with 17 significant digits, enough to round-trip doubles.
void write_point_cloud(const PointCloud& cloud, const std::filesystem::path& path, CloudFormat format);
void write_point_cloud(const PointCloud& cloud, std::ostream& out, CloudFormat format);

}  // namespace slr
