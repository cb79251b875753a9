#include "slr/point_cloud_io.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace slr {
namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

bool parse_double(const std::string& tok, double& value) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && ptr == last;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

struct PlyElement {
  std::string name;
  std::size_t count = 0;
  std::vector<std::string> properties;
};

PointCloud parse_ply(std::istream& in, std::size_t& line_no) {
  std::string line;
  std::vector<PlyElement> elements;
  bool saw_format = false;
  bool ended = false;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (tok[0] == "comment" || tok[0] == "obj_info") continue;
    if (tok[0] == "format") {
      if (tok.size() < 3) throw ParseError(fmt::format("line {}: malformed format line", line_no));
      if (tok[1] != "ascii")
        throw UnsupportedFormat(fmt::format("line {}: PLY format '{}' is not supported (ascii only)", line_no, tok[1]));
      saw_format = true;
    } else if (tok[0] == "element") {
      if (tok.size() != 3) throw ParseError(fmt::format("line {}: malformed element line", line_no));
      PlyElement el;
      el.name = tok[1];
      double count = 0;
      if (!parse_double(tok[2], count) || count < 0 || count != static_cast<double>(static_cast<std::size_t>(count)))
        throw ParseError(fmt::format("line {}: invalid element count '{}'", line_no, tok[2]));
      el.count = static_cast<std::size_t>(count);
      elements.push_back(std::move(el));
    } else if (tok[0] == "property") {
      if (elements.empty()) throw ParseError(fmt::format("line {}: property before any element", line_no));
      if (tok.size() < 3) throw ParseError(fmt::format("line {}: malformed property line", line_no));
      elements.back().properties.push_back(tok.back());
    } else if (tok[0] == "end_header") {
      ended = true;
      break;
    } else {
      throw ParseError(fmt::format("line {}: unexpected header keyword '{}'", line_no, tok[0]));
    }
  }
  if (!saw_format) throw ParseError("PLY header has no format line");
  if (!ended) throw ParseError("PLY header has no end_header");

  PointCloud::Points pts;
  bool have_vertices = false;
  for (const auto& el : elements) {
    if (el.name != "vertex") {
      for (std::size_t i = 0; i < el.count; ++i) {
        if (!std::getline(in, line)) throw ParseError(fmt::format("unexpected end of file in element '{}'", el.name));
        ++line_no;
      }
      continue;
    }
    int ix = -1, iy = -1, iz = -1;
    for (std::size_t p = 0; p < el.properties.size(); ++p) {
      if (el.properties[p] == "x") ix = static_cast<int>(p);
      if (el.properties[p] == "y") iy = static_cast<int>(p);
      if (el.properties[p] == "z") iz = static_cast<int>(p);
    }
    if (ix < 0 || iy < 0 || iz < 0) throw ParseError("PLY vertex element lacks x, y or z");
    pts.resize(static_cast<Index>(el.count), 3);
    for (std::size_t i = 0; i < el.count; ++i) {
      if (!std::getline(in, line)) throw ParseError(fmt::format("line {}: expected {} vertices, found {}", line_no + 1, el.count, i));
      ++line_no;
      strip_cr(line);
      const auto tok = split_ws(line);
      if (tok.size() < el.properties.size())
        throw ParseError(fmt::format("line {}: expected {} values, found {}", line_no, el.properties.size(), tok.size()));
      const int idx[3] = {ix, iy, iz};
      for (int c = 0; c < 3; ++c) {
        double v = 0;
        if (!parse_double(tok[static_cast<std::size_t>(idx[c])], v))
          throw ParseError(fmt::format("line {}: non-numeric value '{}'", line_no, tok[static_cast<std::size_t>(idx[c])]));
        pts(static_cast<Index>(i), c) = v;
      }
    }
    have_vertices = true;
  }
  if (!have_vertices) throw ParseError("PLY file has no vertex element");
  return PointCloud(std::move(pts));
}

PointCloud parse_xyz(std::istream& in, std::string first_line, std::size_t line_no) {
  std::vector<double> coords;
  auto consume = [&](std::string& line, std::size_t no) {
    strip_cr(line);
    const auto tok = split_ws(line);
    if (tok.empty() || tok[0][0] == '#') return;
    if (tok.size() != 3) throw ParseError(fmt::format("line {}: expected 3 coordinates, found {}", no, tok.size()));
    for (const auto& t : tok) {
      double v = 0;
      if (!parse_double(t, v)) throw ParseError(fmt::format("line {}: non-numeric value '{}'", no, t));
      coords.push_back(v);
    }
  };
  consume(first_line, line_no);
  std::string line;
  while (std::getline(in, line)) consume(line, ++line_no);
  PointCloud::Points pts(static_cast<Index>(coords.size() / 3), 3);
  for (Index r = 0; r < pts.rows(); ++r)
    for (Index c = 0; c < 3; ++c) pts(r, c) = coords[static_cast<std::size_t>(3 * r + c)];
  return PointCloud(std::move(pts));
}

}  // namespace

PointCloud parse_point_cloud(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (split_ws(line).empty()) continue;
    if (line == "ply") return parse_ply(in, line_no);
    return parse_xyz(in, line, line_no);
  }
  throw ParseError("empty point-cloud file");
}

PointCloud load_point_cloud(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(fmt::format("cannot open '{}'", path.string()));
  try {
    return parse_point_cloud(in);
  } catch (const UnsupportedFormat& e) {
    throw UnsupportedFormat(fmt::format("{}: {}", path.string(), e.what()));
  } catch (const ParseError& e) {
    throw ParseError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

void write_point_cloud(const PointCloud& cloud, std::ostream& out, CloudFormat format) {
  if (format == CloudFormat::AsciiPly) {
    out << "ply\nformat ascii 1.0\n"
        << "element vertex " << cloud.size() << "\n"
        << "property double x\nproperty double y\nproperty double z\nend_header\n";
  }
  for (Index r = 0; r < cloud.size(); ++r)
    out << fmt::format("{:.17g} {:.17g} {:.17g}\n", cloud.points(r, 0), cloud.points(r, 1), cloud.points(r, 2));
}

void write_point_cloud(const PointCloud& cloud, const std::filesystem::path& path, CloudFormat format) {
  std::ofstream out(path);
  if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
  write_point_cloud(cloud, out, format);
  if (!out) throw Error(fmt::format("write failed for '{}'", path.string()));
}

}  // namespace slr
