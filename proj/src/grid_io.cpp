#include "qfo/grid_io.hpp"

#include "qfo/errors.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace qfo {
namespace {

std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string with_precision(double v, int digits) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, digits);
  return std::string(buf, res.ptr);
}

void put_f32(std::string& out, float v) {
  auto bits = std::bit_cast<std::uint32_t>(v);
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xffu));
}

float get_f32(const unsigned char* p) {
  std::uint32_t bits = 0;
  for (int b = 0; b < 4; ++b) bits |= static_cast<std::uint32_t>(p[b]) << (8 * b);
  return std::bit_cast<float>(bits);
}

void write_bytes(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw IoError("write failed: " + path.string());
}

} // namespace

std::string grid_header(const Grid2D& g) {
  const std::string dims = "QFO1 " + std::to_string(g.nx) + " " + std::to_string(g.ny);
  std::string h = dims + " " + shortest(g.dx) + " " + shortest(g.dy) + " " + shortest(g.x0) + " " + shortest(g.y0);
  // Round-trip digits when they fit, otherwise the most that do.
  for (int digits = 16; h.size() > 63 && digits >= 6; --digits)
    h = dims + " " + with_precision(g.dx, digits) + " " + with_precision(g.dy, digits) + " " +
        with_precision(g.x0, digits) + " " + with_precision(g.y0, digits);
  if (h.size() > 63) throw IoError("grid header does not fit in 64 bytes");
  h.resize(63, ' ');
  h.push_back('\n');
  return h;
}

void write_grid(const std::filesystem::path& path, const SpatialField2D& f) {
  std::string bytes = grid_header(f.grid);
  bytes.reserve(64 + 8 * f.values.size());
  for (const auto& z : f.values) {
    put_f32(bytes, static_cast<float>(z.real()));
    put_f32(bytes, static_cast<float>(z.imag()));
  }
  write_bytes(path, bytes);
}

void write_grid(const std::filesystem::path& path, const Grid2D& grid, const std::vector<double>& values) {
  if (values.size() != grid.size()) throw InvalidArgument("value count does not match grid");
  std::string bytes = grid_header(grid);
  for (double v : values) {
    put_f32(bytes, static_cast<float>(v));
    put_f32(bytes, 0.0f);
  }
  write_bytes(path, bytes);
}

SpatialField2D read_grid(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  std::string header(64, '\0');
  is.read(header.data(), 64);
  if (is.gcount() != 64 || header.compare(0, 5, "QFO1 ") != 0) throw IoError("not a QFO1 file: " + path.string());
  std::istringstream hs(header.substr(5));
  Grid2D g;
  if (!(hs >> g.nx >> g.ny >> g.dx >> g.dy >> g.x0 >> g.y0)) throw IoError("malformed QFO1 header in " + path.string());
  g.validate();
  std::vector<unsigned char> raw(8 * g.size());
  is.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(is.gcount()) != raw.size()) throw IoError("truncated QFO1 payload in " + path.string());
  SpatialField2D f(g);
  for (std::size_t i = 0; i < g.size(); ++i) f.values[i] = {get_f32(&raw[8 * i]), get_f32(&raw[8 * i + 4])};
  return f;
}

void write_csv(const std::filesystem::path& path, const Samples1D& s, const std::string& coord_name) {
  std::string out = coord_name + ",re,im,abs2\n";
  for (int i = 0; i < s.n; ++i) {
    const cplx v = s.values[i];
    out += shortest(s.coord(i)) + "," + shortest(v.real()) + "," + shortest(v.imag()) + "," + shortest(std::norm(v)) + "\n";
  }
  write_bytes(path, out);
}

void write_table_csv(const std::filesystem::path& path, const std::vector<std::string>& names,
                     const std::vector<std::vector<double>>& columns) {
  if (names.size() != columns.size() || columns.empty()) throw InvalidArgument("one name per column required");
  const std::size_t rows = columns.front().size();
  std::string out;
  for (std::size_t c = 0; c < names.size(); ++c) out += (c ? "," : "") + names[c];
  out += "\n";
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (columns[c].size() != rows) throw InvalidArgument("columns differ in length");
      out += (c ? "," : "") + shortest(columns[c][r]);
    }
    out += "\n";
  }
  write_bytes(path, out);
}

} // namespace qfo
