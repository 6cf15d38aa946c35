#include "mollify_lab/field_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "mollify_lab/error.hpp"

namespace mollify_lab {

namespace {

constexpr char kMagic[4] = {'M', 'L', 'F', '1'};
constexpr std::uint64_t kMaxNodes = std::uint64_t{1} << 32;

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> b{};
  for (std::size_t n = 0; n < 8; ++n) b[n] = static_cast<char>((v >> (8 * n)) & 0xffu);
  out.write(b.data(), 8);
}

void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

std::uint64_t get_u64(std::istream& in) {
  std::array<unsigned char, 8> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), 8))
    throw LabError(ErrorCode::format_error, "MLF1 stream truncated");
  std::uint64_t v = 0;
  for (std::size_t n = 0; n < 8; ++n) v |= std::uint64_t{b[n]} << (8 * n);
  return v;
}

double get_f64(std::istream& in) { return std::bit_cast<double>(get_u64(in)); }

}  // namespace

void write_mlf1(std::ostream& out, std::span<const ScalarField> components) {
  if (components.empty()) throw LabError(ErrorCode::invalid_argument, "nothing to write");
  const HalfSpaceGrid& g = components.front().grid();
  for (const auto& c : components) require_same_grid(g, c.grid());
  out.write(kMagic, 4);
  put_u64(out, g.n1());
  put_u64(out, g.n2());
  put_u64(out, g.n3());
  put_f64(out, g.h());
  put_u64(out, components.size());
  for (const auto& c : components)
    for (double v : c.values()) put_f64(out, v);
  if (!out) throw LabError(ErrorCode::io_error, "MLF1 write failed");
}

std::vector<ScalarField> read_mlf1(std::istream& in) {
  char magic[4] = {};
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    throw LabError(ErrorCode::format_error, "missing MLF1 magic");
  const std::uint64_t n1 = get_u64(in), n2 = get_u64(in), n3 = get_u64(in);
  const double h = get_f64(in);
  const std::uint64_t ncomp = get_u64(in);
  if (n1 == 0 || n2 == 0 || n3 == 0 || n1 > kMaxNodes / n2 || n1 * n2 > kMaxNodes / n3)
    throw LabError(ErrorCode::format_error, "MLF1 node counts out of range");
  if (ncomp == 0 || ncomp > 9) throw LabError(ErrorCode::format_error, "bad MLF1 component count");
  HalfSpaceGrid grid = [&] {
    try {
      return HalfSpaceGrid(n1, n2, n3, h);
    } catch (const LabError& e) {
      throw LabError(ErrorCode::format_error, e.what());
    }
  }();
  std::vector<ScalarField> comps;
  for (std::uint64_t c = 0; c < ncomp; ++c) {
    std::vector<double> values(grid.size());
    for (double& v : values) v = get_f64(in);
    comps.emplace_back(grid, std::move(values));
  }
  if (in.peek() != std::char_traits<char>::eof())
    throw LabError(ErrorCode::format_error, "trailing bytes after MLF1 payload");
  return comps;
}

std::string to_mlf1_bytes(const VectorField3& v) {
  std::ostringstream out(std::ios::binary);
  const std::array<ScalarField, 3> comps = {v[0], v[1], v[2]};
  write_mlf1(out, comps);
  return std::move(out).str();
}

void save_field(const std::filesystem::path& path, const VectorField3& v) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LabError(ErrorCode::io_error, "cannot open " + path.string());
  const std::array<ScalarField, 3> comps = {v[0], v[1], v[2]};
  write_mlf1(out, comps);
}

VectorField3 load_vector_field(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LabError(ErrorCode::io_error, "cannot open " + path.string());
  auto comps = read_mlf1(in);
  if (comps.size() != 3)
    throw LabError(ErrorCode::format_error, "expected a 3-component field in " + path.string());
  return {std::move(comps[0]), std::move(comps[1]), std::move(comps[2])};
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

}  // namespace mollify_lab
