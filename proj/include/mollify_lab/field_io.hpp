#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mollify_lab/field.hpp"

namespace mollify_lab {

/// MLF1 layout, all little-endian: "MLF1", n1, n2, n3 (u64), h (f64),
/// component count (u64), then each component's values x1-fastest as f64.
void write_mlf1(std::ostream& out, std::span<const ScalarField> components);
std::vector<ScalarField> read_mlf1(std::istream& in);

std::string to_mlf1_bytes(const VectorField3& v);
void save_field(const std::filesystem::path& path, const VectorField3& v);
/// Reads a 3-component file; format_error on anything else.
VectorField3 load_vector_field(const std::filesystem::path& path);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

}  // namespace mollify_lab
