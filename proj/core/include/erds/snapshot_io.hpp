#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "erds/cylinder.hpp"
#include "erds/trajectory.hpp"

namespace erds {

/// Magic bytes opening every field snapshot.
inline constexpr std::string_view kSnapshotMagic = "ERDSFLD1";

/// Field snapshot layout (all numbers little-endian float64):
///   8-byte magic | dim | n | L | time | n^N values in row-major order.
void write_field_snapshot(std::ostream& os, const Field& field, double time);
TimedField read_field_snapshot(std::istream& is);

/// A frame file holds one snapshot per species, back to back.
void write_frame_file(const std::filesystem::path& path, const SpeciesState& state);
SpeciesState read_frame_file(const std::filesystem::path& path);

}  // namespace erds
