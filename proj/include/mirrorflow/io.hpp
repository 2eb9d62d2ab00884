#pragma once

#include <filesystem>
#include <string>

#include "mirrorflow/field.hpp"

namespace mirrorflow {

/// Binary field dump, little-endian throughout:
///   magic "MFLD" (4 bytes)
///   version       u32   (currently 1)
///   geometry tag  u8    (0 = PeriodicCube, 1 = HalfCube, 2 = Slab)
///   n1, n2, n3    u32 each
///   data          3 * n1*n2*n3 float64, component-major, x1-fastest
/// Geometry fixes the coordinates: cube (-1,1)^3, half-cube
/// (-1,1)^2 x [-1/2,1/2], slab (-1,1)^2 x [-1/2,1/2] symmetric about x3 = 0
/// (the only serializable slab; n3 odd).
void write_mfld(const std::filesystem::path& path, const VectorField& f);
VectorField read_mfld(const std::filesystem::path& path);

/// Write any report's to_csv output to a file.
template <typename Report>
void write_csv(const std::filesystem::path& path, const Report& report);

} // namespace mirrorflow
