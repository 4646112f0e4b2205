#pragma once

#include <filesystem>
#include <iosfwd>

#include "dogc/solver.hpp"

namespace dogc {

/// Binary SolverState snapshot. Layout: the 8 magic bytes "DOGCSTAT", a
/// uint32 format version, then every field in a fixed order. Integers and
/// IEEE-754 doubles are little-endian, dense matrices are stored as
/// (rows, cols) followed by the entries in row-major order, and S is stored
/// in CSR form (row pointers, column indices, values).
inline constexpr std::uint32_t kCheckpointVersion = 1;

void write_checkpoint(std::ostream& out, const SolverState& state);
SolverState read_checkpoint(std::istream& in);

void save_checkpoint(const std::filesystem::path& path, const SolverState& state);
SolverState load_checkpoint(const std::filesystem::path& path);

}  // namespace dogc
