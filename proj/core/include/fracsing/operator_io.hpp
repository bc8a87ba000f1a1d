#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>

#include "fracsing/green_operator.hpp"

namespace fracsing {

/// On-disk layout: the 8-byte magic "FRACSOP1", a little-endian uint64 header
/// length, a JSON header (grid spec, dim, alpha, n, checksum), then the n*n
/// row-major matrix followed by the n-entry Dirac column, all as float64.
inline constexpr char kOperatorMagic[9] = "FRACSOP1";

/// FNV-1a (64 bit) over raw bytes.
std::uint64_t fnv1a64(std::span<const unsigned char> bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

/// Writes the operator to `path` atomically (temporary file + rename).
void save_operator(const GreenOperator& op, const std::filesystem::path& path);

/// Loads an operator written by save_operator; verifies magic and checksum.
GreenOperator load_operator(const std::filesystem::path& path);

/// File name that identifies (grid spec, dim, alpha) inside a cache directory.
std::string cache_key(const GridSpec& spec, int dim, double alpha);

/// Directory named by FRACSING_CACHE, if set and non-empty.
std::optional<std::filesystem::path> cache_directory_from_env();

/// Loads the operator from `cache_dir` when a valid entry exists, otherwise
/// assembles it and stores it there.  Without a cache directory it just assembles.
GreenOperator cached_assemble(const GridPtr& grid, const ProblemParams& params,
                              const AssemblyOptions& opts,
                              const std::optional<std::filesystem::path>& cache_dir);

}  // namespace fracsing
