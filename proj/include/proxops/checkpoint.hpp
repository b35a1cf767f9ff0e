#pragma once

#include <filesystem>

#include "proxops/policy_value_net.hpp"

namespace proxops {

/// Policy checkpoint file layout (all integers little-endian):
///   bytes 0..7   magic "PXNNPOL1"
///   u32          format version (currently 1)
///   u32          head kind (0 categorical, 1 gaussian)
///   u32 x 5      shape table: obs_dim, axes, choices, hidden1, hidden2
///   u64          parameter count
///   f64 x count  parameters (IEEE-754, little-endian)
///   u32          CRC-32 (IEEE) of every preceding byte
inline constexpr char kCheckpointMagic[8] = {'P', 'X', 'N', 'N', 'P', 'O', 'L', '1'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

void save_checkpoint(const MlpParams& params, const std::filesystem::path& path);

/// Throws std::runtime_error naming the file and the expected magic bytes on
/// a missing, truncated, or corrupt checkpoint.
MlpParams load_checkpoint(const std::filesystem::path& path);

std::uint32_t crc32_ieee(const unsigned char* data, std::size_t size);

}  // namespace proxops
