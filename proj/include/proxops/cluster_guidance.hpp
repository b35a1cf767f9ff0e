#pragma once

#include <cstdint>
#include <vector>

#include "proxops/cw_dynamics.hpp"

namespace proxops {

struct ChiefModel;  // inspection_env.hpp

struct ClusterResult {
    std::vector<Vec3> centers;
    std::vector<int> assignment;  // point index -> center index
};

/// Lloyd iteration with k-means++ seeding. Deterministic for a given
/// (points, k, seed); stops when assignments are stable or after 50 rounds.
/// Throws std::invalid_argument for an empty point list or k out of range.
ClusterResult kmeans(const std::vector<Vec3>& points, int k, std::uint64_t seed);

/// Unit vector from the deputy toward the nearest cluster of uninspected
/// surface points; (0,0,0) when everything has been inspected. k scales with
/// the remaining work: one cluster per `points_per_cluster` uninspected
/// points, capped at `max_clusters`.
Vec3 guidance_vector(const ChiefModel& model, const std::vector<std::uint8_t>& inspected,
                     const Vec3& deputy_pos, std::uint64_t seed,
                     int points_per_cluster = 10, int max_clusters = 6);

}  // namespace proxops
