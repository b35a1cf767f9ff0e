#include "proxops/cluster_guidance.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "proxops/inspection_env.hpp"
#include "proxops/rng.hpp"

namespace proxops {

namespace {

constexpr int kMaxLloydIterations = 50;

int nearest_center(const std::vector<Vec3>& centers, const Vec3& p) {
    int best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (int c = 0; c < static_cast<int>(centers.size()); ++c) {
        const double d2 = (p - centers[c]).squaredNorm();
        if (d2 < best_d2) {
            best_d2 = d2;
            best = c;
        }
    }
    return best;
}

}  // namespace

ClusterResult kmeans(const std::vector<Vec3>& points, int k, std::uint64_t seed) {
    const int n = static_cast<int>(points.size());
    if (n == 0) throw std::invalid_argument("kmeans: empty point list");
    if (k < 1 || k > n) throw std::invalid_argument("kmeans: k out of range");

    Rng rng(seed);

    // k-means++ seeding: first center uniform, then proportional to the
    // squared distance from the nearest chosen center.
    std::vector<Vec3> centers;
    centers.reserve(k);
    centers.push_back(points[rng.integer(n)]);
    std::vector<double> d2(n);
    while (static_cast<int>(centers.size()) < k) {
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const Vec3& c : centers) {
                best = std::min(best, (points[i] - c).squaredNorm());
            }
            d2[i] = best;
            total += best;
        }
        if (total <= 0.0) {
            centers.push_back(points[rng.integer(n)]);
            continue;
        }
        const double target = rng.uniform() * total;
        double acc = 0.0;
        int pick = n - 1;
        for (int i = 0; i < n; ++i) {
            acc += d2[i];
            if (acc >= target) {
                pick = i;
                break;
            }
        }
        centers.push_back(points[pick]);
    }

    ClusterResult result;
    result.centers = std::move(centers);
    result.assignment.assign(n, -1);

    for (int iter = 0; iter < kMaxLloydIterations; ++iter) {
        bool changed = false;
        for (int i = 0; i < n; ++i) {
            const int c = nearest_center(result.centers, points[i]);
            if (c != result.assignment[i]) {
                result.assignment[i] = c;
                changed = true;
            }
        }
        if (!changed) break;

        std::vector<Vec3> sums(k, Vec3::Zero());
        std::vector<int> counts(k, 0);
        for (int i = 0; i < n; ++i) {
            sums[result.assignment[i]] += points[i];
            ++counts[result.assignment[i]];
        }
        for (int c = 0; c < k; ++c) {
            // An emptied cluster keeps its previous center.
            if (counts[c] > 0) result.centers[c] = sums[c] / counts[c];
        }
    }
    return result;
}

Vec3 guidance_vector(const ChiefModel& model, const std::vector<std::uint8_t>& inspected,
                     const Vec3& deputy_pos, std::uint64_t seed,
                     int points_per_cluster, int max_clusters) {
    std::vector<Vec3> remaining;
    for (std::size_t i = 0; i < model.directions.size(); ++i) {
        if (i >= inspected.size() || !inspected[i]) {
            remaining.push_back(model.surface_point(i));
        }
    }
    if (remaining.empty()) return Vec3::Zero();

    const int u = static_cast<int>(remaining.size());
    const int k = std::min((u + points_per_cluster - 1) / points_per_cluster, max_clusters);
    const ClusterResult clusters = kmeans(remaining, k, seed);

    int best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (int c = 0; c < static_cast<int>(clusters.centers.size()); ++c) {
        const double d2 = (clusters.centers[c] - deputy_pos).squaredNorm();
        if (d2 < best_d2) {
            best_d2 = d2;
            best = c;
        }
    }
    const Vec3 to_center = clusters.centers[best] - deputy_pos;
    const double norm = to_center.norm();
    if (norm < 1e-12) return Vec3::Zero();
    return to_center / norm;
}

}  // namespace proxops
