#include "doctest.h"

#include <cmath>
#include <map>
#include <queue>
#include <utility>
#include <vector>

#include "crossflow/stability.hpp"

using namespace crossflow;

namespace {

double band_distance(double r, double b) {
    CurveBand band = instability_band(r);
    if (!band.defined) return std::fabs(b); // degenerate band pinches to a point
    return std::min(std::fabs(b - band.lo), std::fabs(b - band.hi));
}

} // namespace

TEST_SUITE("region_map") {

TEST_CASE("closed-form curves and the symbol scan agree away from the band edge") {
    const int res = 128;
    const double eps = 0.005;
    std::vector<RegionMapRow> curve = raster_region_map(res, eps, RegionMethod::Curve);
    std::vector<RegionMapRow> scan = raster_region_map(res, eps, RegionMethod::Scan);
    REQUIRE(curve.size() == scan.size());
    size_t disagreements = 0;
    double worst_edge_distance = 0;
    for (size_t idx = 0; idx < curve.size(); ++idx) {
        REQUIRE(curve[idx].r == scan[idx].r);
        REQUIRE(curve[idx].b == scan[idx].b);
        if (curve[idx].in_D != scan[idx].in_D) {
            ++disagreements;
            worst_edge_distance = std::max(
                worst_edge_distance, band_distance(curve[idx].r, curve[idx].b));
        }
    }
    CHECK(disagreements < 0.02 * curve.size());
    // every disagreement hugs the predicted band boundary
    CHECK(worst_edge_distance < 0.05);
}

TEST_CASE("loss of hyperbolicity implies scan instability on a fine raster") {
    // the elliptic set sits strictly inside the unstable band, so at small
    // eps every elliptic node must also be flagged unstable by the scan
    std::vector<RegionMapRow> rows = raster_region_map(256, 0.005, RegionMethod::Scan);
    size_t elliptic = 0;
    for (const auto& row : rows)
        if (!row.hyperbolic) {
            ++elliptic;
            CHECK(row.in_D);
            CHECK(row.max_growth > 1e-12);
        }
    CHECK(elliptic > 0);
}

TEST_CASE("the elliptic set is one connected blob") {
    const int res = 128;
    std::vector<RegionMapRow> rows = raster_region_map(res, 0.0, RegionMethod::Scan);
    std::map<std::pair<int, int>, size_t> index;
    for (size_t idx = 0; idx < rows.size(); ++idx) {
        int i = static_cast<int>(std::lround(rows[idx].r * res - 0.5));
        int j = static_cast<int>(std::lround(rows[idx].b * res - 0.5));
        index[{i, j}] = idx;
    }
    std::pair<int, int> start{-1, -1};
    size_t elliptic_total = 0;
    for (const auto& [key, idx] : index)
        if (!rows[idx].hyperbolic) {
            ++elliptic_total;
            if (start.first < 0) start = key;
        }
    REQUIRE(elliptic_total > 0);
    std::map<std::pair<int, int>, bool> seen;
    std::queue<std::pair<int, int>> frontier;
    frontier.push(start);
    seen[start] = true;
    size_t reached = 0;
    while (!frontier.empty()) {
        auto [i, j] = frontier.front();
        frontier.pop();
        ++reached;
        const int di[] = {1, -1, 0, 0};
        const int dj[] = {0, 0, 1, -1};
        for (int d = 0; d < 4; ++d) {
            std::pair<int, int> nb{i + di[d], j + dj[d]};
            auto it = index.find(nb);
            if (it == index.end() || seen.count(nb) || rows[it->second].hyperbolic)
                continue;
            seen[nb] = true;
            frontier.push(nb);
        }
    }
    CHECK(reached == elliptic_total);
}

TEST_CASE("both classifications are symmetric under the species swap") {
    const int res = 64;
    for (RegionMethod method : {RegionMethod::Curve, RegionMethod::Scan}) {
        std::vector<RegionMapRow> rows = raster_region_map(res, 0.005, method);
        std::map<std::pair<long, long>, const RegionMapRow*> by_center;
        for (const auto& row : rows)
            by_center[{std::lround(row.r * 2 * res), std::lround(row.b * 2 * res)}] = &row;
        for (const auto& row : rows) {
            auto it = by_center.find({std::lround(row.b * 2 * res),
                                      std::lround(row.r * 2 * res)});
            REQUIRE(it != by_center.end());
            CHECK(it->second->in_D == row.in_D);
            CHECK(it->second->hyperbolic == row.hyperbolic);
        }
    }
}

} // TEST_SUITE("region_map")
