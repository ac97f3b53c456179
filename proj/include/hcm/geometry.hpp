// SPDX-License-Identifier: Apache-2.0
//
// hcm - hybrid geometry-based stochastic channel model for V2V/V2I simulation
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef HCM_GEOMETRY_HPP
#define HCM_GEOMETRY_HPP

#include "hcm/rng.hpp"
#include "hcm/sim_config.hpp"
#include "hcm/types.hpp"

#include <array>
#include <string>
#include <vector>

namespace hcm
{

// Closed cuboid, yaw-rotated about the vertical axis through its center.
struct Building
{
    int id = 0;
    Vec3 center = Vec3::Zero();
    Vec3 size = Vec3::Ones(); // (len_x, len_y, height)
    double yaw_rad = 0.0;
};

struct RoadSegment
{
    int id = 0;
    std::vector<Vec3> polyline; // z = 0, >= 2 points
    double width_m = 0.0;
    // ids of segments connected at polyline front (index 0) and back (index 1)
    std::array<std::vector<int>, 2> connections;

    double length() const;
    Vec3 point_at_arc(double s) const;          // clamped to [0, length]
    const Vec3 &endpoint(int end) const { return end == 0 ? polyline.front() : polyline.back(); }
};

enum class EnvClass
{
    DenseUrban,
    Urban,
    Suburban,
    Rural,
    Highway
};

EnvClass env_class_from_string(const std::string &s);
const char *env_class_to_string(EnvClass c);

struct EnvironmentGrid
{
    Vec3 origin = Vec3::Zero();
    double cell_size_m = 50.0;
    int nx = 0;
    int ny = 0;
    std::vector<EnvClass> cells; // row-major, index = iy * nx + ix

    EnvClass at(int ix, int iy) const { return cells[static_cast<size_t>(iy) * nx + ix]; }
};

// The immutable playground. Queries are pure and safe for concurrent use.
struct GeometryLayers
{
    std::vector<Building> buildings;
    std::vector<RoadSegment> roads;
    EnvironmentGrid environment;

    void validate() const; // throws ValidationError naming the offending object

    int road_index_of(int segment_id) const; // -1 when absent
    // Segments meeting segment `idx` at `end`, as (segment index, their end).
    std::vector<std::pair<int, int>> road_end_neighbors(int idx, int end) const;
};

// Manhattan-style grid of square building blocks separated by orthogonal
// roads, with a uniform environment classification.
GeometryLayers generate_random_environment(const SimConfig &config, RandomStream &stream);

// Uniform classification grid only (WINNER-parity geometry).
GeometryLayers generate_environment_only(const SimConfig &config);

// Geometry-exchange document (UTF-8 JSON, see docs/file-formats.md).
GeometryLayers import_geometry(const std::string &json_text);
GeometryLayers import_geometry_file(const std::string &path);
std::string export_geometry(const GeometryLayers &layers);

// True iff the open segment (a, b) does not pass through any building
// interior. Endpoints touching a face and grazing contacts shorter than 1e-9 m
// do not count as blocked.
bool is_los(const Vec3 &a, const Vec3 &b, const GeometryLayers &layers);

// Chord-length slab test against one building; exposed for tests.
bool segment_blocked_by_building(const Vec3 &a, const Vec3 &b, const Building &bld);

// Class of the grid cell containing p; points exactly on a cell boundary
// resolve to the lower-index cell, points outside clamp to the nearest cell.
EnvClass environment_class_at(const Vec3 &p, const GeometryLayers &layers);

struct RoadProjection
{
    int segment_id = -1;
    double arc_length_m = 0.0;
    double offset_m = 0.0; // Euclidean distance from p to the closest centerline point
    Vec3 point = Vec3::Zero();
};

// Nearest centerline point over all segments; ties resolve to the lowest
// segment id. Throws QueryError on an empty road graph.
RoadProjection project_to_road(const Vec3 &p, const GeometryLayers &layers);

} // namespace hcm

#endif
