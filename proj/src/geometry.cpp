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

#include "hcm/geometry.hpp"

#include "hcm/configfile.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace hcm
{

using nlohmann::json;

namespace
{
// Grazing contacts with an in-building chord shorter than this do not block.
constexpr double kPenetrationTol = 1e-9;
// Road endpoints closer than this are the same junction.
constexpr double kJunctionTol = 1e-6;
} // namespace

double RoadSegment::length() const
{
    double l = 0.0;
    for (size_t i = 1; i < polyline.size(); ++i)
        l += (polyline[i] - polyline[i - 1]).norm();
    return l;
}

Vec3 RoadSegment::point_at_arc(double s) const
{
    if (s <= 0.0)
        return polyline.front();
    for (size_t i = 1; i < polyline.size(); ++i)
    {
        const double piece = (polyline[i] - polyline[i - 1]).norm();
        if (s <= piece)
            return polyline[i - 1] + (polyline[i] - polyline[i - 1]) * (s / piece);
        s -= piece;
    }
    return polyline.back();
}

EnvClass env_class_from_string(const std::string &s)
{
    if (s == "dense_urban")
        return EnvClass::DenseUrban;
    if (s == "urban")
        return EnvClass::Urban;
    if (s == "suburban")
        return EnvClass::Suburban;
    if (s == "rural")
        return EnvClass::Rural;
    if (s == "highway")
        return EnvClass::Highway;
    throw ValidationError("unknown environment class '" + s + "'");
}

const char *env_class_to_string(EnvClass c)
{
    switch (c)
    {
    case EnvClass::DenseUrban:
        return "dense_urban";
    case EnvClass::Urban:
        return "urban";
    case EnvClass::Suburban:
        return "suburban";
    case EnvClass::Rural:
        return "rural";
    case EnvClass::Highway:
        return "highway";
    }
    return "urban";
}

void GeometryLayers::validate() const
{
    for (const auto &b : buildings)
    {
        if (!(b.size.x() > 0.0 && b.size.y() > 0.0 && b.size.z() > 0.0))
            throw ValidationError("building " + std::to_string(b.id) +
                                  ": size components must be > 0");
        if (!finite(b.center) || !std::isfinite(b.yaw_rad))
            throw ValidationError("building " + std::to_string(b.id) + ": non-finite fields");
    }
    for (const auto &r : roads)
    {
        if (r.polyline.size() < 2)
            throw ValidationError("road " + std::to_string(r.id) +
                                  ": polyline needs at least 2 points");
        for (size_t i = 1; i < r.polyline.size(); ++i)
            if ((r.polyline[i] - r.polyline[i - 1]).norm() == 0.0)
                throw ValidationError("road " + std::to_string(r.id) +
                                      ": consecutive polyline points must be distinct");
        if (!(r.width_m > 0.0))
            throw ValidationError("road " + std::to_string(r.id) + ": width must be > 0");
    }
    // connectivity references: in-range and symmetric
    for (const auto &r : roads)
        for (int end = 0; end < 2; ++end)
            for (int other_id : r.connections[end])
            {
                const int oi = road_index_of(other_id);
                if (oi < 0)
                    throw ValidationError("road " + std::to_string(r.id) +
                                          ": connection to unknown segment " +
                                          std::to_string(other_id));
                const auto &other = roads[static_cast<size_t>(oi)];
                const bool back_ref =
                    std::find(other.connections[0].begin(), other.connections[0].end(), r.id) !=
                        other.connections[0].end() ||
                    std::find(other.connections[1].begin(), other.connections[1].end(), r.id) !=
                        other.connections[1].end();
                if (!back_ref)
                    throw ValidationError("road " + std::to_string(r.id) + ": connection to " +
                                          std::to_string(other_id) + " is not symmetric");
            }
    if (environment.nx < 1 || environment.ny < 1)
        throw ValidationError("environment: grid must be at least 1x1");
    if (!(environment.cell_size_m > 0.0))
        throw ValidationError("environment: cell_size must be > 0");
    if (environment.cells.size() !=
        static_cast<size_t>(environment.nx) * static_cast<size_t>(environment.ny))
        throw ValidationError("environment: cell count does not match nx*ny");
}

int GeometryLayers::road_index_of(int segment_id) const
{
    for (size_t i = 0; i < roads.size(); ++i)
        if (roads[i].id == segment_id)
            return static_cast<int>(i);
    return -1;
}

std::vector<std::pair<int, int>> GeometryLayers::road_end_neighbors(int idx, int end) const
{
    std::vector<std::pair<int, int>> out;
    const auto &seg = roads[static_cast<size_t>(idx)];
    const Vec3 junction = seg.endpoint(end);
    for (int other_id : seg.connections[static_cast<size_t>(end)])
    {
        const int oi = road_index_of(other_id);
        if (oi < 0)
            continue;
        const auto &other = roads[static_cast<size_t>(oi)];
        for (int oe = 0; oe < 2; ++oe)
            if ((other.endpoint(oe) - junction).norm() < kJunctionTol)
            {
                out.emplace_back(oi, oe);
                break;
            }
    }
    return out;
}

GeometryLayers generate_environment_only(const SimConfig &config)
{
    GeometryLayers gl;
    const double cell = config.geometry.env_cell_size_m;
    const int n = std::max(1, static_cast<int>(std::ceil(config.extent_m / cell)));
    gl.environment.origin = Vec3::Zero();
    gl.environment.cell_size_m = cell;
    gl.environment.nx = n;
    gl.environment.ny = n;
    gl.environment.cells.assign(static_cast<size_t>(n) * n,
                                env_class_from_string(config.geometry.environment_class));
    gl.validate();
    return gl;
}

GeometryLayers generate_random_environment(const SimConfig &config, RandomStream &stream)
{
    const double extent = config.extent_m;
    const double block = config.geometry.block_size_m;
    const double road_w = config.geometry.road_width_m;

    // n blocks per axis: n*block + (n-1)*road must fit the extent.
    const int n = static_cast<int>(std::floor((extent + road_w) / (block + road_w)));
    if (n < 1)
        throw GenerationError("playground extent " + std::to_string(extent) +
                              " m cannot fit one " + std::to_string(block) + " m block");

    GeometryLayers gl = generate_environment_only(config);

    const double period = block + road_w;
    const double used = n * block + (n - 1) * road_w;
    const double margin = (extent - used) / 2.0;

    // building blocks
    int next_building = 0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
        {
            const double u = stream.uniform();
            if (u >= config.geometry.building_density)
                continue;
            Building b;
            b.id = next_building++;
            const double cx = margin + i * period + block / 2.0;
            const double cy = margin + j * period + block / 2.0;
            const double h = config.geometry.building_height_m;
            b.center = Vec3(cx, cy, h / 2.0);
            b.size = Vec3(block, block, h);
            b.yaw_rad = 0.0;
            gl.buildings.push_back(b);
        }

    // roads between blocks: n-1 lines per axis, spanning the outermost
    // crossings and split at every intersection
    const int n_lines = n - 1;
    if (n_lines >= 2)
    {
        std::vector<double> lines(static_cast<size_t>(n_lines));
        for (int i = 0; i < n_lines; ++i)
            lines[static_cast<size_t>(i)] = margin + block + road_w / 2.0 + i * period;

        int next_id = 0;
        // vertical segments: ids laid out as line-major
        for (int i = 0; i < n_lines; ++i)
            for (int k = 0; k + 1 < n_lines; ++k)
            {
                RoadSegment s;
                s.id = next_id++;
                s.polyline = {Vec3(lines[i], lines[k], 0.0), Vec3(lines[i], lines[k + 1], 0.0)};
                s.width_m = road_w;
                gl.roads.push_back(std::move(s));
            }
        // horizontal segments
        for (int j = 0; j < n_lines; ++j)
            for (int k = 0; k + 1 < n_lines; ++k)
            {
                RoadSegment s;
                s.id = next_id++;
                s.polyline = {Vec3(lines[k], lines[j], 0.0), Vec3(lines[k + 1], lines[j], 0.0)};
                s.width_m = road_w;
                gl.roads.push_back(std::move(s));
            }

        // connectivity by endpoint matching
        for (size_t a = 0; a < gl.roads.size(); ++a)
            for (size_t b = a + 1; b < gl.roads.size(); ++b)
                for (int ea = 0; ea < 2; ++ea)
                    for (int eb = 0; eb < 2; ++eb)
                        if ((gl.roads[a].endpoint(ea) - gl.roads[b].endpoint(eb)).norm() <
                            kJunctionTol)
                        {
                            gl.roads[a].connections[static_cast<size_t>(ea)].push_back(
                                gl.roads[b].id);
                            gl.roads[b].connections[static_cast<size_t>(eb)].push_back(
                                gl.roads[a].id);
                        }
    }

    gl.validate();
    return gl;
}

bool segment_blocked_by_building(const Vec3 &a, const Vec3 &b, const Building &bld)
{
    // transform to the building's local frame
    const double c = std::cos(-bld.yaw_rad);
    const double s = std::sin(-bld.yaw_rad);
    auto to_local = [&](const Vec3 &p) {
        const Vec3 q = p - bld.center;
        return Vec3(c * q.x() - s * q.y(), s * q.x() + c * q.y(), q.z());
    };
    const Vec3 p0 = to_local(a);
    const Vec3 p1 = to_local(b);
    const Vec3 d = p1 - p0;
    const Vec3 half = bld.size / 2.0;

    double t0 = 0.0;
    double t1 = 1.0;
    for (int axis = 0; axis < 3; ++axis)
    {
        const double o = p0[axis];
        const double dd = d[axis];
        const double h = half[axis];
        if (std::abs(dd) < 1e-15)
        {
            if (o < -h || o > h)
                return false;
            continue;
        }
        double ta = (-h - o) / dd;
        double tb = (h - o) / dd;
        if (ta > tb)
            std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
        if (t0 >= t1)
            return false;
    }
    const double chord = (t1 - t0) * d.norm();
    return chord > kPenetrationTol;
}

bool is_los(const Vec3 &a, const Vec3 &b, const GeometryLayers &layers)
{
    for (const auto &bld : layers.buildings)
        if (segment_blocked_by_building(a, b, bld))
            return false;
    return true;
}

EnvClass environment_class_at(const Vec3 &p, const GeometryLayers &layers)
{
    const auto &g = layers.environment;
    auto cell_index = [&](double coord, double origin, int count) {
        // cells cover (i*s, (i+1)*s]: boundary points resolve to the lower
        // index; outside points clamp to the nearest edge cell
        const double u = (coord - origin) / g.cell_size_m;
        int i = static_cast<int>(std::ceil(u)) - 1;
        return std::clamp(i, 0, count - 1);
    };
    const int ix = cell_index(p.x(), g.origin.x(), g.nx);
    const int iy = cell_index(p.y(), g.origin.y(), g.ny);
    return g.at(ix, iy);
}

RoadProjection project_to_road(const Vec3 &p, const GeometryLayers &layers)
{
    if (layers.roads.empty())
        throw QueryError("project_to_road: road graph is empty");

    RoadProjection best;
    double best_dist = std::numeric_limits<double>::infinity();
    for (const auto &seg : layers.roads)
    {
        double arc_base = 0.0;
        for (size_t i = 1; i < seg.polyline.size(); ++i)
        {
            const Vec3 &a = seg.polyline[i - 1];
            const Vec3 &b = seg.polyline[i];
            const Vec3 ab = b - a;
            const double len2 = ab.squaredNorm();
            double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
            t = std::clamp(t, 0.0, 1.0);
            const Vec3 q = a + t * ab;
            const double dist = (p - q).norm();
            if (dist < best_dist) // strict: ties keep the lowest id (ascending scan)
            {
                best_dist = dist;
                best.segment_id = seg.id;
                best.arc_length_m = arc_base + t * std::sqrt(len2);
                best.offset_m = dist;
                best.point = q;
            }
            arc_base += std::sqrt(len2);
        }
    }
    return best;
}

namespace
{

Vec3 json_vec3(const json &j, const std::string &what)
{
    if (!j.is_array() || j.size() != 3)
        throw ParseError(what + ": expected [x, y, z]");
    return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

} // namespace

GeometryLayers import_geometry(const std::string &json_text)
{
    json j;
    try
    {
        j = json::parse(json_text);
    }
    catch (const json::parse_error &e)
    {
        throw ParseError(std::string("geometry document: ") + e.what());
    }

    GeometryLayers gl;
    if (j.contains("buildings"))
        for (const auto &jb : j["buildings"])
        {
            Building b;
            b.id = jb.at("id").get<int>();
            b.center = json_vec3(jb.at("center"), "building center");
            b.size = json_vec3(jb.at("size"), "building size");
            b.yaw_rad = jb.value("yaw_rad", 0.0);
            gl.buildings.push_back(b);
        }
    if (j.contains("roads"))
        for (const auto &jr : j["roads"])
        {
            RoadSegment r;
            r.id = jr.at("id").get<int>();
            for (const auto &jp : jr.at("polyline"))
                r.polyline.push_back(json_vec3(jp, "road polyline point"));
            r.width_m = jr.at("width_m").get<double>();
            if (jr.contains("connections"))
            {
                const auto &jc = jr["connections"];
                if (!jc.is_array() || jc.size() != 2)
                    throw ParseError("road " + std::to_string(r.id) +
                                     ": connections must be [[...],[...]]");
                for (int e = 0; e < 2; ++e)
                    for (const auto &id : jc[e])
                        r.connections[static_cast<size_t>(e)].push_back(id.get<int>());
            }
            gl.roads.push_back(std::move(r));
        }
    if (j.contains("environment"))
    {
        const auto &je = j["environment"];
        auto &g = gl.environment;
        const auto &jo = je.at("origin");
        if (!jo.is_array() || jo.size() < 2)
            throw ParseError("environment origin: expected [x, y]");
        g.origin = Vec3(jo[0].get<double>(), jo[1].get<double>(), 0.0);
        g.cell_size_m = je.at("cell_size_m").get<double>();
        g.nx = je.at("nx").get<int>();
        g.ny = je.at("ny").get<int>();
        for (const auto &jc : je.at("classes"))
            g.cells.push_back(env_class_from_string(jc.get<std::string>()));
    }
    else
    {
        // default single-cell grid so classification queries stay total
        gl.environment.nx = gl.environment.ny = 1;
        gl.environment.cell_size_m = 1e9;
        gl.environment.cells = {EnvClass::Urban};
    }

    gl.validate();
    return gl;
}

GeometryLayers import_geometry_file(const std::string &path)
{
    return import_geometry(read_text_file(path));
}

std::string export_geometry(const GeometryLayers &layers)
{
    json j;
    j["buildings"] = json::array();
    for (const auto &b : layers.buildings)
        j["buildings"].push_back({{"id", b.id},
                                  {"center", {b.center.x(), b.center.y(), b.center.z()}},
                                  {"size", {b.size.x(), b.size.y(), b.size.z()}},
                                  {"yaw_rad", b.yaw_rad}});
    j["roads"] = json::array();
    for (const auto &r : layers.roads)
    {
        json jp = json::array();
        for (const auto &p : r.polyline)
            jp.push_back({p.x(), p.y(), p.z()});
        j["roads"].push_back({{"id", r.id},
                              {"polyline", jp},
                              {"width_m", r.width_m},
                              {"connections", {r.connections[0], r.connections[1]}}});
    }
    const auto &g = layers.environment;
    json jc = json::array();
    for (EnvClass c : g.cells)
        jc.push_back(env_class_to_string(c));
    j["environment"] = {{"origin", {g.origin.x(), g.origin.y()}},
                        {"cell_size_m", g.cell_size_m},
                        {"nx", g.nx},
                        {"ny", g.ny},
                        {"classes", jc}};
    return j.dump(2);
}

} // namespace hcm
