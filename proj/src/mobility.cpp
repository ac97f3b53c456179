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

#include "hcm/mobility.hpp"

#include "hcm/configfile.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace hcm
{

std::complex<double> PatternGrid::at(double azimuth_deg) const
{
    const int n = static_cast<int>(gains.size());
    if (n == 1)
        return gains[0];
    const double step = 360.0 / n;
    const double a = wrap_deg_360(azimuth_deg) / step;
    const int i0 = static_cast<int>(std::floor(a)) % n;
    const int i1 = (i0 + 1) % n;
    const double f = a - std::floor(a);
    return gains[i0] * (1.0 - f) + gains[i1] * f;
}

PatternGrid PatternGrid::isotropic()
{
    PatternGrid g;
    g.gains = Eigen::VectorXcd::Ones(1);
    return g;
}

AntennaConfig AntennaConfig::from_spec(const AntennaSpec &spec)
{
    PatternGrid pattern = PatternGrid::isotropic();
    if (!spec.gains_db.empty())
    {
        const int n = static_cast<int>(spec.gains_db.size());
        pattern.gains.resize(n);
        for (int i = 0; i < n; ++i)
        {
            const double mag = std::pow(10.0, spec.gains_db[static_cast<size_t>(i)] / 20.0);
            const double ph = spec.phases_deg.empty()
                                  ? 0.0
                                  : deg2rad(spec.phases_deg[static_cast<size_t>(i)]);
            pattern.gains[i] = std::polar(mag, ph);
        }
    }
    AntennaConfig cfg;
    // uniform linear array along body y, centered on the reference point
    const double mid = (spec.elements - 1) / 2.0;
    for (int e = 0; e < spec.elements; ++e)
    {
        AntennaElement el;
        el.offset_m = Vec3(0.0, (e - mid) * spec.spacing_m, 0.0);
        el.boresight_yaw_rad = deg2rad(spec.boresight_deg);
        el.pattern = pattern;
        cfg.elements.push_back(std::move(el));
    }
    return cfg;
}

void Trajectory::validate() const
{
    if (times.empty() || times.size() != points.size())
        throw ValidationError("trajectory: needs matching non-empty times/points");
    for (size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw ValidationError("trajectory: timestamps must be strictly increasing");
    for (const auto &p : points)
        if (!finite(p))
            throw ValidationError("trajectory: non-finite waypoint");
}

Trajectory Trajectory::stationary(const Vec3 &p, double duration_s)
{
    Trajectory t;
    t.times = {0.0, std::max(duration_s, 1e-9)};
    t.points = {p, p};
    return t;
}

Vec3 Trajectory::position_at(double t) const
{
    if (t <= times.front())
        return points.front();
    if (t >= times.back())
        return points.back();
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const size_t i = static_cast<size_t>(it - times.begin()) - 1;
    const double f = (t - times[i]) / (times[i + 1] - times[i]);
    return points[i] + f * (points[i + 1] - points[i]);
}

Vec3 Trajectory::velocity_at(double t) const
{
    if (t < times.front() || t >= times.back())
        return Vec3::Zero();
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const size_t i = static_cast<size_t>(it - times.begin()) - 1;
    return (points[i + 1] - points[i]) / (times[i + 1] - times[i]);
}

double Node::yaw_at(double t) const
{
    const Vec3 v = velocity_at(t);
    if (v.head<2>().norm() < 1e-9)
        return 0.0;
    return std::atan2(v.y(), v.x());
}

void Node::validate() const
{
    if (!(dimensions.x() > 0.0 && dimensions.y() > 0.0 && dimensions.z() > 0.0))
        throw ValidationError("node " + name + ": dimensions must be positive");
    if (kind == Kind::ScattererObject && antenna.has_value())
        throw ValidationError("node " + name + ": scatterer objects cannot carry antennas");
    trajectory.validate();
}

namespace
{

bool inside_building_footprint(const Vec3 &p, const Building &b)
{
    const double c = std::cos(-b.yaw_rad);
    const double s = std::sin(-b.yaw_rad);
    const Vec3 q = p - b.center;
    const double lx = c * q.x() - s * q.y();
    const double ly = s * q.x() + c * q.y();
    return std::abs(lx) <= b.size.x() / 2.0 && std::abs(ly) <= b.size.y() / 2.0;
}

Vec3 sample_free_position(const SimConfig &config, const GeometryLayers &layers, double height,
                          RandomStream &stream)
{
    for (int attempt = 0; attempt < 100000; ++attempt)
    {
        Vec3 p(stream.uniform(0.0, config.extent_m), stream.uniform(0.0, config.extent_m), height);
        bool blocked = false;
        for (const auto &b : layers.buildings)
            if (inside_building_footprint(p, b))
            {
                blocked = true;
                break;
            }
        if (!blocked)
            return p;
    }
    throw GenerationError("node placement: rejection sampling exhausted "
                          "(buildings cover the playground?)");
}

Vec3 sample_road_position(const SimConfig &config, const GeometryLayers &layers, double height,
                          RandomStream &stream)
{
    if (layers.roads.empty())
        throw GenerationError("node placement: road-bound node requested with an empty road "
                              "graph");
    Vec3 p(stream.uniform(0.0, config.extent_m), stream.uniform(0.0, config.extent_m), 0.0);
    const RoadProjection proj = project_to_road(p, layers);
    return Vec3(proj.point.x(), proj.point.y(), height);
}

// Appends waypoints while travelling [arc_from -> arc_to] on seg, starting at
// time t; emits interior polyline vertices so interpolation stays on the
// centerline. Returns the arrival time.
double emit_walk(const RoadSegment &seg, double arc_from, double arc_to, double t, double speed,
                 double height, std::vector<double> &times, std::vector<Vec3> &points)
{
    const double dir = arc_to >= arc_from ? 1.0 : -1.0;
    // arc positions of interior vertices
    std::vector<double> stops;
    double acc = 0.0;
    for (size_t i = 1; i + 1 < seg.polyline.size(); ++i)
    {
        acc += (seg.polyline[i] - seg.polyline[i - 1]).norm();
        if ((dir > 0 && acc > arc_from && acc < arc_to) ||
            (dir < 0 && acc < arc_from && acc > arc_to))
            stops.push_back(acc);
    }
    if (dir < 0)
        std::reverse(stops.begin(), stops.end());
    stops.push_back(arc_to);

    double arc = arc_from;
    for (double next : stops)
    {
        const double dt = std::abs(next - arc) / speed;
        if (dt <= 0.0)
        {
            arc = next;
            continue;
        }
        t += dt;
        Vec3 p = seg.point_at_arc(next);
        p.z() = height;
        times.push_back(t);
        points.push_back(p);
        arc = next;
    }
    return t;
}

Trajectory road_walk(const Node &node, const GeometryLayers &layers, double speed,
                     double duration, RandomStream &stream)
{
    const Vec3 start = node.trajectory.points.front();
    const double height = start.z();
    const RoadProjection proj = project_to_road(start, layers);
    int seg_idx = layers.road_index_of(proj.segment_id);

    Trajectory out;
    Vec3 p0 = proj.point;
    p0.z() = height;
    out.times.push_back(0.0);
    out.points.push_back(p0);

    double arc = proj.arc_length_m;
    int dir = stream.uniform() < 0.5 ? 1 : -1; // initial heading along the segment
    double t = 0.0;
    while (t < duration)
    {
        const RoadSegment &seg = layers.roads[static_cast<size_t>(seg_idx)];
        const double len = seg.length();
        const double target = dir > 0 ? len : 0.0;
        const double remaining_arc = std::abs(target - arc);
        const double remaining_time = duration - t;
        if (remaining_arc >= speed * remaining_time)
        {
            // finish within this segment
            const double arc_final = arc + dir * speed * remaining_time;
            emit_walk(seg, arc, arc_final, t, speed, height, out.times, out.points);
            t = duration;
            break;
        }
        if (remaining_arc > 0.0)
            t = emit_walk(seg, arc, target, t, speed, height, out.times, out.points);

        // junction: choose among connected segments, never reversing into the
        // segment we came from unless it is a dead end
        const int end_reached = dir > 0 ? 1 : 0;
        auto neighbors = layers.road_end_neighbors(seg_idx, end_reached);
        if (neighbors.empty())
        {
            dir = -dir; // dead end: reverse
            arc = target;
            continue;
        }
        const auto [next_idx, next_end] =
            neighbors[static_cast<size_t>(stream.uniform_index(neighbors.size()))];
        seg_idx = next_idx;
        const RoadSegment &next_seg = layers.roads[static_cast<size_t>(next_idx)];
        arc = next_end == 0 ? 0.0 : next_seg.length();
        dir = next_end == 0 ? 1 : -1;
    }
    // pin the final timestamp against floating-point accumulation error
    if (std::abs(out.times.back() - duration) < 1e-9)
        out.times.back() = duration;
    else if (out.times.back() < duration)
    {
        out.times.push_back(duration);
        out.points.push_back(out.points.back());
    }
    return out;
}

} // namespace

Trajectory generate_trajectory(const Node &node, const GeometryLayers &layers, double speed_mps,
                               double duration_s, RandomStream &stream)
{
    const Vec3 start = node.trajectory.points.front();
    if (speed_mps <= 0.0)
        return Trajectory::stationary(start, duration_s);

    if (node.road_bound && !layers.roads.empty())
        return road_walk(node, layers, speed_mps, duration_s, stream);

    // simple movement profile: straight constant-velocity path
    const double heading = stream.uniform(0.0, 2.0 * kPi);
    const Vec3 v(speed_mps * std::cos(heading), speed_mps * std::sin(heading), 0.0);
    Trajectory out;
    out.times = {0.0, duration_s};
    out.points = {start, start + v * duration_s};
    return out;
}

std::vector<Node> place_nodes(const SimConfig &config, const GeometryLayers &layers)
{
    const auto &pop = config.population;
    std::vector<Node> nodes;
    int next_id = 0;

    const bool roads_usable = !layers.roads.empty() && config.features.road_sublayer;
    const bool walk_roads = config.features.node_trajectories &&
                            !config.features.simple_movement_profiles && roads_usable;

    auto make_trajectory = [&](Node &n) {
        if (config.features.node_trajectories || config.features.simple_movement_profiles)
        {
            auto stream = substream(config.seed, "nodes.traj", static_cast<uint64_t>(n.id));
            n.trajectory =
                generate_trajectory(n, layers, n.speed_mps, config.duration_s, stream);
        }
        else
        {
            n.trajectory = Trajectory::stationary(n.trajectory.points.front(),
                                                  config.duration_s);
        }
    };

    for (const auto &spec : pop.stations)
    {
        Node n;
        n.id = next_id++;
        n.name = spec.name;
        n.kind = Node::Kind::Station;
        n.dimensions = pop.vehicle_dims;
        n.is_scatterer = spec.scatterer;
        n.road_bound = spec.road_bound && walk_roads;
        n.infrastructure = spec.infrastructure;
        n.speed_mps = spec.speed_mps;
        if (config.features.antenna_embedding)
            n.antenna = AntennaConfig::from_spec(config.antenna(spec.antenna));
        else
            n.antenna = AntennaConfig::from_spec(AntennaSpec{});

        auto stream = substream(config.seed, "nodes.place", static_cast<uint64_t>(n.id));
        Vec3 start;
        if (spec.position)
            start = *spec.position;
        else if (spec.road_bound && roads_usable)
            start = sample_road_position(config, layers, pop.vehicle_antenna_height_m, stream);
        else if (spec.road_bound && !roads_usable && !config.winner_parity_mode())
            throw GenerationError("station " + spec.name +
                                  ": road_bound placement requested with an empty road graph");
        else
            start = sample_free_position(config, layers, pop.vehicle_antenna_height_m, stream);
        n.trajectory = Trajectory::stationary(start, config.duration_s);

        if (!spec.trajectory_file.empty())
        {
            n.trajectory = read_trajectory_csv(spec.trajectory_file);
            if (n.trajectory.times.front() > 0.0 ||
                n.trajectory.times.back() < config.duration_s)
                n.trajectory.clamped = true;
        }
        else if (spec.speed_mps > 0.0)
        {
            make_trajectory(n);
        }
        n.validate();
        nodes.push_back(std::move(n));
    }

    for (int v = 0; v < pop.vehicle_count; ++v)
    {
        Node n;
        n.id = next_id++;
        n.name = "veh" + std::to_string(v);
        n.kind = Node::Kind::Station;
        n.dimensions = pop.vehicle_dims;
        n.is_scatterer = false;
        n.road_bound = walk_roads;
        n.speed_mps = pop.vehicle_speed_mps;
        if (config.features.antenna_embedding)
            n.antenna = AntennaConfig::from_spec(config.antenna(pop.vehicle_antenna));
        else
            n.antenna = AntennaConfig::from_spec(AntennaSpec{});

        auto stream = substream(config.seed, "nodes.place", static_cast<uint64_t>(n.id));
        const Vec3 start = roads_usable
                               ? sample_road_position(config, layers,
                                                      pop.vehicle_antenna_height_m, stream)
                               : sample_free_position(config, layers,
                                                      pop.vehicle_antenna_height_m, stream);
        n.trajectory = Trajectory::stationary(start, config.duration_s);
        make_trajectory(n);
        n.validate();
        nodes.push_back(std::move(n));
    }

    if (config.features.nodes_without_antennas)
        for (int s = 0; s < pop.scatterer_count; ++s)
        {
            Node n;
            n.id = next_id++;
            n.name = "sc" + std::to_string(s);
            n.kind = Node::Kind::ScattererObject;
            n.dimensions = pop.scatterer_dims;
            n.is_scatterer = true;
            n.road_bound = walk_roads;
            n.speed_mps = pop.scatterer_speed_mps;

            auto stream = substream(config.seed, "nodes.place", static_cast<uint64_t>(n.id));
            const double h = pop.scatterer_dims.z() / 2.0;
            const Vec3 start = roads_usable ? sample_road_position(config, layers, h, stream)
                                            : sample_free_position(config, layers, h, stream);
            n.trajectory = Trajectory::stationary(start, config.duration_s);
            make_trajectory(n);
            n.validate();
            nodes.push_back(std::move(n));
        }

    return nodes;
}

void write_trajectories_csv(const std::vector<Node> &nodes, const std::string &path)
{
    std::ostringstream out;
    out << "node_id,t,x,y,z\n";
    for (const auto &n : nodes)
        for (size_t i = 0; i < n.trajectory.times.size(); ++i)
        {
            const Vec3 &p = n.trajectory.points[i];
            out << n.id << "," << format_double(n.trajectory.times[i]) << ","
                << format_double(p.x()) << "," << format_double(p.y()) << ","
                << format_double(p.z()) << "\n";
        }
    write_text_file(path, out.str());
}

Trajectory read_trajectory_csv(const std::string &path)
{
    const std::string text = read_text_file(path);
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw ParseError(path + ": empty trajectory CSV");
    Trajectory t;
    int node_id = std::numeric_limits<int>::min();
    while (std::getline(in, line))
    {
        if (line.empty())
            continue;
        std::istringstream ls(line);
        std::string tok;
        std::vector<std::string> cols;
        while (std::getline(ls, tok, ','))
            cols.push_back(tok);
        if (cols.size() != 5)
            throw ParseError(path + ": expected 5 columns: node_id,t,x,y,z");
        const int id = std::stoi(cols[0]);
        if (node_id == std::numeric_limits<int>::min())
            node_id = id;
        else if (id != node_id)
            throw ParseError(path + ": trajectory CSV must contain a single node id");
        t.times.push_back(std::stod(cols[1]));
        t.points.emplace_back(std::stod(cols[2]), std::stod(cols[3]), std::stod(cols[4]));
    }
    t.validate();
    return t;
}

} // namespace hcm
