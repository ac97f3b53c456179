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

#ifndef HCM_MOBILITY_HPP
#define HCM_MOBILITY_HPP

#include "hcm/geometry.hpp"
#include "hcm/rng.hpp"
#include "hcm/sim_config.hpp"
#include "hcm/types.hpp"

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace hcm
{

// Complex element gain sampled on a regular azimuth grid in the body frame,
// linearly interpolated with wrap-around; elevation is collapsed
// (azimuth-only model). A single-entry grid is an isotropic element.
struct PatternGrid
{
    Eigen::VectorXcd gains; // at azimuths 0, 360/n, ..., body frame

    std::complex<double> at(double azimuth_deg) const;
    static PatternGrid isotropic();
};

struct AntennaElement
{
    Vec3 offset_m = Vec3::Zero(); // body frame
    double boresight_yaw_rad = 0.0;
    PatternGrid pattern = PatternGrid::isotropic();
};

struct AntennaConfig
{
    std::vector<AntennaElement> elements;

    static AntennaConfig from_spec(const AntennaSpec &spec);
    int size() const { return static_cast<int>(elements.size()); }
};

// Piecewise-linear waypoint track against the global reference time.
// Queries clamp-hold outside the waypoint span (velocity zero there); at a
// waypoint the velocity of the right segment applies.
struct Trajectory
{
    std::vector<double> times;
    std::vector<Vec3> points;
    bool clamped = false; // span does not cover the simulation span

    Vec3 position_at(double t) const;
    Vec3 velocity_at(double t) const;
    void validate() const;

    static Trajectory stationary(const Vec3 &p, double duration_s);
};

struct Node
{
    int id = -1;
    std::string name;
    enum class Kind
    {
        Station,
        ScattererObject
    } kind = Kind::Station;
    Vec3 dimensions{4.5, 1.8, 1.5}; // (l, w, h)
    bool is_scatterer = false;
    bool road_bound = false;
    bool infrastructure = false;
    double speed_mps = 0.0;
    Trajectory trajectory;
    std::optional<AntennaConfig> antenna; // stations only

    Vec3 position_at(double t) const { return trajectory.position_at(t); }
    Vec3 velocity_at(double t) const { return trajectory.velocity_at(t); }
    // Body yaw from the motion heading; stationary nodes face east.
    double yaw_at(double t) const;
    void validate() const;
};

// Populates the node layer: explicit stations, randomly placed vehicles and
// scatterer objects, each with its trajectory. Randomness comes from per-node
// sub-streams of the master seed.
std::vector<Node> place_nodes(const SimConfig &config, const GeometryLayers &layers);

// Constant-speed random walk on the road graph for road-bound nodes, straight
// constant-velocity profile otherwise. Covers [0, duration].
Trajectory generate_trajectory(const Node &node, const GeometryLayers &layers, double speed_mps,
                               double duration_s, RandomStream &stream);

// Waypoint CSV exchange (columns: node_id, t, x, y, z).
void write_trajectories_csv(const std::vector<Node> &nodes, const std::string &path);
Trajectory read_trajectory_csv(const std::string &path);

} // namespace hcm

#endif
