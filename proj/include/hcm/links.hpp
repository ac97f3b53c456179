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

#ifndef HCM_LINKS_HPP
#define HCM_LINKS_HPP

#include "hcm/geometry.hpp"
#include "hcm/mobility.hpp"
#include "hcm/scenario.hpp"
#include "hcm/sim_config.hpp"
#include "hcm/types.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace hcm
{

struct TimeInterval
{
    double t_start = 0.0;
    double t_end = 0.0;
};

// One row of the time-dependent link table. Channels are generated tx -> rx;
// reciprocity is not assumed.
struct LinkRecord
{
    int link_id = -1;
    int tx_node_id = -1;
    int rx_node_id = -1;
    double band_hz = 0.0;
    int band_index = 0;
    std::string scenario_id;
    std::vector<TimeInterval> active;

    bool active_at(double t, double tol = 1e-9) const;
};

struct LinkState
{
    double t = 0.0;
    Condition los = Condition::LOS;
    double distance_3d_m = 0.0;
    Vec3 tx_pos = Vec3::Zero();
    Vec3 rx_pos = Vec3::Zero();
    Vec3 tx_vel = Vec3::Zero();
    Vec3 rx_vel = Vec3::Zero();
};

// Quantized propagation situation used for reoccurring-situation detection
// and the cluster memory.
struct SituationKey
{
    Eigen::Vector3i tx_cell = Eigen::Vector3i::Zero();
    Eigen::Vector3i rx_cell = Eigen::Vector3i::Zero();
    bool los = true;
    std::string scenario_id;

    bool operator==(const SituationKey &o) const
    {
        return tx_cell == o.tx_cell && rx_cell == o.rx_cell && los == o.los &&
               scenario_id == o.scenario_id;
    }
};

struct SituationKeyHash
{
    size_t operator()(const SituationKey &k) const;
};

// Pairs stations into links per the configured pairing spec, replicated per
// band. With max_range pairing the active intervals are the maximal spans of
// the simulation time grid where the 3-D distance stays within range; pairs
// never in range are omitted.
std::vector<LinkRecord> build_link_table(const std::vector<Node> &nodes, const SimConfig &config,
                                         const GeometryLayers &layers,
                                         const std::map<std::string, ScenarioParams> &scenarios);

// Kinematics + LOS classification at one instant. Throws QueryError when t is
// outside every active interval.
LinkState classify_link_state(const LinkRecord &record, double t, const std::vector<Node> &nodes,
                              const GeometryLayers &layers);

// Environment class at the midpoint of the initial endpoint positions, mapped
// through the configured class -> scenario table; the V2I variant applies
// when either endpoint is infrastructure (explicit role or initial height
// above the configured threshold).
std::string assign_scenario(const Node &tx, const Node &rx, const GeometryLayers &layers,
                            const SimConfig &config);

SituationKey situation_key(const LinkState &state, const LinkRecord &record, double eps_m);

void write_link_table_csv(const std::vector<LinkRecord> &table, const std::string &path);
// One row per (link, grid time): link_id, t, los, distance_m.
void write_state_trace_csv(const std::vector<LinkRecord> &table, const std::vector<Node> &nodes,
                           const GeometryLayers &layers, const SimConfig &config,
                           const std::string &path);

} // namespace hcm

#endif
