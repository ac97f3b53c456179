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

#ifndef HCM_SIM_CONFIG_HPP
#define HCM_SIM_CONFIG_HPP

#include "hcm/types.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hcm
{

// Per-module feature switches, one per feature row of the module/feature
// matrix. The two named presets are the "WINNER" and "V2X" application
// scenarios; defaults are the V2X column.
struct FeatureFlags
{
    // channel synthesizer
    bool antenna_embedding = true;
    bool subpath_generation = true;
    // cluster generator
    bool static_scatterers = true;
    bool dynamic_scatterers = true;
    bool time_evolution = true;
    bool situation_transitions = true;
    bool cluster_memory = true;
    // LSP map generator
    bool lsp_maps = true;
    // link generator
    bool node_pairing = true;
    bool link_state_classification = true;
    bool situation_detection = true;
    // node generator
    bool nodes_with_antennas = true;
    bool nodes_without_antennas = true;
    bool simple_movement_profiles = false;
    bool node_trajectories = true;
    // geometry generator
    bool environment_sublayer = true;
    bool building_sublayer = true;
    bool road_sublayer = true;
    bool random_environment = true;
    bool user_defined_environment = true;
    bool geometry_import = true;

    static FeatureFlags v2x() { return FeatureFlags{}; }
    static FeatureFlags winner()
    {
        FeatureFlags f;
        f.dynamic_scatterers = false;
        f.situation_transitions = false;
        f.cluster_memory = false;
        f.situation_detection = false;
        f.nodes_without_antennas = false;
        f.simple_movement_profiles = true;
        f.node_trajectories = false;
        f.building_sublayer = false;
        f.road_sublayer = false;
        f.user_defined_environment = false;
        f.geometry_import = false;
        return f;
    }

    bool operator==(const FeatureFlags &) const = default;
};

struct StationSpec
{
    std::string name;
    std::optional<Vec3> position; // absent -> randomly placed
    bool road_bound = false;
    double speed_mps = 0.0;
    bool infrastructure = false;
    bool scatterer = false; // station body also acts as a scatterer
    std::string antenna = "iso";
    std::string trajectory_file; // optional waypoint CSV overriding generation
};

struct PopulationSpec
{
    int vehicle_count = 2;
    double vehicle_speed_mps = 10.0;
    std::string vehicle_antenna = "iso";
    double vehicle_antenna_height_m = 1.5;
    Vec3 vehicle_dims{4.5, 1.8, 1.5};
    int scatterer_count = 0;
    double scatterer_speed_mps = 8.0;
    Vec3 scatterer_dims{4.5, 1.8, 1.5};
    std::vector<StationSpec> stations; // explicit stations, config order
};

struct PairingSpec
{
    enum class Mode
    {
        AllPairs,
        Sets,
        MaxRange
    };
    Mode mode = Mode::AllPairs;
    double max_range_m = 200.0;
    std::vector<std::string> tx_set;
    std::vector<std::string> rx_set;
};

struct GeometrySpec
{
    enum class Source
    {
        Random,          // Manhattan grid
        Import,          // geometry-exchange document
        EnvironmentOnly  // classification grid only, no buildings/roads
    };
    Source source = Source::Random;
    std::string environment_class = "urban";
    double env_cell_size_m = 50.0;
    double block_size_m = 80.0;
    double road_width_m = 20.0;
    double building_density = 1.0;
    double building_height_m = 12.0;
    std::string import_path;
};

struct AntennaSpec
{
    std::string id = "iso";
    int elements = 1;
    double spacing_m = 0.025;       // uniform linear array along body y
    double boresight_deg = 0.0;
    std::vector<double> gains_db;   // azimuth grid from 0 deg; empty = isotropic
    std::vector<double> phases_deg; // optional, same length as gains_db
};

struct ClusterOptions
{
    double capture_radius_m = 300.0;
    double reflection_loss_db = 13.0;
    double ramp_duration_s = 0.1;
    double memory_time_s = 30.0;
    int memory_capacity = 4096;
    double situation_eps_m = 1.0;
};

struct OutputSpec
{
    bool cir_binary = true;
    bool cir_csv = false;
    bool link_table = true;
    bool state_trace = true;
    bool cluster_trace = true;
    bool lsp_maps = false;
    bool lsp_maps_csv = false;
    bool trajectories = true;
};

struct ScenarioMapEntry
{
    std::string v2v;
    std::string v2i;
};

struct SimConfig
{
    std::uint64_t seed = 1;
    double duration_s = 10.0;
    double time_step_s = 0.01;
    std::vector<double> bands_hz = {5.9e9};
    double extent_m = 500.0;
    std::string scenario_dir; // empty -> compiled-in data directory

    FeatureFlags features;
    GeometrySpec geometry;
    PopulationSpec population;
    PairingSpec pairing;
    double lsp_cell_size_m = 5.0;
    ClusterOptions clusters;
    double infrastructure_height_m = 5.0;
    // environment class -> scenarios
    std::map<std::string, ScenarioMapEntry> scenario_map = default_scenario_map();
    std::vector<AntennaSpec> antennas = {AntennaSpec{}};
    OutputSpec output;

    // True iff the flag set equals the WINNER application-scenario column.
    bool winner_parity_mode() const { return features == FeatureFlags::winner(); }

    const AntennaSpec &antenna(const std::string &id) const;

    static SimConfig from_text(const std::string &text);
    static SimConfig from_file(const std::string &path);
    std::string to_text() const;
    void validate() const; // throws ValidationError naming the field

    bool operator==(const SimConfig &other) const;

    static std::map<std::string, ScenarioMapEntry> default_scenario_map();
};

} // namespace hcm

#endif
