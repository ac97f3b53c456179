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

#include "hcm/sim_config.hpp"

#include "hcm/configfile.hpp"

#include <algorithm>
#include <cmath>

namespace hcm
{

namespace
{

struct FlagBinding
{
    const char *key;
    bool FeatureFlags::*member;
};

constexpr FlagBinding kFlagBindings[] = {
    {"antenna_embedding", &FeatureFlags::antenna_embedding},
    {"subpath_generation", &FeatureFlags::subpath_generation},
    {"static_scatterers", &FeatureFlags::static_scatterers},
    {"dynamic_scatterers", &FeatureFlags::dynamic_scatterers},
    {"time_evolution", &FeatureFlags::time_evolution},
    {"situation_transitions", &FeatureFlags::situation_transitions},
    {"cluster_memory", &FeatureFlags::cluster_memory},
    {"lsp_maps", &FeatureFlags::lsp_maps},
    {"node_pairing", &FeatureFlags::node_pairing},
    {"link_state_classification", &FeatureFlags::link_state_classification},
    {"situation_detection", &FeatureFlags::situation_detection},
    {"nodes_with_antennas", &FeatureFlags::nodes_with_antennas},
    {"nodes_without_antennas", &FeatureFlags::nodes_without_antennas},
    {"simple_movement_profiles", &FeatureFlags::simple_movement_profiles},
    {"node_trajectories", &FeatureFlags::node_trajectories},
    {"environment_sublayer", &FeatureFlags::environment_sublayer},
    {"building_sublayer", &FeatureFlags::building_sublayer},
    {"road_sublayer", &FeatureFlags::road_sublayer},
    {"random_environment", &FeatureFlags::random_environment},
    {"user_defined_environment", &FeatureFlags::user_defined_environment},
    {"geometry_import", &FeatureFlags::geometry_import},
};

Vec3 vec3_from(const std::vector<double> &v, const std::string &what)
{
    if (v.size() != 3)
        throw ValidationError(what + ": expected [x, y, z]");
    return Vec3(v[0], v[1], v[2]);
}

std::vector<double> vec3_to(const Vec3 &v)
{
    return {v.x(), v.y(), v.z()};
}

bool vec3_eq(const Vec3 &a, const Vec3 &b)
{
    return a.x() == b.x() && a.y() == b.y() && a.z() == b.z();
}

} // namespace

std::map<std::string, ScenarioMapEntry> SimConfig::default_scenario_map()
{
    return {
        {"dense_urban", {"urban_v2v", "urban_v2i"}},
        {"urban", {"urban_v2v", "urban_v2i"}},
        {"suburban", {"urban_v2v", "urban_v2i"}},
        {"rural", {"highway_v2v", "highway_v2i"}},
        {"highway", {"highway_v2v", "highway_v2i"}},
    };
}

const AntennaSpec &SimConfig::antenna(const std::string &id) const
{
    for (const auto &a : antennas)
        if (a.id == id)
            return a;
    throw ConfigError("antenna config '" + id + "' is not defined");
}

SimConfig SimConfig::from_text(const std::string &text)
{
    ConfigDoc doc = ConfigDoc::parse(text);
    ConfigReader r(doc);
    SimConfig c;

    {
        // seed must be a non-negative integer; config integers are signed
        const std::int64_t s = r.get_int("", "seed", static_cast<std::int64_t>(c.seed));
        if (s < 0)
            throw ValidationError("seed: must be >= 0");
        c.seed = static_cast<std::uint64_t>(s);
    }
    c.duration_s = r.get_real("", "duration_s", c.duration_s);
    c.time_step_s = r.get_real("", "time_step_s", c.time_step_s);
    c.bands_hz = r.get_numbers("", "bands_hz", c.bands_hz);
    c.extent_m = r.get_real("", "extent_m", c.extent_m);
    c.scenario_dir = r.get_string("", "scenario_dir", c.scenario_dir);

    for (const auto &fb : kFlagBindings)
        c.features.*(fb.member) = r.get_bool("features", fb.key, c.features.*(fb.member));

    {
        auto &g = c.geometry;
        const std::string src = r.get_string("geometry", "source", "random");
        if (src == "random")
            g.source = GeometrySpec::Source::Random;
        else if (src == "import")
            g.source = GeometrySpec::Source::Import;
        else if (src == "environment_only")
            g.source = GeometrySpec::Source::EnvironmentOnly;
        else
            throw ValidationError("geometry.source: unknown value '" + src + "'");
        g.environment_class = r.get_string("geometry", "environment_class", g.environment_class);
        g.env_cell_size_m = r.get_real("geometry", "env_cell_size_m", g.env_cell_size_m);
        g.block_size_m = r.get_real("geometry", "block_size_m", g.block_size_m);
        g.road_width_m = r.get_real("geometry", "road_width_m", g.road_width_m);
        g.building_density = r.get_real("geometry", "building_density", g.building_density);
        g.building_height_m = r.get_real("geometry", "building_height_m", g.building_height_m);
        g.import_path = r.get_string("geometry", "import_path", g.import_path);
    }

    {
        auto &p = c.population;
        p.vehicle_count = static_cast<int>(r.get_int("population", "vehicle_count",
                                                     p.vehicle_count));
        p.vehicle_speed_mps = r.get_real("population", "vehicle_speed_mps", p.vehicle_speed_mps);
        p.vehicle_antenna = r.get_string("population", "vehicle_antenna", p.vehicle_antenna);
        p.vehicle_antenna_height_m =
            r.get_real("population", "vehicle_antenna_height_m", p.vehicle_antenna_height_m);
        if (r.has("population", "vehicle_dims_m"))
            p.vehicle_dims = vec3_from(r.get_numbers("population", "vehicle_dims_m", {}),
                                       "population.vehicle_dims_m");
        p.scatterer_count = static_cast<int>(r.get_int("population", "scatterer_count",
                                                       p.scatterer_count));
        p.scatterer_speed_mps =
            r.get_real("population", "scatterer_speed_mps", p.scatterer_speed_mps);
        if (r.has("population", "scatterer_dims_m"))
            p.scatterer_dims = vec3_from(r.get_numbers("population", "scatterer_dims_m", {}),
                                         "population.scatterer_dims_m");

        for (const auto &sec : r.sections_with_prefix("population.station"))
        {
            if (sec == "population.station")
                throw ValidationError("population.station requires a name: "
                                      "[population.station.<name>]");
            StationSpec st;
            st.name = sec.substr(std::string("population.station.").size());
            if (r.has(sec, "position"))
                st.position = vec3_from(r.get_numbers(sec, "position", {}), sec + ".position");
            st.road_bound = r.get_bool(sec, "road_bound", st.road_bound);
            st.speed_mps = r.get_real(sec, "speed_mps", st.speed_mps);
            st.infrastructure = r.get_bool(sec, "infrastructure", st.infrastructure);
            st.scatterer = r.get_bool(sec, "scatterer", st.scatterer);
            st.antenna = r.get_string(sec, "antenna", st.antenna);
            st.trajectory_file = r.get_string(sec, "trajectory_file", st.trajectory_file);
            p.stations.push_back(std::move(st));
        }
    }

    {
        auto &pr = c.pairing;
        const std::string mode = r.get_string("pairing", "mode", "all_pairs");
        if (mode == "all_pairs")
            pr.mode = PairingSpec::Mode::AllPairs;
        else if (mode == "sets")
            pr.mode = PairingSpec::Mode::Sets;
        else if (mode == "max_range")
            pr.mode = PairingSpec::Mode::MaxRange;
        else
            throw ValidationError("pairing.mode: unknown value '" + mode + "'");
        pr.max_range_m = r.get_real("pairing", "max_range_m", pr.max_range_m);
        pr.tx_set = r.get_strings("pairing", "tx", {});
        pr.rx_set = r.get_strings("pairing", "rx", {});
    }

    c.lsp_cell_size_m = r.get_real("lsp", "cell_size_m", c.lsp_cell_size_m);

    {
        auto &cl = c.clusters;
        cl.capture_radius_m = r.get_real("clusters", "capture_radius_m", cl.capture_radius_m);
        cl.reflection_loss_db =
            r.get_real("clusters", "reflection_loss_db", cl.reflection_loss_db);
        cl.ramp_duration_s = r.get_real("clusters", "ramp_duration_s", cl.ramp_duration_s);
        cl.memory_time_s = r.get_real("clusters", "memory_time_s", cl.memory_time_s);
        cl.memory_capacity =
            static_cast<int>(r.get_int("clusters", "memory_capacity", cl.memory_capacity));
        cl.situation_eps_m = r.get_real("clusters", "situation_eps_m", cl.situation_eps_m);
    }

    c.infrastructure_height_m =
        r.get_real("infrastructure", "height_threshold_m", c.infrastructure_height_m);

    c.scenario_map = default_scenario_map();
    for (const auto &sec : r.sections_with_prefix("scenario_map"))
    {
        if (sec == "scenario_map")
            continue;
        const std::string cls = sec.substr(std::string("scenario_map.").size());
        ScenarioMapEntry e;
        e.v2v = r.require_string(sec, "v2v");
        e.v2i = r.require_string(sec, "v2i");
        c.scenario_map[cls] = e;
    }

    c.antennas.clear();
    for (const auto &sec : r.sections_with_prefix("antenna"))
    {
        if (sec == "antenna")
            throw ValidationError("antenna requires a name: [antenna.<name>]");
        AntennaSpec a;
        a.id = sec.substr(std::string("antenna.").size());
        a.elements = static_cast<int>(r.get_int(sec, "elements", a.elements));
        a.spacing_m = r.get_real(sec, "spacing_m", a.spacing_m);
        a.boresight_deg = r.get_real(sec, "boresight_deg", a.boresight_deg);
        a.gains_db = r.get_numbers(sec, "gains_db", {});
        a.phases_deg = r.get_numbers(sec, "phases_deg", {});
        c.antennas.push_back(std::move(a));
    }
    if (std::none_of(c.antennas.begin(), c.antennas.end(),
                     [](const AntennaSpec &a) { return a.id == "iso"; }))
        c.antennas.insert(c.antennas.begin(), AntennaSpec{});

    {
        auto &o = c.output;
        o.cir_binary = r.get_bool("output", "cir_binary", o.cir_binary);
        o.cir_csv = r.get_bool("output", "cir_csv", o.cir_csv);
        o.link_table = r.get_bool("output", "link_table", o.link_table);
        o.state_trace = r.get_bool("output", "state_trace", o.state_trace);
        o.cluster_trace = r.get_bool("output", "cluster_trace", o.cluster_trace);
        o.lsp_maps = r.get_bool("output", "lsp_maps", o.lsp_maps);
        o.lsp_maps_csv = r.get_bool("output", "lsp_maps_csv", o.lsp_maps_csv);
        o.trajectories = r.get_bool("output", "trajectories", o.trajectories);
    }

    r.reject_unknown();
    c.validate();
    return c;
}

SimConfig SimConfig::from_file(const std::string &path)
{
    return from_text(read_text_file(path));
}

void SimConfig::validate() const
{
    if (!(time_step_s > 0.0))
        throw ValidationError("time_step_s: must be > 0");
    if (!(duration_s >= time_step_s))
        throw ValidationError("duration_s: must be >= time_step_s");
    if (bands_hz.empty())
        throw ValidationError("bands_hz: at least one band required");
    for (double b : bands_hz)
        if (!(b > 0.0))
            throw ValidationError("bands_hz: bands must be > 0");
    if (!(extent_m > 0.0))
        throw ValidationError("extent_m: must be > 0");
    if (!(geometry.env_cell_size_m > 0.0))
        throw ValidationError("geometry.env_cell_size_m: must be > 0");
    if (!(geometry.block_size_m > 0.0))
        throw ValidationError("geometry.block_size_m: must be > 0");
    if (!(geometry.road_width_m > 0.0))
        throw ValidationError("geometry.road_width_m: must be > 0");
    if (geometry.building_density < 0.0 || geometry.building_density > 1.0)
        throw ValidationError("geometry.building_density: must be in [0, 1]");
    if (!(geometry.building_height_m > 0.0))
        throw ValidationError("geometry.building_height_m: must be > 0");
    if (geometry.source == GeometrySpec::Source::Import && geometry.import_path.empty())
        throw ValidationError("geometry.import_path: required when source = import");
    if (population.vehicle_count < 0)
        throw ValidationError("population.vehicle_count: must be >= 0");
    if (population.scatterer_count < 0)
        throw ValidationError("population.scatterer_count: must be >= 0");
    if (population.vehicle_speed_mps < 0.0 || population.scatterer_speed_mps < 0.0)
        throw ValidationError("population: speeds must be >= 0");
    for (const auto &st : population.stations)
    {
        if (st.speed_mps < 0.0)
            throw ValidationError("population.station." + st.name + ".speed_mps: must be >= 0");
        if (st.position && !finite(*st.position))
            throw ValidationError("population.station." + st.name + ".position: must be finite");
    }
    if (pairing.mode == PairingSpec::Mode::MaxRange && !(pairing.max_range_m > 0.0))
        throw ValidationError("pairing.max_range_m: must be > 0");
    if (pairing.mode == PairingSpec::Mode::Sets &&
        (pairing.tx_set.empty() || pairing.rx_set.empty()))
        throw ValidationError("pairing.tx/pairing.rx: required when mode = sets");
    if (!(lsp_cell_size_m > 0.0))
        throw ValidationError("lsp.cell_size_m: must be > 0");
    if (!(clusters.capture_radius_m > 0.0))
        throw ValidationError("clusters.capture_radius_m: must be > 0");
    if (!(clusters.ramp_duration_s >= 0.0))
        throw ValidationError("clusters.ramp_duration_s: must be >= 0");
    if (!(clusters.memory_time_s > 0.0))
        throw ValidationError("clusters.memory_time_s: must be > 0");
    if (clusters.memory_capacity < 1)
        throw ValidationError("clusters.memory_capacity: must be >= 1");
    if (!(clusters.situation_eps_m > 0.0))
        throw ValidationError("clusters.situation_eps_m: must be > 0");
    for (const auto &a : antennas)
    {
        if (a.elements < 1)
            throw ValidationError("antenna." + a.id + ".elements: must be >= 1");
        if (!a.phases_deg.empty() && a.phases_deg.size() != a.gains_db.size())
            throw ValidationError("antenna." + a.id + ".phases_deg: length must match gains_db");
    }
}

std::string SimConfig::to_text() const
{
    ConfigDoc doc;
    doc.set("", "seed", ConfigValue::of_int(static_cast<std::int64_t>(seed)));
    doc.set("", "duration_s", ConfigValue::of_real(duration_s));
    doc.set("", "time_step_s", ConfigValue::of_real(time_step_s));
    doc.set("", "bands_hz", ConfigValue::of_numbers(bands_hz));
    doc.set("", "extent_m", ConfigValue::of_real(extent_m));
    if (!scenario_dir.empty())
        doc.set("", "scenario_dir", ConfigValue::of_string(scenario_dir));

    for (const auto &fb : kFlagBindings)
        doc.set("features", fb.key, ConfigValue::of_bool(features.*(fb.member)));

    const char *src = geometry.source == GeometrySpec::Source::Random ? "random"
                      : geometry.source == GeometrySpec::Source::Import ? "import"
                                                                        : "environment_only";
    doc.set("geometry", "source", ConfigValue::of_string(src));
    doc.set("geometry", "environment_class", ConfigValue::of_string(geometry.environment_class));
    doc.set("geometry", "env_cell_size_m", ConfigValue::of_real(geometry.env_cell_size_m));
    doc.set("geometry", "block_size_m", ConfigValue::of_real(geometry.block_size_m));
    doc.set("geometry", "road_width_m", ConfigValue::of_real(geometry.road_width_m));
    doc.set("geometry", "building_density", ConfigValue::of_real(geometry.building_density));
    doc.set("geometry", "building_height_m", ConfigValue::of_real(geometry.building_height_m));
    if (!geometry.import_path.empty())
        doc.set("geometry", "import_path", ConfigValue::of_string(geometry.import_path));

    doc.set("population", "vehicle_count", ConfigValue::of_int(population.vehicle_count));
    doc.set("population", "vehicle_speed_mps", ConfigValue::of_real(population.vehicle_speed_mps));
    doc.set("population", "vehicle_antenna", ConfigValue::of_string(population.vehicle_antenna));
    doc.set("population", "vehicle_antenna_height_m",
            ConfigValue::of_real(population.vehicle_antenna_height_m));
    doc.set("population", "vehicle_dims_m",
            ConfigValue::of_numbers(vec3_to(population.vehicle_dims)));
    doc.set("population", "scatterer_count", ConfigValue::of_int(population.scatterer_count));
    doc.set("population", "scatterer_speed_mps",
            ConfigValue::of_real(population.scatterer_speed_mps));
    doc.set("population", "scatterer_dims_m",
            ConfigValue::of_numbers(vec3_to(population.scatterer_dims)));
    for (const auto &st : population.stations)
    {
        const std::string sec = "population.station." + st.name;
        if (st.position)
            doc.set(sec, "position", ConfigValue::of_numbers(vec3_to(*st.position)));
        doc.set(sec, "road_bound", ConfigValue::of_bool(st.road_bound));
        doc.set(sec, "speed_mps", ConfigValue::of_real(st.speed_mps));
        doc.set(sec, "infrastructure", ConfigValue::of_bool(st.infrastructure));
        doc.set(sec, "scatterer", ConfigValue::of_bool(st.scatterer));
        doc.set(sec, "antenna", ConfigValue::of_string(st.antenna));
        if (!st.trajectory_file.empty())
            doc.set(sec, "trajectory_file", ConfigValue::of_string(st.trajectory_file));
    }

    const char *mode = pairing.mode == PairingSpec::Mode::AllPairs ? "all_pairs"
                       : pairing.mode == PairingSpec::Mode::Sets   ? "sets"
                                                                   : "max_range";
    doc.set("pairing", "mode", ConfigValue::of_string(mode));
    doc.set("pairing", "max_range_m", ConfigValue::of_real(pairing.max_range_m));
    if (!pairing.tx_set.empty())
        doc.set("pairing", "tx", ConfigValue::of_strings(pairing.tx_set));
    if (!pairing.rx_set.empty())
        doc.set("pairing", "rx", ConfigValue::of_strings(pairing.rx_set));

    doc.set("lsp", "cell_size_m", ConfigValue::of_real(lsp_cell_size_m));

    doc.set("clusters", "capture_radius_m", ConfigValue::of_real(clusters.capture_radius_m));
    doc.set("clusters", "reflection_loss_db", ConfigValue::of_real(clusters.reflection_loss_db));
    doc.set("clusters", "ramp_duration_s", ConfigValue::of_real(clusters.ramp_duration_s));
    doc.set("clusters", "memory_time_s", ConfigValue::of_real(clusters.memory_time_s));
    doc.set("clusters", "memory_capacity", ConfigValue::of_int(clusters.memory_capacity));
    doc.set("clusters", "situation_eps_m", ConfigValue::of_real(clusters.situation_eps_m));

    doc.set("infrastructure", "height_threshold_m",
            ConfigValue::of_real(infrastructure_height_m));

    for (const auto &[cls, entry] : scenario_map)
    {
        doc.set("scenario_map." + cls, "v2v", ConfigValue::of_string(entry.v2v));
        doc.set("scenario_map." + cls, "v2i", ConfigValue::of_string(entry.v2i));
    }

    for (const auto &a : antennas)
    {
        const std::string sec = "antenna." + a.id;
        doc.set(sec, "elements", ConfigValue::of_int(a.elements));
        doc.set(sec, "spacing_m", ConfigValue::of_real(a.spacing_m));
        doc.set(sec, "boresight_deg", ConfigValue::of_real(a.boresight_deg));
        if (!a.gains_db.empty())
            doc.set(sec, "gains_db", ConfigValue::of_numbers(a.gains_db));
        if (!a.phases_deg.empty())
            doc.set(sec, "phases_deg", ConfigValue::of_numbers(a.phases_deg));
    }

    doc.set("output", "cir_binary", ConfigValue::of_bool(output.cir_binary));
    doc.set("output", "cir_csv", ConfigValue::of_bool(output.cir_csv));
    doc.set("output", "link_table", ConfigValue::of_bool(output.link_table));
    doc.set("output", "state_trace", ConfigValue::of_bool(output.state_trace));
    doc.set("output", "cluster_trace", ConfigValue::of_bool(output.cluster_trace));
    doc.set("output", "lsp_maps", ConfigValue::of_bool(output.lsp_maps));
    doc.set("output", "lsp_maps_csv", ConfigValue::of_bool(output.lsp_maps_csv));
    doc.set("output", "trajectories", ConfigValue::of_bool(output.trajectories));

    return doc.serialize();
}

bool SimConfig::operator==(const SimConfig &o) const
{
    auto station_eq = [](const StationSpec &a, const StationSpec &b) {
        if (a.position.has_value() != b.position.has_value())
            return false;
        if (a.position && !vec3_eq(*a.position, *b.position))
            return false;
        return a.name == b.name && a.road_bound == b.road_bound && a.speed_mps == b.speed_mps &&
               a.infrastructure == b.infrastructure && a.scatterer == b.scatterer &&
               a.antenna == b.antenna && a.trajectory_file == b.trajectory_file;
    };
    auto antenna_eq = [](const AntennaSpec &a, const AntennaSpec &b) {
        return a.id == b.id && a.elements == b.elements && a.spacing_m == b.spacing_m &&
               a.boresight_deg == b.boresight_deg && a.gains_db == b.gains_db &&
               a.phases_deg == b.phases_deg;
    };
    if (!(seed == o.seed && duration_s == o.duration_s && time_step_s == o.time_step_s &&
          bands_hz == o.bands_hz && extent_m == o.extent_m && scenario_dir == o.scenario_dir &&
          features == o.features && lsp_cell_size_m == o.lsp_cell_size_m &&
          infrastructure_height_m == o.infrastructure_height_m))
        return false;
    const auto &g = geometry;
    const auto &h = o.geometry;
    if (!(g.source == h.source && g.environment_class == h.environment_class &&
          g.env_cell_size_m == h.env_cell_size_m && g.block_size_m == h.block_size_m &&
          g.road_width_m == h.road_width_m && g.building_density == h.building_density &&
          g.building_height_m == h.building_height_m && g.import_path == h.import_path))
        return false;
    const auto &p = population;
    const auto &q = o.population;
    if (!(p.vehicle_count == q.vehicle_count && p.vehicle_speed_mps == q.vehicle_speed_mps &&
          p.vehicle_antenna == q.vehicle_antenna &&
          p.vehicle_antenna_height_m == q.vehicle_antenna_height_m &&
          vec3_eq(p.vehicle_dims, q.vehicle_dims) && p.scatterer_count == q.scatterer_count &&
          p.scatterer_speed_mps == q.scatterer_speed_mps &&
          vec3_eq(p.scatterer_dims, q.scatterer_dims) &&
          p.stations.size() == q.stations.size()))
        return false;
    for (size_t i = 0; i < p.stations.size(); ++i)
        if (!station_eq(p.stations[i], q.stations[i]))
            return false;
    if (!(pairing.mode == o.pairing.mode && pairing.max_range_m == o.pairing.max_range_m &&
          pairing.tx_set == o.pairing.tx_set && pairing.rx_set == o.pairing.rx_set))
        return false;
    const auto &cl = clusters;
    const auto &cm = o.clusters;
    if (!(cl.capture_radius_m == cm.capture_radius_m &&
          cl.reflection_loss_db == cm.reflection_loss_db &&
          cl.ramp_duration_s == cm.ramp_duration_s && cl.memory_time_s == cm.memory_time_s &&
          cl.memory_capacity == cm.memory_capacity && cl.situation_eps_m == cm.situation_eps_m))
        return false;
    if (scenario_map.size() != o.scenario_map.size())
        return false;
    for (const auto &[k, v] : scenario_map)
    {
        auto it = o.scenario_map.find(k);
        if (it == o.scenario_map.end() || it->second.v2v != v.v2v || it->second.v2i != v.v2i)
            return false;
    }
    if (antennas.size() != o.antennas.size())
        return false;
    for (size_t i = 0; i < antennas.size(); ++i)
        if (!antenna_eq(antennas[i], o.antennas[i]))
            return false;
    const auto &a = output;
    const auto &b = o.output;
    return a.cir_binary == b.cir_binary && a.cir_csv == b.cir_csv &&
           a.link_table == b.link_table && a.state_trace == b.state_trace &&
           a.cluster_trace == b.cluster_trace && a.lsp_maps == b.lsp_maps &&
           a.lsp_maps_csv == b.lsp_maps_csv && a.trajectories == b.trajectories;
}

} // namespace hcm
