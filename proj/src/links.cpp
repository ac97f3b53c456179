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

#include "hcm/links.hpp"

#include "hcm/configfile.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hcm
{

bool LinkRecord::active_at(double t, double tol) const
{
    for (const auto &iv : active)
        if (t >= iv.t_start - tol && t <= iv.t_end + tol)
            return true;
    return false;
}

size_t SituationKeyHash::operator()(const SituationKey &k) const
{
    std::uint64_t h = detail::fnv1a(k.scenario_id);
    auto mix = [&h](std::int64_t v) {
        h = detail::mix64(h ^ static_cast<std::uint64_t>(v));
    };
    for (int i = 0; i < 3; ++i)
        mix(k.tx_cell[i]);
    for (int i = 0; i < 3; ++i)
        mix(k.rx_cell[i]);
    mix(k.los ? 1 : 0);
    return static_cast<size_t>(h);
}

namespace
{

const Node &node_by_id(const std::vector<Node> &nodes, int id)
{
    for (const auto &n : nodes)
        if (n.id == id)
            return n;
    throw ContractError("unknown node id " + std::to_string(id));
}

std::vector<TimeInterval> max_range_intervals(const Node &a, const Node &b, double range_m,
                                              const SimConfig &config)
{
    std::vector<TimeInterval> out;
    const int steps = static_cast<int>(std::floor(config.duration_s / config.time_step_s + 1e-9));
    bool open = false;
    double start = 0.0;
    double last_in = 0.0;
    for (int k = 0; k <= steps; ++k)
    {
        const double t = k * config.time_step_s;
        const double d = (a.position_at(t) - b.position_at(t)).norm();
        if (d <= range_m)
        {
            if (!open)
            {
                open = true;
                start = t;
            }
            last_in = t;
        }
        else if (open)
        {
            out.push_back({start, last_in});
            open = false;
        }
    }
    if (open)
        out.push_back({start, last_in});
    return out;
}

} // namespace

std::string assign_scenario(const Node &tx, const Node &rx, const GeometryLayers &layers,
                            const SimConfig &config)
{
    const Vec3 mid = 0.5 * (tx.position_at(0.0) + rx.position_at(0.0));
    const EnvClass cls = environment_class_at(mid, layers);
    const auto it = config.scenario_map.find(env_class_to_string(cls));
    if (it == config.scenario_map.end())
        throw ConfigError(std::string("no scenario mapping for environment class '") +
                          env_class_to_string(cls) + "'");
    auto is_infra = [&](const Node &n) {
        return n.infrastructure || n.position_at(0.0).z() > config.infrastructure_height_m;
    };
    return (is_infra(tx) || is_infra(rx)) ? it->second.v2i : it->second.v2v;
}

std::vector<LinkRecord> build_link_table(const std::vector<Node> &nodes, const SimConfig &config,
                                         const GeometryLayers &layers,
                                         const std::map<std::string, ScenarioParams> &scenarios)
{
    const auto &pairing = config.pairing;

    std::vector<const Node *> stations;
    for (const auto &n : nodes)
        if (n.kind == Node::Kind::Station)
            stations.push_back(&n);

    std::vector<std::pair<const Node *, const Node *>> pairs;
    switch (pairing.mode)
    {
    case PairingSpec::Mode::AllPairs:
    case PairingSpec::Mode::MaxRange:
    {
        for (size_t i = 0; i < stations.size(); ++i)
            for (size_t j = i + 1; j < stations.size(); ++j)
                pairs.emplace_back(stations[i], stations[j]);
        break;
    }
    case PairingSpec::Mode::Sets:
    {
        auto find_station = [&](const std::string &name) -> const Node * {
            for (const Node *s : stations)
                if (s->name == name)
                    return s;
            throw ConfigError("pairing references unknown station '" + name + "'");
        };
        for (const auto &txn : pairing.tx_set)
            for (const auto &rxn : pairing.rx_set)
            {
                const Node *a = find_station(txn);
                const Node *b = find_station(rxn);
                if (a != b)
                    pairs.emplace_back(a, b);
            }
        break;
    }
    }

    std::vector<LinkRecord> table;
    int next_id = 0;
    for (const auto &[tx, rx] : pairs)
    {
        std::vector<TimeInterval> intervals;
        if (pairing.mode == PairingSpec::Mode::MaxRange)
        {
            intervals = max_range_intervals(*tx, *rx, pairing.max_range_m, config);
            if (intervals.empty())
                continue; // never in range
        }
        else
        {
            intervals = {{0.0, config.duration_s}};
        }
        const std::string scenario = assign_scenario(*tx, *rx, layers, config);
        if (!scenarios.count(scenario))
            throw ConfigError("scenario '" + scenario + "' is not defined in the scenario set");
        for (size_t bi = 0; bi < config.bands_hz.size(); ++bi)
        {
            LinkRecord rec;
            rec.link_id = next_id++;
            rec.tx_node_id = tx->id;
            rec.rx_node_id = rx->id;
            rec.band_hz = config.bands_hz[bi];
            rec.band_index = static_cast<int>(bi);
            rec.scenario_id = scenario;
            rec.active = intervals;
            table.push_back(std::move(rec));
        }
    }
    return table;
}

LinkState classify_link_state(const LinkRecord &record, double t, const std::vector<Node> &nodes,
                              const GeometryLayers &layers)
{
    if (!record.active_at(t))
        throw QueryError("link " + std::to_string(record.link_id) + ": t=" + std::to_string(t) +
                         " is outside every active interval");
    const Node &tx = node_by_id(nodes, record.tx_node_id);
    const Node &rx = node_by_id(nodes, record.rx_node_id);
    LinkState s;
    s.t = t;
    s.tx_pos = tx.position_at(t);
    s.rx_pos = rx.position_at(t);
    s.tx_vel = tx.velocity_at(t);
    s.rx_vel = rx.velocity_at(t);
    s.distance_3d_m = (s.tx_pos - s.rx_pos).norm();
    s.los = is_los(s.tx_pos, s.rx_pos, layers) ? Condition::LOS : Condition::NLOS;
    return s;
}

SituationKey situation_key(const LinkState &state, const LinkRecord &record, double eps_m)
{
    if (!(eps_m > 0.0))
        throw ContractError("situation_key: eps must be > 0");
    auto quantize = [eps_m](const Vec3 &p) {
        return Eigen::Vector3i(static_cast<int>(std::floor(p.x() / eps_m)),
                               static_cast<int>(std::floor(p.y() / eps_m)),
                               static_cast<int>(std::floor(p.z() / eps_m)));
    };
    SituationKey k;
    k.tx_cell = quantize(state.tx_pos);
    k.rx_cell = quantize(state.rx_pos);
    k.los = state.los == Condition::LOS;
    k.scenario_id = record.scenario_id;
    return k;
}

void write_link_table_csv(const std::vector<LinkRecord> &table, const std::string &path)
{
    std::ostringstream out;
    out << "link_id,tx,rx,band_hz,scenario,t_start,t_end\n";
    for (const auto &rec : table)
        for (const auto &iv : rec.active)
            out << rec.link_id << "," << rec.tx_node_id << "," << rec.rx_node_id << ","
                << format_double(rec.band_hz) << "," << rec.scenario_id << ","
                << format_double(iv.t_start) << "," << format_double(iv.t_end) << "\n";
    write_text_file(path, out.str());
}

void write_state_trace_csv(const std::vector<LinkRecord> &table, const std::vector<Node> &nodes,
                           const GeometryLayers &layers, const SimConfig &config,
                           const std::string &path)
{
    std::ostringstream out;
    out << "link_id,t,los,distance_m\n";
    const int steps = static_cast<int>(std::floor(config.duration_s / config.time_step_s + 1e-9));
    for (const auto &rec : table)
        for (int k = 0; k <= steps; ++k)
        {
            const double t = k * config.time_step_s;
            if (!rec.active_at(t))
                continue;
            const LinkState s = classify_link_state(rec, t, nodes, layers);
            out << rec.link_id << "," << format_double(t) << ","
                << (s.los == Condition::LOS ? "LOS" : "NLOS") << ","
                << format_double(s.distance_3d_m) << "\n";
        }
    write_text_file(path, out.str());
}

} // namespace hcm
