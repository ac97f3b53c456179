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

#include "hcm/clusters.hpp"

#include "hcm/configfile.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <mutex>
#include <sstream>

namespace hcm
{

namespace
{
// Dynamic cluster ids start here so they stay stable across steps and never
// collide with static draw ids.
constexpr int kDynamicIdBase = 1000000;
} // namespace

const char *cluster_kind_name(ClusterKind k)
{
    switch (k)
    {
    case ClusterKind::Static:
        return "static";
    case ClusterKind::Dynamic:
        return "dynamic";
    case ClusterKind::Direct:
        return "direct";
    }
    return "static";
}

double Cluster::ramp_weight(double t) const
{
    if (t < birth_t)
        return 0.0;
    double w = 1.0;
    if (fades_in && ramp_duration_s > 0.0)
        w = std::min(1.0, (t - birth_t) / ramp_duration_s);
    if (t >= death_t)
    {
        if (ramp_duration_s <= 0.0)
            return 0.0;
        w = std::min(w, std::max(0.0, 1.0 - (t - death_t) / ramp_duration_s));
    }
    return w;
}

std::vector<double> ClusterSet::effective_weights(double t_query) const
{
    std::vector<double> q(clusters.size(), 0.0);
    double total = 0.0;
    for (size_t i = 0; i < clusters.size(); ++i)
    {
        const double r = clusters[i].ramp_weight(t_query);
        q[i] = clusters[i].power * r;
        total += q[i];
    }
    if (total <= 0.0)
        return q;
    for (auto &w : q)
        w /= total;
    return q;
}

std::vector<double> cluster_delays_from_uniforms(std::span<const double> u, double r_tau,
                                                 double ds_s)
{
    std::vector<double> delays;
    delays.reserve(u.size());
    for (double ui : u)
        delays.push_back(-r_tau * ds_s * std::log(ui));
    std::sort(delays.begin(), delays.end());
    const double min_tau = delays.empty() ? 0.0 : delays.front();
    for (auto &d : delays)
        d -= min_tau;
    return delays;
}

std::vector<double> cluster_powers(std::span<const double> delays_s, double r_tau, double ds_s,
                                   std::span<const double> shadow_db)
{
    std::vector<double> p;
    p.reserve(delays_s.size());
    double sum = 0.0;
    for (size_t i = 0; i < delays_s.size(); ++i)
    {
        const double shadow = i < shadow_db.size() ? shadow_db[i] : 0.0;
        const double v = std::exp(-delays_s[i] * (r_tau - 1.0) / (r_tau * ds_s)) *
                         std::pow(10.0, -shadow / 10.0);
        p.push_back(v);
        sum += v;
    }
    for (auto &v : p)
        v /= sum;
    return p;
}

double azimuth_spread_deg(std::span<const double> angles_deg, std::span<const double> powers)
{
    double total = 0.0;
    double cx = 0.0;
    double cy = 0.0;
    for (size_t i = 0; i < angles_deg.size(); ++i)
    {
        const double r = deg2rad(angles_deg[i]);
        cx += powers[i] * std::cos(r);
        cy += powers[i] * std::sin(r);
        total += powers[i];
    }
    if (total <= 0.0)
        return 0.0;
    const double mean = rad2deg(std::atan2(cy, cx));
    double acc = 0.0;
    for (size_t i = 0; i < angles_deg.size(); ++i)
    {
        const double dev = wrap_deg_pm180(angles_deg[i] - mean);
        acc += powers[i] * dev * dev;
    }
    return std::sqrt(acc / total);
}

double angle_scaling_constant(int n_clusters, const std::string &data_dir)
{
    static std::mutex mutex;
    static std::map<std::string, std::map<int, double>> cache;

    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(data_dir);
    if (it == cache.end())
    {
        const std::string path =
            (std::filesystem::path(data_dir) / "cluster_angle_scaling.txt").string();
        std::map<int, double> table;
        std::istringstream in(read_text_file(path));
        std::string line;
        while (std::getline(in, line))
        {
            if (line.empty() || line[0] == '#')
                continue;
            std::istringstream ls(line);
            int n = 0;
            double c = 0.0;
            if (ls >> n >> c)
                table[n] = c;
        }
        if (table.empty())
            throw ConfigError(path + ": no angle scaling entries");
        it = cache.emplace(data_dir, std::move(table)).first;
    }
    const auto &table = it->second;
    auto found = table.find(n_clusters);
    if (found != table.end())
        return found->second;
    // clamp to the nearest tabulated cluster count
    if (n_clusters < table.begin()->first)
        return table.begin()->second;
    return table.rbegin()->second;
}

ClusterSet generate_static_clusters(const LspSet &lsps, const LinkState &state,
                                    const ScenarioParams &scenario, RandomStream &stream,
                                    const std::string &data_dir)
{
    const int n = scenario.n_clusters;
    const double r_tau = scenario.delay_proportionality;
    const double ds = lsps.delay_spread_s;

    std::vector<double> u(static_cast<size_t>(n));
    for (auto &v : u)
        v = stream.uniform();
    const std::vector<double> delays = cluster_delays_from_uniforms(u, r_tau, ds);

    std::vector<double> shadow(static_cast<size_t>(n));
    for (auto &z : shadow)
        z = stream.gaussian() * scenario.per_cluster_shadow_sigma_db;
    std::vector<double> powers = cluster_powers(delays, r_tau, ds, shadow);

    const double p_max = *std::max_element(powers.begin(), powers.end());
    const double c_scale = angle_scaling_constant(n, data_dir);
    const double aod_los = azimuth_deg(state.rx_pos - state.tx_pos);
    const double aoa_los = azimuth_deg(state.tx_pos - state.rx_pos);

    std::vector<double> aod(static_cast<size_t>(n));
    std::vector<double> aoa(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
    {
        const double base = c_scale * std::sqrt(-std::log(powers[static_cast<size_t>(i)] / p_max));
        aod[static_cast<size_t>(i)] = base * lsps.asd_deg * stream.sign() +
                                      stream.gaussian() * lsps.asd_deg / 7.0 + aod_los;
        aoa[static_cast<size_t>(i)] = base * lsps.asa_deg * stream.sign() +
                                      stream.gaussian() * lsps.asa_deg / 7.0 + aoa_los;
    }

    ClusterSet set;
    set.link_id = -1;
    set.t = state.t;
    set.los = state.los;
    set.last_distance_m = state.distance_3d_m;
    set.birth_t = state.t;
    set.k_factor_db = lsps.k_factor_db;

    const bool los = state.los == Condition::LOS;
    const double k_linear = los ? db_to_linear(lsps.k_factor_db) : 0.0;
    const double scatter_scale = los ? 1.0 / (k_linear + 1.0) : 1.0;

    for (int i = 0; i < n; ++i)
    {
        Cluster c;
        c.id = set.next_cluster_id++;
        c.kind = ClusterKind::Static;
        c.delay_s = delays[static_cast<size_t>(i)];
        c.power = powers[static_cast<size_t>(i)] * scatter_scale;
        c.aod_deg = aod[static_cast<size_t>(i)];
        c.aoa_deg = aoa[static_cast<size_t>(i)];
        c.subpath_scale_deg = scenario.cluster_angle_spread_deg;
        c.n_subpaths = kSubpathsPerCluster;
        for (auto &ph : c.phases_rad)
            ph = stream.uniform(0.0, 2.0 * kPi);
        c.birth_t = state.t;
        set.clusters.push_back(std::move(c));
    }

    if (los)
    {
        Cluster c;
        c.id = set.next_cluster_id++;
        c.kind = ClusterKind::Direct;
        c.delay_s = 0.0;
        c.power = k_linear / (k_linear + 1.0);
        c.aod_deg = aod_los;
        c.aoa_deg = aoa_los;
        c.subpath_scale_deg = 0.0;
        c.n_subpaths = 1;
        c.birth_t = state.t;
        set.clusters.push_back(std::move(c));
    }

    return set;
}

std::vector<Cluster> generate_dynamic_clusters(const LinkState &state, const LinkRecord &record,
                                               const std::vector<Node> &nodes,
                                               const GeometryLayers &layers,
                                               const SimConfig &config, double c_phi_deg)
{
    std::vector<Cluster> out;
    const double d = state.distance_3d_m;
    for (const auto &node : nodes)
    {
        if (!node.is_scatterer)
            continue;
        if (node.id == record.tx_node_id || node.id == record.rx_node_id)
            continue;
        const Vec3 s_pos = node.position_at(state.t);
        const double d1 = (s_pos - state.tx_pos).norm();
        const double d2 = (s_pos - state.rx_pos).norm();
        if (std::min(d1, d2) > config.clusters.capture_radius_m)
            continue;
        if (d1 <= 0.0 || d2 <= 0.0)
            continue;
        if (!is_los(state.tx_pos, s_pos, layers) || !is_los(s_pos, state.rx_pos, layers))
            continue;

        Cluster c;
        c.id = kDynamicIdBase + node.id;
        c.kind = ClusterKind::Dynamic;
        c.source_node_id = node.id;
        c.delay_s = std::max(0.0, (d1 + d2 - d) / kSpeedOfLight);
        const double ratio = d * d / (d1 * d2);
        c.power = ratio * ratio * db_to_linear(-config.clusters.reflection_loss_db);
        c.aod_deg = azimuth_deg(s_pos - state.tx_pos);
        c.aoa_deg = azimuth_deg(s_pos - state.rx_pos);
        c.subpath_scale_deg = c_phi_deg / 4.0;
        c.n_subpaths = kSubpathsPerCluster;
        auto phase_stream = substream(config.seed, "clusters.dynphase",
                                      static_cast<std::uint64_t>(node.id),
                                      static_cast<std::uint64_t>(record.band_index));
        for (auto &ph : c.phases_rad)
            ph = phase_stream.uniform(0.0, 2.0 * kPi);
        c.birth_t = state.t;
        out.push_back(std::move(c));
    }
    return out;
}

ClusterMemory::ClusterMemory(int capacity, double t_mem_s)
    : capacity_(capacity), t_mem_s_(t_mem_s)
{
    if (capacity_ < 1)
        throw ContractError("cluster memory: capacity must be >= 1");
}

std::optional<std::vector<Cluster>> ClusterMemory::get(const SituationKey &key, double now)
{
    auto it = map_.find(key);
    if (it == map_.end())
        return std::nullopt;
    if (now - it->second.stored_t >= t_mem_s_)
    {
        map_.erase(it);
        return std::nullopt;
    }
    it->second.tick = ++tick_;
    return it->second.clusters;
}

void ClusterMemory::put(const SituationKey &key, std::vector<Cluster> clusters, double now)
{
    auto it = map_.find(key);
    if (it != map_.end())
    {
        it->second = Entry{std::move(clusters), now, ++tick_};
        return;
    }
    if (static_cast<int>(map_.size()) >= capacity_)
    {
        auto victim = map_.begin();
        for (auto e = map_.begin(); e != map_.end(); ++e)
            if (e->second.tick < victim->second.tick)
                victim = e;
        map_.erase(victim);
    }
    map_.emplace(key, Entry{std::move(clusters), now, ++tick_});
}

namespace
{

// New static draw (or memory replay) for the current situation, stamped to
// fade in when `fade` is set.
std::vector<Cluster> draw_static_subset(const LinkState &state, const LinkLspContext &ctx,
                                        const SimConfig &config, RandomStream &stream,
                                        ClusterMemory *memory, int &next_cluster_id,
                                        double &k_factor_db, bool fade)
{
    std::vector<Cluster> drawn;
    bool from_memory = false;
    SituationKey key;
    const bool use_memory = memory && config.features.cluster_memory;
    if (use_memory)
    {
        key = situation_key(state, *ctx.record, config.clusters.situation_eps_m);
        if (auto hit = memory->get(key, state.t))
        {
            drawn = std::move(*hit);
            from_memory = true;
        }
    }
    if (!from_memory)
    {
        const LspSet lsps = sample_lsps(*ctx.maps, state.rx_pos, state.los, *ctx.scenario);
        ClusterSet fresh = generate_static_clusters(lsps, state, *ctx.scenario, stream);
        k_factor_db = fresh.k_factor_db;
        drawn = std::move(fresh.clusters);
        if (use_memory)
            memory->put(key, drawn, state.t);
    }
    for (auto &c : drawn)
    {
        c.id = next_cluster_id++;
        c.birth_t = state.t;
        c.death_t = std::numeric_limits<double>::infinity();
        c.ramp_duration_s = config.clusters.ramp_duration_s;
        c.fades_in = fade;
    }
    return drawn;
}

void merge_dynamic_clusters(std::vector<Cluster> &clusters, const LinkState &state,
                            const LinkLspContext &ctx, const std::vector<Node> &nodes,
                            const GeometryLayers &layers, const SimConfig &config)
{
    if (!config.features.dynamic_scatterers)
        return;
    const bool ramps = config.features.situation_transitions &&
                       config.clusters.ramp_duration_s > 0.0;
    const double ramp = config.clusters.ramp_duration_s;

    auto fresh = generate_dynamic_clusters(state, *ctx.record, nodes, layers, config,
                                           ctx.scenario->cluster_angle_spread_deg);

    // update existing entries in place, add new ones, retire vanished ones
    for (auto &existing : clusters)
    {
        if (existing.kind != ClusterKind::Dynamic)
            continue;
        auto found = std::find_if(fresh.begin(), fresh.end(), [&](const Cluster &c) {
            return c.source_node_id == existing.source_node_id;
        });
        if (found != fresh.end())
        {
            const double w_now = existing.ramp_weight(state.t);
            existing.delay_s = found->delay_s;
            existing.power = found->power;
            existing.aod_deg = found->aod_deg;
            existing.aoa_deg = found->aoa_deg;
            if (std::isfinite(existing.death_t))
            {
                // scatterer is visible again mid-fade-out: resume ramping in
                // from the current weight so the power stays continuous
                existing.death_t = std::numeric_limits<double>::infinity();
                if (ramps)
                {
                    existing.fades_in = true;
                    existing.birth_t = state.t - w_now * ramp;
                }
            }
            fresh.erase(found);
        }
        else if (!std::isfinite(existing.death_t))
        {
            // retire: freeze geometry, fade out (or vanish without ramps)
            existing.death_t = state.t;
            if (!ramps)
                existing.ramp_duration_s = 0.0;
        }
    }
    for (auto &c : fresh)
    {
        c.ramp_duration_s = ramp;
        c.fades_in = ramps;
        c.birth_t = state.t;
        clusters.push_back(std::move(c));
    }
}

void prune_dead(std::vector<Cluster> &clusters, double t)
{
    clusters.erase(std::remove_if(clusters.begin(), clusters.end(),
                                  [t](const Cluster &c) {
                                      if (!std::isfinite(c.death_t) && c.power > 0.0)
                                          return false;
                                      return c.ramp_weight(t) <= 0.0 && t >= c.birth_t;
                                  }),
                   clusters.end());
}

void refresh_direct(std::vector<Cluster> &clusters, const LinkState &state)
{
    for (auto &c : clusters)
        if (c.kind == ClusterKind::Direct)
        {
            c.aod_deg = azimuth_deg(state.rx_pos - state.tx_pos);
            c.aoa_deg = azimuth_deg(state.tx_pos - state.rx_pos);
            c.delay_s = 0.0;
        }
}

} // namespace

ClusterSet init_cluster_set(const LinkState &state, const LinkLspContext &ctx,
                            const std::vector<Node> &nodes, const GeometryLayers &layers,
                            const SimConfig &config, RandomStream &stream, ClusterMemory *memory)
{
    if (!ctx.maps || !ctx.scenario || !ctx.record)
        throw ContractError("init_cluster_set: incomplete link context");
    ClusterSet set;
    set.link_id = ctx.record->link_id;
    set.t = state.t;
    set.los = state.los;
    set.last_distance_m = state.distance_3d_m;
    set.birth_t = state.t;
    set.clusters = draw_static_subset(state, ctx, config, stream, memory, set.next_cluster_id,
                                      set.k_factor_db, /*fade=*/false);
    merge_dynamic_clusters(set.clusters, state, ctx, nodes, layers, config);
    return set;
}

ClusterSet evolve_cluster_set(const ClusterSet &prev, const LinkState &state,
                              const LinkLspContext &ctx, const std::vector<Node> &nodes,
                              const GeometryLayers &layers, double dt, const SimConfig &config,
                              RandomStream &stream, ClusterMemory *memory)
{
    if (!ctx.maps || !ctx.scenario || !ctx.record)
        throw ContractError("evolve_cluster_set: incomplete link context");
    if (prev.link_id != ctx.record->link_id)
        throw ContractError("evolve_cluster_set: cluster set belongs to link " +
                            std::to_string(prev.link_id) + ", not " +
                            std::to_string(ctx.record->link_id));
    if (!(dt > 0.0))
        throw ContractError("evolve_cluster_set: dt must be > 0");

    ClusterSet set = prev;
    set.t = state.t;

    // delay drift of persisting static clusters
    const double drift_s = (state.distance_3d_m - prev.last_distance_m) / kSpeedOfLight;
    if (config.features.time_evolution)
        for (auto &c : set.clusters)
            if (c.kind == ClusterKind::Static)
                c.delay_s = std::max(0.0, c.delay_s + drift_s);
    set.last_distance_m = state.distance_3d_m;

    // situation transition: redraw statics when the propagation condition flips
    if (state.los != prev.los)
    {
        const bool ramps = config.features.situation_transitions &&
                           config.clusters.ramp_duration_s > 0.0;
        if (ramps)
        {
            for (auto &c : set.clusters)
                if (c.kind != ClusterKind::Dynamic && !std::isfinite(c.death_t))
                    c.death_t = state.t;
        }
        else
        {
            set.clusters.erase(std::remove_if(set.clusters.begin(), set.clusters.end(),
                                              [](const Cluster &c) {
                                                  return c.kind != ClusterKind::Dynamic;
                                              }),
                               set.clusters.end());
        }
        auto fresh = draw_static_subset(state, ctx, config, stream, memory, set.next_cluster_id,
                                        set.k_factor_db, /*fade=*/ramps);
        set.birth_t = state.t;
        for (auto &c : fresh)
            set.clusters.push_back(std::move(c));
    }
    set.los = state.los;

    refresh_direct(set.clusters, state);
    merge_dynamic_clusters(set.clusters, state, ctx, nodes, layers, config);
    prune_dead(set.clusters, state.t);
    return set;
}

std::string cluster_trace_header()
{
    return "link_id,t,cluster_id,kind,delay_s,power,aod_deg,aoa_deg,ramp_weight\n";
}

void append_cluster_trace(const ClusterSet &set, std::string &csv)
{
    const auto weights = set.effective_weights(set.t);
    std::ostringstream out;
    for (size_t i = 0; i < set.clusters.size(); ++i)
    {
        const Cluster &c = set.clusters[i];
        out << set.link_id << "," << format_double(set.t) << "," << c.id << ","
            << cluster_kind_name(c.kind) << "," << format_double(c.delay_s) << ","
            << format_double(weights[i]) << "," << format_double(c.aod_deg) << ","
            << format_double(c.aoa_deg) << "," << format_double(c.ramp_weight(set.t)) << "\n";
    }
    csv += out.str();
}

} // namespace hcm
