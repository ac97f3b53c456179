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

#include "hcm/harness.hpp"

#include "hcm/clusters.hpp"
#include "hcm/configfile.hpp"
#include "hcm/digest.hpp"
#include "hcm/geometry.hpp"
#include "hcm/links.hpp"
#include "hcm/lsp.hpp"
#include "hcm/mobility.hpp"
#include "hcm/scenario.hpp"
#include "hcm/synthesizer.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <map>
#include <sstream>

namespace hcm
{

namespace fs = std::filesystem;
using nlohmann::json;

namespace
{

const char *kSubstreamTags[] = {"geom.random",      "nodes.place",       "nodes.traj",
                                "lsp.field",        "clusters.static",   "clusters.dynphase"};

class Stopwatch
{
  public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

// Tracks produced files so a failing stage can remove partial outputs.
class OutputTracker
{
  public:
    explicit OutputTracker(fs::path dir) : dir_(std::move(dir)) {}

    std::string path_for(const std::string &relative)
    {
        created_.push_back(relative);
        return (dir_ / relative).string();
    }

    const std::vector<std::string> &created() const { return created_; }

    void remove_all() noexcept
    {
        for (const auto &rel : created_)
        {
            std::error_code ec;
            fs::remove(dir_ / rel, ec);
        }
    }

  private:
    fs::path dir_;
    std::vector<std::string> created_;
};

void require_feature(bool flag, const char *name)
{
    if (!flag)
        throw ConfigError(std::string("feature '") + name +
                          "' is required for channel generation and cannot be disabled");
}

struct CsvTable
{
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const std::string &path)
{
    CsvTable t;
    std::istringstream in(read_text_file(path));
    std::string line;
    bool first = true;
    while (std::getline(in, line))
    {
        if (line.empty())
            continue;
        std::vector<std::string> cols;
        std::istringstream ls(line);
        std::string tok;
        while (std::getline(ls, tok, ','))
            cols.push_back(tok);
        if (first)
        {
            t.header = std::move(cols);
            first = false;
        }
        else
        {
            t.rows.push_back(std::move(cols));
        }
    }
    return t;
}

double median_of(std::vector<double> v)
{
    if (v.empty())
        return 0.0;
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string fmt3(double v)
{
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

} // namespace

std::string RunManifest::to_json() const
{
    json j;
    j["config"] = config_text;
    j["substreams"] = substream_tags;
    j["files"] = json::array();
    for (const auto &f : files)
        j["files"].push_back({{"path", f.path}, {"sha256", f.sha256}});
    j["timings"] = json::array();
    for (const auto &t : timings)
        j["timings"].push_back({{"stage", t.stage}, {"seconds", t.seconds}});
    return j.dump(2);
}

RunManifest run(const std::string &config_path, const std::string &out_dir)
{
    return run(SimConfig::from_file(config_path), out_dir);
}

RunManifest run(const SimConfig &config, const std::string &out_dir)
{
    config.validate();
    require_feature(config.features.environment_sublayer, "environment_sublayer");
    require_feature(config.features.static_scatterers, "static_scatterers");
    require_feature(config.features.lsp_maps, "lsp_maps");
    require_feature(config.features.node_pairing, "node_pairing");
    require_feature(config.features.link_state_classification, "link_state_classification");

    const std::string data_dir =
        config.scenario_dir.empty() ? default_data_dir() : config.scenario_dir;
    const auto scenarios = builtin_scenarios(data_dir);
    const bool parity = config.winner_parity_mode();

    fs::create_directories(out_dir);
    OutputTracker out(out_dir);
    RunManifest manifest;
    manifest.config_text = config.to_text();
    for (const char *tag : kSubstreamTags)
        manifest.substream_tags.push_back(tag);

    std::string stage = "geometry";
    try
    {
        // ---- geometry ----------------------------------------------------
        Stopwatch sw_geometry;
        GeometryLayers layers;
        if (parity || config.geometry.source == GeometrySpec::Source::EnvironmentOnly)
        {
            layers = generate_environment_only(config);
        }
        else if (config.geometry.source == GeometrySpec::Source::Random)
        {
            require_feature(config.features.random_environment, "random_environment");
            auto stream = substream(config.seed, "geom.random");
            layers = generate_random_environment(config, stream);
        }
        else
        {
            if (!config.features.geometry_import && !config.features.user_defined_environment)
                throw ConfigError("geometry.source = import requires the geometry_import or "
                                  "user_defined_environment feature");
            layers = import_geometry_file(config.geometry.import_path);
        }
        if (!config.features.building_sublayer)
            layers.buildings.clear();
        if (!config.features.road_sublayer)
            layers.roads.clear();
        manifest.timings.push_back({"geometry", sw_geometry.seconds()});

        // ---- nodes -------------------------------------------------------
        stage = "nodes";
        Stopwatch sw_nodes;
        const std::vector<Node> nodes = place_nodes(config, layers);
        if (config.output.trajectories)
            write_trajectories_csv(nodes, out.path_for("trajectories.csv"));
        manifest.timings.push_back({"nodes", sw_nodes.seconds()});

        // ---- links -------------------------------------------------------
        stage = "links";
        Stopwatch sw_links;
        const std::vector<LinkRecord> table = build_link_table(nodes, config, layers, scenarios);
        if (config.output.link_table)
            write_link_table_csv(table, out.path_for("link_table.csv"));
        if (config.output.state_trace)
            write_state_trace_csv(table, nodes, layers, config, out.path_for("state_trace.csv"));
        manifest.timings.push_back({"links", sw_links.seconds()});

        // ---- LSP maps ----------------------------------------------------
        stage = "lsp";
        Stopwatch sw_lsp;
        const LspGridSpec grid_spec = LspGridSpec::for_extent(config.extent_m,
                                                              config.lsp_cell_size_m);
        std::map<std::pair<int, int>, LspMapSet> maps; // (tx, band) -> set
        for (const auto &rec : table)
        {
            const auto key = std::make_pair(rec.tx_node_id, rec.band_index);
            if (maps.count(key))
                continue;
            // d_corr values come from the scenario of the lowest-id link of
            // this (tx, band) pair
            maps.emplace(key, generate_lsp_maps(rec.tx_node_id, rec.band_index, grid_spec,
                                                scenarios.at(rec.scenario_id), config.seed));
            if (config.output.lsp_maps || config.output.lsp_maps_csv)
                for (int p = 0; p < kNumLspParams; ++p)
                    for (int c = 0; c < kNumConditions; ++c)
                    {
                        const auto &field = maps.at(key).field(static_cast<LspParam>(p),
                                                               static_cast<Condition>(c));
                        std::ostringstream name;
                        name << "lsp_tx" << rec.tx_node_id << "_b" << rec.band_index << "_"
                             << kLspParamNames[p] << "_"
                             << condition_name(static_cast<Condition>(c));
                        if (config.output.lsp_maps)
                            write_lsp_field_binary(field, out.path_for(name.str() + ".f64"));
                        if (config.output.lsp_maps_csv)
                            write_lsp_field_csv(field, out.path_for(name.str() + ".csv"));
                    }
        }
        manifest.timings.push_back({"lsp", sw_lsp.seconds()});

        // ---- clusters + synthesis -----------------------------------------
        stage = "channel";
        Stopwatch sw_channel;
        std::string cluster_trace = cluster_trace_header();
        // one cluster memory per band, shared across links so reoccurring
        // situations of nearby links replay the same clusters; reuse needs
        // both the memory and the situation-detection feature
        const bool reuse = config.features.cluster_memory && config.features.situation_detection;
        std::map<int, ClusterMemory> memories;
        if (reuse)
            for (size_t bi = 0; bi < config.bands_hz.size(); ++bi)
                memories.emplace(static_cast<int>(bi),
                                 ClusterMemory(config.clusters.memory_capacity,
                                               config.clusters.memory_time_s));

        const int steps =
            static_cast<int>(std::floor(config.duration_s / config.time_step_s + 1e-9));
        for (const auto &rec : table)
        {
            const ScenarioParams &scenario = scenarios.at(rec.scenario_id);
            const LspMapSet &map_set = maps.at({rec.tx_node_id, rec.band_index});
            LinkLspContext ctx{&map_set, &scenario, &rec};
            auto stream = substream(config.seed, "clusters.static",
                                    static_cast<std::uint64_t>(rec.link_id));
            ClusterMemory *memory = reuse ? &memories.at(rec.band_index) : nullptr;

            const Node &tx = [&]() -> const Node & {
                for (const auto &n : nodes)
                    if (n.id == rec.tx_node_id)
                        return n;
                throw ContractError("link references unknown tx node");
            }();
            const Node &rx = [&]() -> const Node & {
                for (const auto &n : nodes)
                    if (n.id == rec.rx_node_id)
                        return n;
                throw ContractError("link references unknown rx node");
            }();
            if (!tx.antenna || !rx.antenna)
                throw ContractError("link endpoints must carry antenna configurations");

            std::vector<ChannelSample> samples;
            ClusterSet set;
            bool have_set = false;
            for (int k = 0; k <= steps; ++k)
            {
                const double t = k * config.time_step_s;
                if (!rec.active_at(t))
                    continue;
                const LinkState state = classify_link_state(rec, t, nodes, layers);
                if (!have_set)
                {
                    set = init_cluster_set(state, ctx, nodes, layers, config, stream, memory);
                    have_set = true;
                }
                else
                {
                    set = evolve_cluster_set(set, state, ctx, nodes, layers,
                                             std::max(t - set.t, config.time_step_s * 1e-6),
                                             config, stream, memory);
                }
                if (!config.features.subpath_generation)
                    for (auto &c : set.clusters)
                        c.n_subpaths = 1;
                if (config.output.cluster_trace)
                    append_cluster_trace(set, cluster_trace);

                const LspSet lsps = sample_lsps(map_set, state.rx_pos, state.los, scenario);
                const double loss_db =
                    path_loss_db(state.distance_3d_m, rec.band_hz, scenario, state.los) +
                    lsps.shadow_fading_db;
                samples.push_back(synthesize_sample(set, state, *tx.antenna, *rx.antenna,
                                                    rec.band_hz, t, loss_db, tx.yaw_at(t),
                                                    rx.yaw_at(t)));
            }

            if (!samples.empty())
            {
                if (config.output.cir_binary)
                    write_cir_binary(samples,
                                     out.path_for("cir_link" + std::to_string(rec.link_id) +
                                                  ".bin"));
                if (config.output.cir_csv)
                {
                    std::string csv = cir_csv_header();
                    for (const auto &s : samples)
                        append_cir_csv(s, csv);
                    write_text_file(out.path_for("cir_link" + std::to_string(rec.link_id) +
                                                 ".csv"),
                                    csv);
                }
            }
        }
        if (config.output.cluster_trace)
            write_text_file(out.path_for("cluster_trace.csv"), cluster_trace);
        manifest.timings.push_back({"channel", sw_channel.seconds()});

        // ---- manifest ------------------------------------------------------
        stage = "manifest";
        auto files = out.created();
        std::sort(files.begin(), files.end());
        for (const auto &rel : files)
            manifest.files.push_back({rel, sha256_file((fs::path(out_dir) / rel).string())});
        write_text_file((fs::path(out_dir) / "manifest.json").string(), manifest.to_json());
    }
    catch (const Error &e)
    {
        out.remove_all();
        throw Error("stage " + stage + ": " + e.what());
    }

    return manifest;
}

std::vector<LinkSummary> summarize(const std::string &out_dir)
{
    const fs::path dir(out_dir);
    const std::string link_table_path = (dir / "link_table.csv").string();
    if (!fs::exists(link_table_path))
        throw QueryError("summarize: missing output file link_table.csv");
    const std::string state_path = (dir / "state_trace.csv").string();
    if (!fs::exists(state_path))
        throw QueryError("summarize: missing output file state_trace.csv");

    const CsvTable links = read_csv(link_table_path);
    const CsvTable states = read_csv(state_path);

    // per link: LOS fraction and the time column of its active grid
    std::map<int, std::vector<double>> times;
    std::map<int, int> los_counts;
    std::map<int, int> row_counts;
    for (const auto &row : states.rows)
    {
        const int id = std::stoi(row[0]);
        times[id].push_back(std::stod(row[1]));
        row_counts[id]++;
        if (row[2] == "LOS")
            los_counts[id]++;
    }

    std::vector<int> link_ids;
    for (const auto &row : links.rows)
    {
        const int id = std::stoi(row[0]);
        if (link_ids.empty() || link_ids.back() != id)
            link_ids.push_back(id);
    }
    std::sort(link_ids.begin(), link_ids.end());
    link_ids.erase(std::unique(link_ids.begin(), link_ids.end()), link_ids.end());

    std::vector<LinkSummary> out;
    for (int id : link_ids)
    {
        LinkSummary s;
        s.link_id = id;
        s.steps = row_counts.count(id) ? row_counts[id] : 0;
        if (s.steps > 0)
            s.los_fraction = static_cast<double>(los_counts[id]) / s.steps;

        const std::string cir_path = (dir / ("cir_link" + std::to_string(id) + ".bin")).string();
        if (!fs::exists(cir_path))
            throw QueryError("summarize: missing output file cir_link" + std::to_string(id) +
                             ".bin");
        const auto samples = read_cir_binary(cir_path);

        std::vector<double> ds_per_step;
        std::vector<double> gain_per_step;
        std::vector<double> doppler_per_step;
        double prev_phase = 0.0;
        bool have_prev = false;
        size_t prev_tap = 0;
        for (size_t k = 0; k < samples.size(); ++k)
        {
            const auto &taps = samples[k].pair(0, 0);
            if (taps.empty())
            {
                have_prev = false;
                continue;
            }
            double p_total = 0.0;
            double m1 = 0.0;
            double m2 = 0.0;
            size_t strongest = 0;
            double strongest_p = -1.0;
            for (size_t i = 0; i < taps.size(); ++i)
            {
                const double p = std::norm(taps[i].amp);
                p_total += p;
                m1 += p * taps[i].delay_s;
                m2 += p * taps[i].delay_s * taps[i].delay_s;
                if (p > strongest_p)
                {
                    strongest_p = p;
                    strongest = i;
                }
            }
            gain_per_step.push_back(p_total);
            if (p_total > 0.0)
            {
                const double mean = m1 / p_total;
                const double var = std::max(0.0, m2 / p_total - mean * mean);
                ds_per_step.push_back(std::sqrt(var));
            }
            const double phase = std::arg(taps[strongest].amp);
            if (have_prev && strongest == prev_tap && k > 0 &&
                times.count(id) && k < times[id].size())
            {
                const double dt = times[id][k] - times[id][k - 1];
                if (dt > 0.0)
                {
                    double dphi = phase - prev_phase;
                    while (dphi > kPi)
                        dphi -= 2.0 * kPi;
                    while (dphi <= -kPi)
                        dphi += 2.0 * kPi;
                    doppler_per_step.push_back(std::abs(dphi) / (2.0 * kPi * dt));
                }
            }
            prev_phase = phase;
            prev_tap = strongest;
            have_prev = true;
        }
        s.median_rms_delay_spread_s = median_of(ds_per_step);
        double mean_gain = 0.0;
        for (double g : gain_per_step)
            mean_gain += g;
        if (!gain_per_step.empty())
            mean_gain /= static_cast<double>(gain_per_step.size());
        s.mean_path_gain_db = mean_gain > 0.0 ? linear_to_db(mean_gain) : -999.0;
        s.doppler_estimate_hz = median_of(doppler_per_step);
        out.push_back(s);
    }

    // write summary.csv + summary.txt
    std::ostringstream csv;
    csv << "link_id,steps,los_fraction,median_rms_delay_spread_s,mean_path_gain_db,"
           "doppler_estimate_hz\n";
    std::ostringstream txt;
    txt << "Per-link channel statistics (" << out.size() << " links)\n";
    txt << "Doppler is a strongest-tap phase-difference estimate; it aliases above\n"
           "1/(2*time_step) and its noise floor is set by cluster evolution.\n\n";
    for (const auto &s : out)
    {
        csv << s.link_id << "," << s.steps << "," << format_double(s.los_fraction) << ","
            << format_double(s.median_rms_delay_spread_s) << ","
            << format_double(s.mean_path_gain_db) << "," << format_double(s.doppler_estimate_hz)
            << "\n";
        txt << "link " << s.link_id << ": steps=" << s.steps << "  LOS fraction "
            << fmt3(s.los_fraction) << "\n"
            << "  median rms delay spread " << fmt3(s.median_rms_delay_spread_s * 1e9)
            << " ns\n"
            << "  mean path gain " << fmt3(s.mean_path_gain_db) << " dB\n"
            << "  Doppler estimate " << fmt3(s.doppler_estimate_hz) << " Hz\n";
    }
    write_text_file((dir / "summary.csv").string(), csv.str());
    write_text_file((dir / "summary.txt").string(), txt.str());
    return out;
}

} // namespace hcm
