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

#include "hcm/configfile.hpp"
#include "hcm/geometry.hpp"
#include "hcm/harness.hpp"
#include "hcm/rng.hpp"
#include "hcm/sim_config.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

namespace
{

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

std::string resolve_out_dir(const std::string &flag_value)
{
    if (!flag_value.empty())
        return flag_value;
    // optional environment override, see README
    if (const char *env = std::getenv("HCM_OUT_DIR"))
        return env;
    return "out";
}

hcm::SimConfig load_config(const std::string &path, long long seed_override,
                           const std::vector<int> &band_filter)
{
    hcm::SimConfig config = hcm::SimConfig::from_file(path);
    if (seed_override >= 0)
        config.seed = static_cast<std::uint64_t>(seed_override);
    if (!band_filter.empty())
    {
        std::vector<double> bands;
        for (int idx : band_filter)
        {
            if (idx < 0 || static_cast<size_t>(idx) >= config.bands_hz.size())
                throw hcm::ConfigError("--band-filter: index " + std::to_string(idx) +
                                       " is out of range");
            bands.push_back(config.bands_hz[static_cast<size_t>(idx)]);
        }
        config.bands_hz = bands;
    }
    config.validate();
    return config;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"hcm - hybrid geometry-based stochastic channel model simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    long long seed_override = -1;
    std::vector<int> band_filter;

    auto *cmd_run = app.add_subcommand("run", "execute the full simulation pipeline");
    cmd_run->add_option("--config", config_path, "simulation configuration file")->required();
    cmd_run->add_option("--out", out_dir, "output directory (default: $HCM_OUT_DIR or ./out)");
    cmd_run->add_option("--seed-override", seed_override, "replace the configured master seed");
    cmd_run->add_option("--band-filter", band_filter,
                        "simulate only these band indices (comma separated)")
        ->delimiter(',');

    auto *cmd_summarize = app.add_subcommand("summarize", "per-link statistics of a finished run");
    cmd_summarize->add_option("--out", out_dir, "output directory of the run")->required();

    auto *cmd_validate = app.add_subcommand("validate-config",
                                            "parse and validate a configuration file");
    cmd_validate->add_option("--config", config_path, "simulation configuration file")
        ->required();

    std::string geometry_out;
    auto *cmd_export = app.add_subcommand("export-geometry",
                                          "build the playground and write the exchange document");
    cmd_export->add_option("--config", config_path, "simulation configuration file")->required();
    cmd_export->add_option("--out", geometry_out, "output JSON path")->required();

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (cmd_run->parsed())
        {
            const hcm::SimConfig config = load_config(config_path, seed_override, band_filter);
            const std::string dir = resolve_out_dir(out_dir);
            const hcm::RunManifest manifest = hcm::run(config, dir);
            std::cout << "run complete: " << manifest.files.size() << " files in " << dir << "\n";
            for (const auto &t : manifest.timings)
                std::cout << "  " << t.stage << ": " << t.seconds << " s\n";
            return kExitOk;
        }
        if (cmd_summarize->parsed())
        {
            const auto summaries = hcm::summarize(out_dir);
            std::cout << "summary written for " << summaries.size() << " links ("
                      << out_dir << "/summary.txt)\n";
            return kExitOk;
        }
        if (cmd_validate->parsed())
        {
            (void)load_config(config_path, -1, {});
            std::cout << "OK: " << config_path << "\n";
            return kExitOk;
        }
        if (cmd_export->parsed())
        {
            const hcm::SimConfig config = load_config(config_path, seed_override, {});
            hcm::GeometryLayers layers;
            if (config.geometry.source == hcm::GeometrySpec::Source::Random)
            {
                auto stream = hcm::substream(config.seed, "geom.random");
                layers = hcm::generate_random_environment(config, stream);
            }
            else if (config.geometry.source == hcm::GeometrySpec::Source::Import)
            {
                layers = hcm::import_geometry_file(config.geometry.import_path);
            }
            else
            {
                layers = hcm::generate_environment_only(config);
            }
            hcm::write_text_file(geometry_out, hcm::export_geometry(layers));
            std::cout << "geometry written: " << geometry_out << "\n";
            return kExitOk;
        }
    }
    catch (const hcm::ParseError &e)
    {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    catch (const hcm::ValidationError &e)
    {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    catch (const hcm::ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitRuntime;
}
