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

#ifndef HCM_HARNESS_HPP
#define HCM_HARNESS_HPP

#include "hcm/sim_config.hpp"
#include "hcm/types.hpp"

#include <string>
#include <vector>

namespace hcm
{

struct StageTiming
{
    std::string stage;
    double seconds = 0.0;
};

struct ManifestFile
{
    std::string path; // relative to the output directory
    std::string sha256;
};

// Everything needed to reproduce and verify a run: the resolved configuration,
// the named randomness sub-streams, the produced files with content digests,
// and wall-clock timings per stage.
struct RunManifest
{
    std::string config_text;
    std::vector<std::string> substream_tags;
    std::vector<ManifestFile> files;
    std::vector<StageTiming> timings;

    std::string to_json() const;
};

// Executes the full pipeline (geometry -> nodes -> links -> LSP maps ->
// clusters -> synthesis) over the simulation span, one pass per band, and
// writes all configured exports plus manifest.json into out_dir. On a stage
// error all partial outputs are removed and the error is rethrown with the
// stage name.
RunManifest run(const SimConfig &config, const std::string &out_dir);
RunManifest run(const std::string &config_path, const std::string &out_dir);

struct LinkSummary
{
    int link_id = -1;
    double los_fraction = 0.0;
    double median_rms_delay_spread_s = 0.0;
    double mean_path_gain_db = 0.0;
    double doppler_estimate_hz = 0.0; // strongest-tap phase-difference estimate
    int steps = 0;
};

// Post-run statistics over the exports in out_dir; writes summary.csv and
// summary.txt there. Throws naming the missing file when outputs are absent.
std::vector<LinkSummary> summarize(const std::string &out_dir);

} // namespace hcm

#endif
