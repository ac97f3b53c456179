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

#ifndef HCM_SYNTHESIZER_HPP
#define HCM_SYNTHESIZER_HPP

#include "hcm/clusters.hpp"
#include "hcm/links.hpp"
#include "hcm/mobility.hpp"
#include "hcm/scenario.hpp"
#include "hcm/types.hpp"

#include <complex>
#include <span>
#include <string>
#include <vector>

namespace hcm
{

struct Tap
{
    double delay_s = 0.0; // excess delay relative to the direct path
    std::complex<double> amp{0.0, 0.0};
};

// Tapped-delay-line channel realization for one link at one instant: one tap
// per cluster and antenna pair, coherently summed over sub-paths.
struct ChannelSample
{
    int link_id = -1;
    double t = 0.0;
    int n_rx = 0;
    int n_tx = 0;
    std::vector<std::vector<Tap>> taps; // [u * n_tx + s]

    const std::vector<Tap> &pair(int u, int s) const
    {
        return taps[static_cast<size_t>(u) * n_tx + s];
    }
};

// One-slope model: PL = A log10(d) + B + C log10(f / 5 GHz), with the (A,B,C)
// triple selected by the propagation condition. Shadow fading is combined by
// the caller.
double path_loss_db(double distance_m, double band_hz, const ScenarioParams &scenario,
                    Condition condition);

// Synthesizes the per-antenna-pair taps from a cluster set: sub-path phases
// accumulate Doppler from the cluster birth time, element offsets add array
// phase, patterns weight each sub-path, the direct tap carries the exact
// geometric phase. `total_loss_db` (path loss + shadow fading) scales all
// amplitudes by 10^(-loss/20).
ChannelSample synthesize_sample(const ClusterSet &set, const LinkState &state,
                                const AntennaConfig &tx_antenna, const AntennaConfig &rx_antenna,
                                double band_hz, double t, double total_loss_db,
                                double tx_yaw_rad, double rx_yaw_rad);

// H(f) = sum over taps amp * exp(-j 2 pi f delay) per antenna pair and offset.
Eigen::MatrixXcd frequency_response(const ChannelSample &sample,
                                    std::span<const double> freq_offsets_hz);

// Binary CIR container "HCMCIR01": header (8-byte magic, u32 version, u32
// link id, u32 n_rx, u32 n_tx, u32 step count), then per step per (u, s) pair
// a u32 tap count followed by (delay, re, im) little-endian f64 triples.
void write_cir_binary(const std::vector<ChannelSample> &samples, const std::string &path);
std::vector<ChannelSample> read_cir_binary(const std::string &path);

std::string cir_csv_header();
void append_cir_csv(const ChannelSample &sample, std::string &csv);

} // namespace hcm

#endif
