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

#ifndef HCM_SCENARIO_HPP
#define HCM_SCENARIO_HPP

#include "hcm/types.hpp"

#include <array>
#include <map>
#include <string>

namespace hcm
{

// The five large-scale parameters, in the fixed order used for maps and the
// cross-correlation matrix.
enum class LspParam
{
    DS = 0,  // delay spread, log10 seconds
    K = 1,   // Ricean K-factor, dB
    ASD = 2, // azimuth spread of departure, log10 degrees
    ASA = 3, // azimuth spread of arrival, log10 degrees
    SF = 4   // shadow fading, dB
};
inline constexpr int kNumLspParams = 5;
inline constexpr std::array<const char *, kNumLspParams> kLspParamNames = {"DS", "K", "ASD", "ASA",
                                                                           "SF"};

enum class Condition
{
    LOS = 0,
    NLOS = 1
};
inline constexpr int kNumConditions = 2;
inline const char *condition_name(Condition c) { return c == Condition::LOS ? "LOS" : "NLOS"; }

using Matrix5 = Eigen::Matrix<double, 5, 5>;
using Vector5 = Eigen::Matrix<double, 5, 1>;

// One-slope path loss: PL = A log10(d) + B + C log10(f / 5 GHz), dB.
struct PathLossParams
{
    double a_log_dist = 22.7;
    double b_offset = 41.0;
    double c_log_freq = 20.0;
};

// mu/sigma of an LSP in its transformed domain (log10 s, dB or log10 deg).
struct LspDistribution
{
    double mu = 0.0;
    double sigma = 1.0;
};

struct ScenarioParams
{
    std::string scenario_id;

    PathLossParams pathloss_los;
    PathLossParams pathloss_nlos;

    std::array<LspDistribution, kNumLspParams> lsp;
    // Correlation distances, meters, per condition (LOS row 0, nLOS row 1).
    std::array<std::array<double, kNumLspParams>, kNumConditions> d_corr_m;

    Matrix5 lsp_cross_correlation = Matrix5::Identity();

    int n_clusters = 12;
    double delay_proportionality = 2.4;      // r_tau, > 1
    double per_cluster_shadow_sigma_db = 3.0;
    double cluster_angle_spread_deg = 10.0;  // c_phi

    const PathLossParams &pathloss(Condition c) const
    {
        return c == Condition::LOS ? pathloss_los : pathloss_nlos;
    }
    double d_corr(LspParam p, Condition c) const
    {
        return d_corr_m[static_cast<int>(c)][static_cast<int>(p)];
    }

    // Checks all invariants and repairs the cross-correlation matrix in place
    // (eigenvalues in [-1e-9, 0) clamped to zero, then renormalized to unit
    // diagonal). Eigenvalues below -1e-9 are a validation error.
    void validate_and_repair();

    static ScenarioParams from_text(const std::string &text);
    static ScenarioParams from_file(const std::string &path);
};

// Compiled-in location of the shipped parameter files; overridable per call.
std::string default_data_dir();

// Loads the parameter files shipped under <data_dir>/scenarios. Always
// contains urban_v2i, urban_v2v, highway_v2v (plus highway_v2i).
std::map<std::string, ScenarioParams> builtin_scenarios(const std::string &data_dir =
                                                            default_data_dir());

// True when the matrix needed clamping during the last validate_and_repair on
// it; reported so callers can warn.
bool psd_repair_clamped(const Matrix5 &original);

// Lower-triangular factor L with L L^T = m for a PSD matrix; handles
// positive-semidefinite inputs (zero pivots give zero columns), so rank
// deficient matrices such as the all-ones matrix factor cleanly.
Matrix5 psd_lower_factor(const Matrix5 &m);

} // namespace hcm

#endif
