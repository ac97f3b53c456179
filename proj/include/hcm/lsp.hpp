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

#ifndef HCM_LSP_HPP
#define HCM_LSP_HPP

#include "hcm/rng.hpp"
#include "hcm/scenario.hpp"
#include "hcm/types.hpp"

#include <array>
#include <string>
#include <vector>

namespace hcm
{

struct LspGridSpec
{
    Vec3 origin = Vec3::Zero();
    double cell_size_m = 5.0;
    int nx = 0; // grid points per axis
    int ny = 0;

    // Point grid covering [0, extent] in both axes.
    static LspGridSpec for_extent(double extent_m, double cell_size_m);
};

// Spatially correlated standard-normal field for one LSP under one
// propagation condition. Values live on grid points; queries interpolate
// bilinearly with edge clamping.
struct LspField
{
    Eigen::ArrayXXd grid; // grid(ix, iy)
    Vec3 origin = Vec3::Zero();
    double cell_size_m = 5.0;
    double d_corr_m = 50.0;
    LspParam param = LspParam::DS;
    Condition condition = Condition::LOS;

    double value_at(const Vec3 &p) const;
    int nx() const { return static_cast<int>(grid.rows()); }
    int ny() const { return static_cast<int>(grid.cols()); }
};

// Stationary zero-mean unit-variance Gaussian field with isotropic
// autocorrelation target exp(-d / d_corr), generated by frequency-domain
// filtering of white noise with the square root of the matching power
// spectrum. Requires cell_size <= d_corr / 2 (sampling rule).
LspField generate_lsp_field(const LspGridSpec &spec, double d_corr_m, LspParam param,
                            Condition condition, RandomStream &stream);

// All ten maps (5 parameters x LOS/nLOS) for one (tx station, band) pair.
struct LspMapSet
{
    int tx_node_id = -1;
    int band_index = 0;
    std::array<std::array<LspField, kNumConditions>, kNumLspParams> fields;

    const LspField &field(LspParam p, Condition c) const
    {
        return fields[static_cast<size_t>(p)][static_cast<size_t>(c)];
    }
};

// Generates the map set with one named sub-stream per field.
LspMapSet generate_lsp_maps(int tx_node_id, int band_index, const LspGridSpec &spec,
                            const ScenarioParams &scenario, std::uint64_t master_seed);

// Link-level large-scale parameters in their physical domains.
struct LspSet
{
    double delay_spread_s = 0.0;
    double k_factor_db = 0.0;
    double asd_deg = 0.0;
    double asa_deg = 0.0;
    double shadow_fading_db = 0.0;
};

// Azimuth spreads are capped at this value (wrap-around safeguard).
inline constexpr double kAngleSpreadCapDeg = 104.0;

// The five raw field normals at a position, in parameter order.
Vector5 raw_lsps_at(const LspMapSet &maps, const Vec3 &rx_pos, Condition condition);

// Reads the raw normals at the rx position, applies the lower-triangular
// factor of the scenario cross-correlation matrix, and transforms each
// correlated normal into its physical domain.
LspSet sample_lsps(const LspMapSet &maps, const Vec3 &rx_pos, Condition condition,
                   const ScenarioParams &scenario);

// Flat binary field export: 40-byte header (magic "HCMLSP01", u32 nx, u32 ny,
// f64 origin_x, f64 origin_y, f64 cell_size), then nx*ny little-endian f64 in
// row-major (iy outer) order.
void write_lsp_field_binary(const LspField &field, const std::string &path);
LspField read_lsp_field_binary(const std::string &path);
void write_lsp_field_csv(const LspField &field, const std::string &path);

} // namespace hcm

#endif
