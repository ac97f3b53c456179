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

#ifndef HCM_CLUSTERS_HPP
#define HCM_CLUSTERS_HPP

#include "hcm/links.hpp"
#include "hcm/lsp.hpp"
#include "hcm/mobility.hpp"
#include "hcm/rng.hpp"
#include "hcm/scenario.hpp"
#include "hcm/types.hpp"

#include <array>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace hcm
{

inline constexpr int kSubpathsPerCluster = 20;

// Canonical equal-power sub-path offset set, unit angle spread; scaled by the
// per-cluster angle spread.
inline constexpr std::array<double, kSubpathsPerCluster> kSubpathOffsets = {
    0.0447,  -0.0447, 0.1413,  -0.1413, 0.2492,  -0.2492, 0.3715,  -0.3715, 0.5129,  -0.5129,
    0.6797,  -0.6797, 0.8844,  -0.8844, 1.1481,  -1.1481, 1.5195,  -1.5195, 2.1551,  -2.1551};

enum class ClusterKind
{
    Static,
    Dynamic,
    Direct
};

const char *cluster_kind_name(ClusterKind k);

struct Cluster
{
    int id = 0;
    ClusterKind kind = ClusterKind::Static;
    double delay_s = 0.0; // excess delay relative to the direct path
    // Relative linear power. Within one static draw the direct + scatter
    // powers sum to 1; dynamic clusters carry their raw geometric power on the
    // same scale and are renormalized into the combined set.
    double power = 0.0;
    double aod_deg = 0.0; // global frame
    double aoa_deg = 0.0;
    double subpath_scale_deg = 0.0; // angular offset scale; 0 for the direct cluster
    int n_subpaths = kSubpathsPerCluster;
    std::array<double, kSubpathsPerCluster> phases_rad{}; // initial sub-path phases
    int source_node_id = -1;                              // dynamic clusters only

    // power ramp (situation transitions / dynamic birth and death)
    double birth_t = 0.0; // also the phase reference time for synthesis
    double death_t = std::numeric_limits<double>::infinity();
    double ramp_duration_s = 0.0;
    bool fades_in = false;

    double ramp_weight(double t) const;
};

// Location-dependent cluster realization of one link at one time.
struct ClusterSet
{
    int link_id = -1;
    double t = 0.0;
    Condition los = Condition::LOS;
    std::vector<Cluster> clusters;

    double last_distance_m = 0.0; // link distance when t was stamped
    double birth_t = 0.0;         // birth of the newest static draw
    double k_factor_db = 0.0;     // K of the newest static draw
    int next_cluster_id = 0;

    // Normalized per-cluster power weights at time t: ramped relative powers
    // scaled so the alive set sums to exactly 1 (before path loss).
    std::vector<double> effective_weights(double t) const;
};

// --- pure helpers (exposed for tests and calibration) --------------------

// Exponential cluster delays from uniform draws: -r_tau * ds * ln(u), sorted
// ascending and shifted so the minimum is zero.
std::vector<double> cluster_delays_from_uniforms(std::span<const double> u, double r_tau,
                                                 double ds_s);

// Per-cluster powers exp(-tau (r-1)/(r ds)) * 10^(-shadow_db/10), normalized
// to sum 1.
std::vector<double> cluster_powers(std::span<const double> delays_s, double r_tau, double ds_s,
                                   std::span<const double> shadow_db);

// Power-weighted rms azimuth spread (degrees) about the circular mean.
double azimuth_spread_deg(std::span<const double> angles_deg, std::span<const double> powers);

// Angle-mapping constant C for a given cluster count, calibrated offline so
// the empirical azimuth spread of generated clusters matches the target
// spread (see tools/calibrate_angle_scaling).
double angle_scaling_constant(int n_clusters, const std::string &data_dir = default_data_dir());

// --- generation ----------------------------------------------------------

// Quasi-static WINNER-style cluster draw from sampled LSPs.
ClusterSet generate_static_clusters(const LspSet &lsps, const LinkState &state,
                                    const ScenarioParams &scenario, RandomStream &stream,
                                    const std::string &data_dir = default_data_dir());

// Geometrically computed clusters from moving scatterer nodes: two-segment
// excess delay, bistatic distance-product power with a fixed reflection loss,
// departure/arrival azimuths toward the scatterer.
std::vector<Cluster> generate_dynamic_clusters(const LinkState &state, const LinkRecord &record,
                                               const std::vector<Node> &nodes,
                                               const GeometryLayers &layers,
                                               const SimConfig &config, double c_phi_deg);

// Reuse cache for generated clusters at quantized situations.
class ClusterMemory
{
  public:
    ClusterMemory(int capacity, double t_mem_s);

    std::optional<std::vector<Cluster>> get(const SituationKey &key, double now);
    void put(const SituationKey &key, std::vector<Cluster> clusters, double now);

    size_t size() const { return map_.size(); }

  private:
    struct Entry
    {
        std::vector<Cluster> clusters;
        double stored_t = 0.0;
        std::uint64_t tick = 0;
    };
    std::unordered_map<SituationKey, Entry, SituationKeyHash> map_;
    int capacity_;
    double t_mem_s_;
    std::uint64_t tick_ = 0;
};

struct LinkLspContext
{
    const LspMapSet *maps = nullptr;
    const ScenarioParams *scenario = nullptr;
    const LinkRecord *record = nullptr;
};

// First cluster set of a link at its first active instant.
ClusterSet init_cluster_set(const LinkState &state, const LinkLspContext &ctx,
                            const std::vector<Node> &nodes, const GeometryLayers &layers,
                            const SimConfig &config, RandomStream &stream,
                            ClusterMemory *memory = nullptr);

// One time-evolution step: static delays drift with the link distance, the
// direct ray tracks geometry, dynamic clusters are recomputed, and a changed
// propagation condition triggers a cross-faded redraw.
ClusterSet evolve_cluster_set(const ClusterSet &prev, const LinkState &state,
                              const LinkLspContext &ctx, const std::vector<Node> &nodes,
                              const GeometryLayers &layers, double dt, const SimConfig &config,
                              RandomStream &stream, ClusterMemory *memory = nullptr);

// Trace export rows: link_id, t, cluster_id, kind, delay_s, power, aod_deg,
// aoa_deg, ramp_weight (power is the normalized effective weight).
std::string cluster_trace_header();
void append_cluster_trace(const ClusterSet &set, std::string &csv);

} // namespace hcm

#endif
