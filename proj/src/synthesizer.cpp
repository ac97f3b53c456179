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

#include "hcm/synthesizer.hpp"

#include "hcm/configfile.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace hcm
{

double path_loss_db(double distance_m, double band_hz, const ScenarioParams &scenario,
                    Condition condition)
{
    if (!(distance_m > 0.0))
        throw QueryError("path_loss_db: distance must be > 0");
    const PathLossParams &p = scenario.pathloss(condition);
    return p.a_log_dist * std::log10(distance_m) + p.b_offset +
           p.c_log_freq * std::log10(band_hz / 5.0e9);
}

namespace
{

Vec3 rotate_z(const Vec3 &v, double yaw_rad)
{
    const double c = std::cos(yaw_rad);
    const double s = std::sin(yaw_rad);
    return Vec3(c * v.x() - s * v.y(), s * v.x() + c * v.y(), v.z());
}

} // namespace

ChannelSample synthesize_sample(const ClusterSet &set, const LinkState &state,
                                const AntennaConfig &tx_antenna, const AntennaConfig &rx_antenna,
                                double band_hz, double t, double total_loss_db,
                                double tx_yaw_rad, double rx_yaw_rad)
{
    if (tx_antenna.elements.empty() || rx_antenna.elements.empty())
        throw ContractError("synthesize_sample: station without antenna configuration");
    if (std::abs(set.t - t) > 1e-9 || std::abs(state.t - t) > 1e-9)
        throw ContractError("synthesize_sample: cluster set, state and t must share the instant");

    const double k_wave = 2.0 * kPi * band_hz / kSpeedOfLight;
    const double amp_scale = std::pow(10.0, -total_loss_db / 20.0);
    const int n_rx = rx_antenna.size();
    const int n_tx = tx_antenna.size();

    ChannelSample out;
    out.link_id = set.link_id;
    out.t = t;
    out.n_rx = n_rx;
    out.n_tx = n_tx;
    out.taps.assign(static_cast<size_t>(n_rx) * n_tx, {});

    const auto weights = set.effective_weights(t);

    for (size_t ci = 0; ci < set.clusters.size(); ++ci)
    {
        const Cluster &cluster = set.clusters[ci];
        const double w = weights[ci];
        if (w <= 0.0)
            continue;

        const int m_count = cluster.kind == ClusterKind::Direct ? 1 : cluster.n_subpaths;
        const double sub_amp = std::sqrt(w / m_count);

        for (int u = 0; u < n_rx; ++u)
        {
            const AntennaElement &rx_el = rx_antenna.elements[static_cast<size_t>(u)];
            const Vec3 rx_off = rotate_z(rx_el.offset_m, rx_yaw_rad);
            for (int s = 0; s < n_tx; ++s)
            {
                const AntennaElement &tx_el = tx_antenna.elements[static_cast<size_t>(s)];
                const Vec3 tx_off = rotate_z(tx_el.offset_m, tx_yaw_rad);

                std::complex<double> amp{0.0, 0.0};
                for (int m = 0; m < m_count; ++m)
                {
                    double aod = cluster.aod_deg;
                    double aoa = cluster.aoa_deg;
                    if (cluster.kind != ClusterKind::Direct)
                    {
                        aod += kSubpathOffsets[static_cast<size_t>(m)] * cluster.subpath_scale_deg;
                        aoa += kSubpathOffsets[static_cast<size_t>(m)] * cluster.subpath_scale_deg;
                    }
                    const Vec3 u_aod = azimuth_unit(aod);
                    const Vec3 u_aoa = azimuth_unit(aoa);

                    double phase = k_wave * (rx_off.dot(u_aoa) + tx_off.dot(u_aod));
                    switch (cluster.kind)
                    {
                    case ClusterKind::Direct:
                        // exact geometric phase of the line-of-sight ray
                        phase += -k_wave * state.distance_3d_m;
                        break;
                    case ClusterKind::Static:
                    {
                        const double doppler_hz =
                            (state.rx_vel.dot(u_aoa) + state.tx_vel.dot(u_aod)) * band_hz /
                            kSpeedOfLight;
                        phase += cluster.phases_rad[static_cast<size_t>(m)] +
                                 2.0 * kPi * doppler_hz * (t - cluster.birth_t);
                        break;
                    }
                    case ClusterKind::Dynamic:
                        // motion enters through the per-step geometric
                        // recomputation of the excess path length
                        phase += cluster.phases_rad[static_cast<size_t>(m)] -
                                 k_wave * kSpeedOfLight * cluster.delay_s;
                        break;
                    }

                    const std::complex<double> g_rx =
                        rx_el.pattern.at(aoa - rad2deg(rx_yaw_rad) -
                                         rad2deg(rx_el.boresight_yaw_rad));
                    const std::complex<double> g_tx =
                        tx_el.pattern.at(aod - rad2deg(tx_yaw_rad) -
                                         rad2deg(tx_el.boresight_yaw_rad));
                    amp += sub_amp * g_rx * g_tx * std::polar(1.0, phase);
                }

                Tap tap;
                tap.delay_s = cluster.delay_s;
                tap.amp = amp * amp_scale;
                out.taps[static_cast<size_t>(u) * n_tx + s].push_back(tap);
            }
        }
    }
    return out;
}

Eigen::MatrixXcd frequency_response(const ChannelSample &sample,
                                    std::span<const double> freq_offsets_hz)
{
    const size_t n_pairs = sample.taps.size();
    Eigen::MatrixXcd h(n_pairs, freq_offsets_hz.size());
    for (size_t p = 0; p < n_pairs; ++p)
        for (size_t f = 0; f < freq_offsets_hz.size(); ++f)
        {
            std::complex<double> acc{0.0, 0.0};
            for (const Tap &tap : sample.taps[p])
                acc += tap.amp *
                       std::polar(1.0, -2.0 * kPi * freq_offsets_hz[f] * tap.delay_s);
            h(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(f)) = acc;
        }
    return h;
}

namespace
{
constexpr char kCirMagic[8] = {'H', 'C', 'M', 'C', 'I', 'R', '0', '1'};
constexpr std::uint32_t kCirVersion = 1;

void put_u32(std::ofstream &out, std::uint32_t v)
{
    out.write(reinterpret_cast<const char *>(&v), 4);
}
std::uint32_t get_u32(std::ifstream &in)
{
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char *>(&v), 4);
    return v;
}
void put_f64(std::ofstream &out, double v)
{
    out.write(reinterpret_cast<const char *>(&v), 8);
}
double get_f64(std::ifstream &in)
{
    double v = 0.0;
    in.read(reinterpret_cast<char *>(&v), 8);
    return v;
}
} // namespace

void write_cir_binary(const std::vector<ChannelSample> &samples, const std::string &path)
{
    if (samples.empty())
        throw ContractError("write_cir_binary: no samples");
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write file: " + path);
    out.write(kCirMagic, 8);
    put_u32(out, kCirVersion);
    put_u32(out, static_cast<std::uint32_t>(samples.front().link_id));
    put_u32(out, static_cast<std::uint32_t>(samples.front().n_rx));
    put_u32(out, static_cast<std::uint32_t>(samples.front().n_tx));
    put_u32(out, static_cast<std::uint32_t>(samples.size()));
    for (const auto &sample : samples)
    {
        for (const auto &taps : sample.taps)
        {
            put_u32(out, static_cast<std::uint32_t>(taps.size()));
            for (const Tap &tap : taps)
            {
                put_f64(out, tap.delay_s);
                put_f64(out, tap.amp.real());
                put_f64(out, tap.amp.imag());
            }
        }
    }
    if (!out)
        throw Error("short write: " + path);
}

std::vector<ChannelSample> read_cir_binary(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError("cannot open file: " + path);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kCirMagic, 8) != 0)
        throw ParseError(path + ": bad magic, not an HCMCIR01 file");
    const std::uint32_t version = get_u32(in);
    if (version != kCirVersion)
        throw ParseError(path + ": unsupported HCMCIR version " + std::to_string(version));
    const std::uint32_t link_id = get_u32(in);
    const std::uint32_t n_rx = get_u32(in);
    const std::uint32_t n_tx = get_u32(in);
    const std::uint32_t n_steps = get_u32(in);
    std::vector<ChannelSample> samples;
    samples.reserve(n_steps);
    for (std::uint32_t k = 0; k < n_steps; ++k)
    {
        ChannelSample s;
        s.link_id = static_cast<int>(link_id);
        s.n_rx = static_cast<int>(n_rx);
        s.n_tx = static_cast<int>(n_tx);
        s.t = static_cast<double>(k); // step index; absolute times come from the link table
        s.taps.resize(static_cast<size_t>(n_rx) * n_tx);
        for (auto &taps : s.taps)
        {
            const std::uint32_t count = get_u32(in);
            taps.resize(count);
            for (auto &tap : taps)
            {
                tap.delay_s = get_f64(in);
                const double re = get_f64(in);
                const double im = get_f64(in);
                tap.amp = {re, im};
            }
        }
        if (!in)
            throw ParseError(path + ": truncated HCMCIR01 file");
        samples.push_back(std::move(s));
    }
    return samples;
}

std::string cir_csv_header()
{
    return "link_id,t,u,s,tap,delay_s,re,im\n";
}

void append_cir_csv(const ChannelSample &sample, std::string &csv)
{
    std::ostringstream out;
    for (int u = 0; u < sample.n_rx; ++u)
        for (int s = 0; s < sample.n_tx; ++s)
        {
            const auto &taps = sample.pair(u, s);
            for (size_t k = 0; k < taps.size(); ++k)
                out << sample.link_id << "," << format_double(sample.t) << "," << u << "," << s
                    << "," << k << "," << format_double(taps[k].delay_s) << ","
                    << format_double(taps[k].amp.real()) << ","
                    << format_double(taps[k].amp.imag()) << "\n";
        }
    csv += out.str();
}

} // namespace hcm
