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

#include "hcm/lsp.hpp"

#include "hcm/configfile.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

namespace hcm
{

namespace
{

// Smallest 5-smooth integer >= n; keeps the FFT fast for arbitrary grids.
int fft_friendly_size(int n)
{
    for (int m = n;; ++m)
    {
        int r = m;
        for (int p : {2, 3, 5})
            while (r % p == 0)
                r /= p;
        if (r == 1)
            return m;
    }
}

// In-place 2-D DFT built from per-axis 1-D transforms. fwd is unnormalized,
// inv carries the 1/N scaling, matching the usual DFT pair.
void fft2(Eigen::MatrixXcd &m, bool forward)
{
    Eigen::FFT<double> fft;
    Eigen::VectorXcd in(m.rows());
    Eigen::VectorXcd out(m.rows());
    for (Eigen::Index j = 0; j < m.cols(); ++j)
    {
        in = m.col(j);
        if (forward)
            fft.fwd(out, in);
        else
            fft.inv(out, in);
        m.col(j) = out;
    }
    in.resize(m.cols());
    out.resize(m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
    {
        in = m.row(i).transpose();
        if (forward)
            fft.fwd(out, in);
        else
            fft.inv(out, in);
        m.row(i) = out.transpose();
    }
}

} // namespace

LspGridSpec LspGridSpec::for_extent(double extent_m, double cell_size_m)
{
    LspGridSpec s;
    s.origin = Vec3::Zero();
    s.cell_size_m = cell_size_m;
    s.nx = static_cast<int>(std::floor(extent_m / cell_size_m)) + 1;
    s.ny = s.nx;
    return s;
}

double LspField::value_at(const Vec3 &p) const
{
    const int n_x = nx();
    const int n_y = ny();
    double u = (p.x() - origin.x()) / cell_size_m;
    double v = (p.y() - origin.y()) / cell_size_m;
    u = std::clamp(u, 0.0, static_cast<double>(n_x - 1));
    v = std::clamp(v, 0.0, static_cast<double>(n_y - 1));
    const int i0 = std::min(static_cast<int>(std::floor(u)), n_x - 2 >= 0 ? n_x - 2 : 0);
    const int j0 = std::min(static_cast<int>(std::floor(v)), n_y - 2 >= 0 ? n_y - 2 : 0);
    const int i1 = std::min(i0 + 1, n_x - 1);
    const int j1 = std::min(j0 + 1, n_y - 1);
    const double fu = u - i0;
    const double fv = v - j0;
    return grid(i0, j0) * (1 - fu) * (1 - fv) + grid(i1, j0) * fu * (1 - fv) +
           grid(i0, j1) * (1 - fu) * fv + grid(i1, j1) * fu * fv;
}

LspField generate_lsp_field(const LspGridSpec &spec, double d_corr_m, LspParam param,
                            Condition condition, RandomStream &stream)
{
    if (!(d_corr_m > 0.0))
        throw ConfigError("lsp field: d_corr must be > 0");
    if (spec.cell_size_m > d_corr_m / 2.0)
        throw ConfigError("lsp field: cell_size " + std::to_string(spec.cell_size_m) +
                          " m violates the sampling rule cell_size <= d_corr/2 (d_corr " +
                          std::to_string(d_corr_m) + " m)");
    if (spec.nx < 2 || spec.ny < 2)
        throw ConfigError("lsp field: grid must be at least 2x2");

    // generate on a padded 5-smooth torus and crop to the requested grid
    const int nx = spec.nx;
    const int ny = spec.ny;
    const int px = fft_friendly_size(nx);
    const int py = fft_friendly_size(ny);
    const double n_total = static_cast<double>(px) * py;

    // filter amplitude sqrt(S) for the torus-sampled target autocorrelation;
    // cached because every field of a map set shares grid and d_corr values
    static std::mutex cache_mutex;
    static std::map<std::tuple<int, int, double, double>, Eigen::ArrayXXd> cache;
    Eigen::ArrayXXd spectrum;
    double spectrum_sum = 0.0;
    {
        const auto key = std::make_tuple(px, py, spec.cell_size_m, d_corr_m);
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = cache.find(key);
        if (it == cache.end())
        {
            Eigen::MatrixXcd kernel(px, py);
            for (int i = 0; i < px; ++i)
            {
                const double di = std::min(i, px - i) * spec.cell_size_m;
                for (int j = 0; j < py; ++j)
                {
                    const double dj = std::min(j, py - j) * spec.cell_size_m;
                    kernel(i, j) = std::exp(-std::hypot(di, dj) / d_corr_m);
                }
            }
            fft2(kernel, true);
            // the spectrum is real by symmetry; clamp tiny negatives from the
            // non-realizable grid truncation
            Eigen::ArrayXXd amp(px, py);
            for (int i = 0; i < px; ++i)
                for (int j = 0; j < py; ++j)
                    amp(i, j) = std::sqrt(std::max(kernel(i, j).real(), 0.0));
            if (cache.size() >= 16)
                cache.clear();
            it = cache.emplace(key, std::move(amp)).first;
        }
        spectrum = it->second;
    }
    spectrum_sum = spectrum.square().sum();

    // white noise, fixed traversal order
    Eigen::MatrixXcd field(px, py);
    for (int i = 0; i < px; ++i)
        for (int j = 0; j < py; ++j)
            field(i, j) = std::complex<double>(stream.gaussian(), 0.0);

    fft2(field, true);
    for (int i = 0; i < px; ++i)
        for (int j = 0; j < py; ++j)
            field(i, j) *= spectrum(i, j);
    fft2(field, false);

    // theoretical output variance is (1/N) * sum(S); renormalize to exactly
    // unit variance so the marginals stay standard normal
    const double sigma = std::sqrt(spectrum_sum / n_total);

    LspField out;
    out.grid.resize(nx, ny);
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
            out.grid(i, j) = field(i, j).real() / sigma;
    out.origin = spec.origin;
    out.cell_size_m = spec.cell_size_m;
    out.d_corr_m = d_corr_m;
    out.param = param;
    out.condition = condition;
    return out;
}

LspMapSet generate_lsp_maps(int tx_node_id, int band_index, const LspGridSpec &spec,
                            const ScenarioParams &scenario, std::uint64_t master_seed)
{
    LspMapSet maps;
    maps.tx_node_id = tx_node_id;
    maps.band_index = band_index;
    for (int p = 0; p < kNumLspParams; ++p)
        for (int c = 0; c < kNumConditions; ++c)
        {
            // one named sub-stream per field: entity id mixes tx and field
            const std::uint64_t field_id =
                (static_cast<std::uint64_t>(tx_node_id) << 8) | static_cast<std::uint64_t>(p * 2 + c);
            auto stream = substream(master_seed, "lsp.field", field_id,
                                    static_cast<std::uint64_t>(band_index));
            maps.fields[static_cast<size_t>(p)][static_cast<size_t>(c)] = generate_lsp_field(
                spec, scenario.d_corr(static_cast<LspParam>(p), static_cast<Condition>(c)),
                static_cast<LspParam>(p), static_cast<Condition>(c), stream);
        }
    return maps;
}

Vector5 raw_lsps_at(const LspMapSet &maps, const Vec3 &rx_pos, Condition condition)
{
    Vector5 g;
    for (int p = 0; p < kNumLspParams; ++p)
        g(p) = maps.field(static_cast<LspParam>(p), condition).value_at(rx_pos);
    return g;
}

LspSet sample_lsps(const LspMapSet &maps, const Vec3 &rx_pos, Condition condition,
                   const ScenarioParams &scenario)
{
    if (maps.tx_node_id < 0)
        throw QueryError("sample_lsps: map set is not initialized");
    const Vector5 raw = raw_lsps_at(maps, rx_pos, condition);
    const Matrix5 l = psd_lower_factor(scenario.lsp_cross_correlation);
    const Vector5 g = l * raw;

    const auto &dist = scenario.lsp;
    LspSet out;
    out.delay_spread_s = std::pow(10.0, dist[0].mu + dist[0].sigma * g(0));
    out.k_factor_db = dist[1].mu + dist[1].sigma * g(1);
    out.asd_deg = std::min(std::pow(10.0, dist[2].mu + dist[2].sigma * g(2)), kAngleSpreadCapDeg);
    out.asa_deg = std::min(std::pow(10.0, dist[3].mu + dist[3].sigma * g(3)), kAngleSpreadCapDeg);
    out.shadow_fading_db = dist[4].sigma * g(4);
    return out;
}

namespace
{
constexpr char kLspMagic[8] = {'H', 'C', 'M', 'L', 'S', 'P', '0', '1'};
}

void write_lsp_field_binary(const LspField &field, const std::string &path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write file: " + path);
    out.write(kLspMagic, 8);
    const std::uint32_t nx = static_cast<std::uint32_t>(field.nx());
    const std::uint32_t ny = static_cast<std::uint32_t>(field.ny());
    const double ox = field.origin.x();
    const double oy = field.origin.y();
    const double cs = field.cell_size_m;
    out.write(reinterpret_cast<const char *>(&nx), 4);
    out.write(reinterpret_cast<const char *>(&ny), 4);
    out.write(reinterpret_cast<const char *>(&ox), 8);
    out.write(reinterpret_cast<const char *>(&oy), 8);
    out.write(reinterpret_cast<const char *>(&cs), 8);
    for (int j = 0; j < field.ny(); ++j)
        for (int i = 0; i < field.nx(); ++i)
        {
            const double v = field.grid(i, j);
            out.write(reinterpret_cast<const char *>(&v), 8);
        }
    if (!out)
        throw Error("short write: " + path);
}

LspField read_lsp_field_binary(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError("cannot open file: " + path);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kLspMagic, 8) != 0)
        throw ParseError(path + ": bad magic, not an HCMLSP01 file");
    std::uint32_t nx = 0;
    std::uint32_t ny = 0;
    double ox = 0.0;
    double oy = 0.0;
    double cs = 0.0;
    in.read(reinterpret_cast<char *>(&nx), 4);
    in.read(reinterpret_cast<char *>(&ny), 4);
    in.read(reinterpret_cast<char *>(&ox), 8);
    in.read(reinterpret_cast<char *>(&oy), 8);
    in.read(reinterpret_cast<char *>(&cs), 8);
    LspField f;
    f.origin = Vec3(ox, oy, 0.0);
    f.cell_size_m = cs;
    f.grid.resize(nx, ny);
    for (std::uint32_t j = 0; j < ny; ++j)
        for (std::uint32_t i = 0; i < nx; ++i)
        {
            double v;
            in.read(reinterpret_cast<char *>(&v), 8);
            f.grid(i, j) = v;
        }
    if (!in)
        throw ParseError(path + ": truncated HCMLSP01 file");
    return f;
}

void write_lsp_field_csv(const LspField &field, const std::string &path)
{
    std::ostringstream out;
    out << "ix,iy,x,y,value\n";
    for (int j = 0; j < field.ny(); ++j)
        for (int i = 0; i < field.nx(); ++i)
            out << i << "," << j << "," << format_double(field.origin.x() + i * field.cell_size_m)
                << "," << format_double(field.origin.y() + j * field.cell_size_m) << ","
                << format_double(field.grid(i, j)) << "\n";
    write_text_file(path, out.str());
}

} // namespace hcm
