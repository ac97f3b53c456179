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

#include "hcm/scenario.hpp"

#include "hcm/configfile.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

#ifndef HCM_DATA_DIR
#define HCM_DATA_DIR "data"
#endif

namespace hcm
{

namespace
{

const std::array<const char *, kNumLspParams> kLspSectionNames = {"ds", "k", "asd", "asa", "sf"};

// Symmetrize, check eigenvalues, clamp tiny negatives, renormalize diagonal.
Matrix5 repair(const Matrix5 &in, bool *clamped)
{
    Matrix5 sym = 0.5 * (in + in.transpose());
    if ((sym - in).cwiseAbs().maxCoeff() > 1e-9)
        throw ValidationError("lsp_cross_correlation: matrix is not symmetric");
    for (int i = 0; i < 5; ++i)
        if (std::abs(sym(i, i) - 1.0) > 1e-9)
            throw ValidationError("lsp_cross_correlation: diagonal entries must be 1");

    Eigen::SelfAdjointEigenSolver<Matrix5> eig(sym);
    const Vector5 values = eig.eigenvalues();
    if (values.minCoeff() < -1e-9)
        throw ValidationError("lsp_cross_correlation: not positive semi-definite (eigenvalue " +
                              std::to_string(values.minCoeff()) + ")");
    if (clamped)
        *clamped = false;
    if (values.minCoeff() >= 0.0)
        return sym;

    if (clamped)
        *clamped = true;
    Vector5 fixed = values.cwiseMax(0.0);
    Matrix5 out = eig.eigenvectors() * fixed.asDiagonal() * eig.eigenvectors().transpose();
    // renormalize to unit diagonal
    Vector5 d = out.diagonal().cwiseSqrt();
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            out(i, j) /= d(i) * d(j);
    return 0.5 * (out + out.transpose());
}

} // namespace

void ScenarioParams::validate_and_repair()
{
    if (scenario_id.empty())
        throw ValidationError("scenario_id: must not be empty");
    if (n_clusters < 1)
        throw ValidationError(scenario_id + ": n_clusters must be >= 1");
    if (!(delay_proportionality > 1.0))
        throw ValidationError(scenario_id + ": delay_proportionality (r_tau) must be > 1");
    if (per_cluster_shadow_sigma_db < 0.0)
        throw ValidationError(scenario_id + ": per_cluster_shadow_sigma_db must be >= 0");
    if (!(cluster_angle_spread_deg > 0.0))
        throw ValidationError(scenario_id + ": cluster_angle_spread_deg must be > 0");
    for (int c = 0; c < kNumConditions; ++c)
        for (int p = 0; p < kNumLspParams; ++p)
            if (!(d_corr_m[c][p] > 0.0))
                throw ValidationError(scenario_id + ": correlation distance for " +
                                      kLspParamNames[p] + " must be > 0");
    for (int p = 0; p < kNumLspParams; ++p)
        if (!(lsp[p].sigma >= 0.0) || !std::isfinite(lsp[p].mu))
            throw ValidationError(scenario_id + std::string(": bad mu/sigma for ") +
                                  kLspParamNames[p]);
    bool clamped = false;
    lsp_cross_correlation = repair(lsp_cross_correlation, &clamped);
    if (clamped)
        std::fprintf(stderr,
                     "warning: %s: cross-correlation eigenvalues clamped to zero and the "
                     "matrix renormalized\n",
                     scenario_id.c_str());
}

bool psd_repair_clamped(const Matrix5 &original)
{
    bool clamped = false;
    (void)repair(original, &clamped);
    return clamped;
}

Matrix5 psd_lower_factor(const Matrix5 &m)
{
    Matrix5 l = Matrix5::Zero();
    for (int j = 0; j < 5; ++j)
    {
        double d = m(j, j);
        for (int k = 0; k < j; ++k)
            d -= l(j, k) * l(j, k);
        if (d <= 1e-12)
        {
            l(j, j) = 0.0; // rank-deficient direction; column stays zero
            continue;
        }
        l(j, j) = std::sqrt(d);
        for (int i = j + 1; i < 5; ++i)
        {
            double s = m(i, j);
            for (int k = 0; k < j; ++k)
                s -= l(i, k) * l(j, k);
            l(i, j) = s / l(j, j);
        }
    }
    return l;
}

ScenarioParams ScenarioParams::from_text(const std::string &text)
{
    ConfigDoc doc = ConfigDoc::parse(text);
    ConfigReader r(doc);

    ScenarioParams p;
    p.scenario_id = r.require_string("", "scenario_id");
    p.n_clusters = static_cast<int>(r.get_int("", "n_clusters", p.n_clusters));
    p.delay_proportionality = r.get_real("", "delay_proportionality", p.delay_proportionality);
    p.per_cluster_shadow_sigma_db =
        r.get_real("", "per_cluster_shadow_sigma_db", p.per_cluster_shadow_sigma_db);
    p.cluster_angle_spread_deg =
        r.get_real("", "cluster_angle_spread_deg", p.cluster_angle_spread_deg);

    p.pathloss_los.a_log_dist = r.require_real("pathloss.los", "a");
    p.pathloss_los.b_offset = r.require_real("pathloss.los", "b");
    p.pathloss_los.c_log_freq = r.require_real("pathloss.los", "c");
    p.pathloss_nlos.a_log_dist = r.require_real("pathloss.nlos", "a");
    p.pathloss_nlos.b_offset = r.require_real("pathloss.nlos", "b");
    p.pathloss_nlos.c_log_freq = r.require_real("pathloss.nlos", "c");

    for (int i = 0; i < kNumLspParams; ++i)
    {
        const std::string sec = std::string("lsp.") + kLspSectionNames[i];
        p.lsp[i].mu = r.require_real(sec, "mu");
        p.lsp[i].sigma = r.require_real(sec, "sigma");
        p.d_corr_m[0][i] = r.require_real(sec, "dcorr_los_m");
        p.d_corr_m[1][i] = r.require_real(sec, "dcorr_nlos_m");
    }

    for (int i = 0; i < kNumLspParams; ++i)
    {
        const std::string key = std::string("row_") + kLspSectionNames[i];
        auto row = r.get_numbers("cross_correlation", key, {});
        if (row.size() != kNumLspParams)
            throw ValidationError(p.scenario_id + ": cross_correlation." + key +
                                  " must have 5 entries");
        for (int j = 0; j < kNumLspParams; ++j)
            p.lsp_cross_correlation(i, j) = row[static_cast<size_t>(j)];
    }

    r.reject_unknown();
    p.validate_and_repair();
    return p;
}

ScenarioParams ScenarioParams::from_file(const std::string &path)
{
    try
    {
        return from_text(read_text_file(path));
    }
    catch (const Error &e)
    {
        throw ValidationError(path + ": " + e.what());
    }
}

std::string default_data_dir()
{
    return HCM_DATA_DIR;
}

std::map<std::string, ScenarioParams> builtin_scenarios(const std::string &data_dir)
{
    namespace fs = std::filesystem;
    const fs::path dir = fs::path(data_dir) / "scenarios";
    if (!fs::is_directory(dir))
        throw ConfigError("scenario directory not found: " + dir.string());
    std::map<std::string, ScenarioParams> out;
    std::vector<fs::path> files;
    for (const auto &entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".scen")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto &f : files)
    {
        ScenarioParams p = ScenarioParams::from_file(f.string());
        out[p.scenario_id] = std::move(p);
    }
    for (const char *required : {"urban_v2i", "urban_v2v", "highway_v2v"})
        if (!out.count(required))
            throw ConfigError(std::string("missing builtin scenario file for ") + required);
    return out;
}

} // namespace hcm
