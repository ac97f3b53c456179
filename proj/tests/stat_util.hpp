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

#ifndef HCM_STAT_UTIL_HPP
#define HCM_STAT_UTIL_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

namespace hcm::test
{

inline double normal_cdf(double x)
{
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

// Two-sided Kolmogorov-Smirnov statistic against the standard normal.
inline double ks_statistic_normal(std::vector<double> samples)
{
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (size_t i = 0; i < samples.size(); ++i)
    {
        const double f = normal_cdf(samples[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    return d;
}

// Asymptotic critical value; alpha = 0.01 gives c = 1.6276.
inline double ks_critical(size_t n, double alpha = 0.01)
{
    const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
    return c / std::sqrt(static_cast<double>(n));
}

// Empirical autocorrelation of a (zero-mean) grid at an integer cell lag,
// averaged over both axis directions and all admissible positions.
inline double grid_autocorrelation(const Eigen::ArrayXXd &g, int lag)
{
    const int nx = static_cast<int>(g.rows());
    const int ny = static_cast<int>(g.cols());
    double num = 0.0;
    double count = 0.0;
    double var = 0.0;
    double var_count = 0.0;
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
        {
            var += g(i, j) * g(i, j);
            var_count += 1.0;
            if (i + lag < nx)
            {
                num += g(i, j) * g(i + lag, j);
                count += 1.0;
            }
            if (j + lag < ny)
            {
                num += g(i, j) * g(i, j + lag);
                count += 1.0;
            }
        }
    return (num / count) / (var / var_count);
}

inline double pearson(const std::vector<double> &a, const std::vector<double> &b)
{
    const size_t n = a.size();
    double ma = 0.0;
    double mb = 0.0;
    for (size_t i = 0; i < n; ++i)
    {
        ma += a[i];
        mb += b[i];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double num = 0.0;
    double va = 0.0;
    double vb = 0.0;
    for (size_t i = 0; i < n; ++i)
    {
        num += (a[i] - ma) * (b[i] - mb);
        va += (a[i] - ma) * (a[i] - ma);
        vb += (b[i] - mb) * (b[i] - mb);
    }
    return num / std::sqrt(va * vb);
}

// Decorrelated subsample of a field grid: every `stride`-th point per axis.
inline std::vector<double> grid_subsample(const Eigen::ArrayXXd &g, int stride)
{
    std::vector<double> out;
    for (int i = 0; i < g.rows(); i += stride)
        for (int j = 0; j < g.cols(); j += stride)
            out.push_back(g(i, j));
    return out;
}

} // namespace hcm::test

#endif
