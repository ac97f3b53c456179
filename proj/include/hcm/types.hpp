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

#ifndef HCM_TYPES_HPP
#define HCM_TYPES_HPP

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hcm
{

// Position / direction in a local East-North-Up frame, meters.
using Vec3 = Eigen::Vector3d;

// Propagation speed used throughout the simulation (m/s).
inline constexpr double kSpeedOfLight = 3.0e8;

inline constexpr double kPi = 3.14159265358979323846;

inline double deg2rad(double deg) { return deg * kPi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / kPi; }

// Power ratios: linear <-> dB.
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

// Wrap an angle in degrees to [0, 360).
inline double wrap_deg_360(double a)
{
    double w = std::fmod(a, 360.0);
    if (w < 0.0)
        w += 360.0;
    return w;
}

// Wrap an angle in degrees to (-180, 180].
inline double wrap_deg_pm180(double a)
{
    double w = std::fmod(a + 180.0, 360.0);
    if (w <= 0.0)
        w += 360.0;
    return w - 180.0;
}

// Azimuth of the xy-projection of v, degrees in (-180, 180], East = 0, North = 90.
inline double azimuth_deg(const Vec3 &v) { return rad2deg(std::atan2(v.y(), v.x())); }

// Unit direction vector for an azimuth given in degrees (z = 0, azimuth-only model).
inline Vec3 azimuth_unit(double deg)
{
    const double r = deg2rad(deg);
    return Vec3(std::cos(r), std::sin(r), 0.0);
}

inline bool finite(const Vec3 &v)
{
    return std::isfinite(v.x()) && std::isfinite(v.y()) && std::isfinite(v.z());
}

// Error taxonomy. Everything derives from Error so callers can catch broadly;
// the CLI maps ConfigError/ParseError/ValidationError to exit code 2 and the
// rest to 3.
struct Error : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

// Malformed input document (config, geometry exchange, CSV, ...).
struct ParseError : Error
{
    using Error::Error;
};

// A loaded value violates a stated invariant; message names the field/object.
struct ValidationError : Error
{
    using Error::Error;
};

// Bad or incomplete simulation configuration discovered after parsing.
struct ConfigError : Error
{
    using Error::Error;
};

// Query outside the defined domain (time outside active intervals, empty road graph, ...).
struct QueryError : Error
{
    using Error::Error;
};

// Caller broke an API contract (mismatched link, missing antenna, ...).
struct ContractError : Error
{
    using Error::Error;
};

// Generation cannot proceed (playground too small, rejection sampling exhausted, ...).
struct GenerationError : Error
{
    using Error::Error;
};

} // namespace hcm

#endif
