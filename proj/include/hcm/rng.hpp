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

#ifndef HCM_RNG_HPP
#define HCM_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace hcm
{

// All randomness in the pipeline derives from the master seed through named
// sub-streams: child = substream_seed(master, module_tag, entity_id, band).
// Inserting or removing one entity therefore never perturbs the randomness of
// any other entity. The raw engine output is fully specified by the standard
// (mt19937_64) and the uniform/gaussian transforms below are implemented
// explicitly, so equal seeds give bit-identical sequences on any platform.
class RandomStream
{
  public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on the open interval (0, 1).
    double uniform()
    {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller; the second member of each pair is cached.
    double gaussian()
    {
        if (has_spare_)
        {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * 3.14159265358979323846 * u2);
        has_spare_ = true;
        return r * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    // Uniform integer in [0, n). Modulo bias is below 2^-50 for the small n
    // used here (junction choices, sign flips).
    std::uint64_t uniform_index(std::uint64_t n) { return engine_() % n; }

    // Random sign, +1 or -1.
    double sign() { return uniform() < 0.5 ? -1.0 : 1.0; }

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

namespace detail
{
// SplitMix64 finalizer; good avalanche for seed mixing.
inline std::uint64_t mix64(std::uint64_t z)
{
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t fnv1a(std::string_view s)
{
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s)
    {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}
} // namespace detail

// Derive the seed of a named sub-stream from the master seed. Tags in use are
// listed in the run manifest.
inline std::uint64_t substream_seed(std::uint64_t master, std::string_view module_tag,
                                    std::uint64_t entity_id = 0, std::uint64_t band_index = 0)
{
    std::uint64_t s = detail::mix64(master ^ detail::fnv1a(module_tag));
    s = detail::mix64(s ^ entity_id);
    s = detail::mix64(s ^ band_index);
    return s;
}

inline RandomStream substream(std::uint64_t master, std::string_view module_tag,
                              std::uint64_t entity_id = 0, std::uint64_t band_index = 0)
{
    return RandomStream(substream_seed(master, module_tag, entity_id, band_index));
}

} // namespace hcm

#endif
