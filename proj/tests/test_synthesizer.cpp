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

#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace hcm;

namespace
{

AntennaConfig iso_antenna(int elements = 1, double spacing_m = 0.025)
{
    AntennaSpec spec;
    spec.elements = elements;
    spec.spacing_m = spacing_m;
    return AntennaConfig::from_spec(spec);
}

LinkState head_on_state(double t, double distance, double rx_speed = 0.0)
{
    LinkState s;
    s.t = t;
    s.tx_pos = Vec3(0, 0, 1.5);
    s.rx_pos = Vec3(distance, 0, 1.5);
    s.rx_vel = Vec3(-rx_speed, 0, 0); // closing when rx_speed > 0
    s.distance_3d_m = distance;
    return s;
}

// Single direct cluster with unit power at the given angles.
ClusterSet direct_only_set(double t, double aod_deg, double aoa_deg, int link_id = 0)
{
    ClusterSet set;
    set.link_id = link_id;
    set.t = t;
    set.los = Condition::LOS;
    Cluster c;
    c.id = 0;
    c.kind = ClusterKind::Direct;
    c.delay_s = 0.0;
    c.power = 1.0;
    c.aod_deg = aod_deg;
    c.aoa_deg = aoa_deg;
    c.n_subpaths = 1;
    c.birth_t = 0.0;
    set.clusters.push_back(c);
    return set;
}

ScenarioParams test_scenario()
{
    return builtin_scenarios(test::data_dir()).at("urban_v2v");
}

} // namespace

TEST_CASE("path_loss_db: formula anchors")
{
    ScenarioParams scen = test_scenario();
    scen.pathloss_los = {22.7, 41.0, 20.0};

    // distance 1 m: only the offset remains
    CHECK(path_loss_db(1.0, 5.0e9, scen, Condition::LOS) == doctest::Approx(41.0));
    // 5 GHz: the frequency term vanishes
    CHECK(path_loss_db(100.0, 5.0e9, scen, Condition::LOS) ==
          doctest::Approx(22.7 * 2.0 + 41.0).epsilon(1e-12));
    // direct formula evaluation at 100 m, 5.9 GHz:
    // 22.7*2 + 41.0 + 20*log10(1.18) = 87.84 dB
    const double expect = 22.7 * 2.0 + 41.0 + 20.0 * std::log10(5.9 / 5.0);
    CHECK(path_loss_db(100.0, 5.9e9, scen, Condition::LOS) ==
          doctest::Approx(expect).epsilon(1e-12));
    CHECK(path_loss_db(100.0, 5.9e9, scen, Condition::LOS) ==
          doctest::Approx(87.84).epsilon(1e-4));

    // condition selects the triple
    CHECK(path_loss_db(100.0, 5.0e9, scen, Condition::NLOS) !=
          path_loss_db(100.0, 5.0e9, scen, Condition::LOS));

    CHECK_THROWS_AS(path_loss_db(0.0, 5.9e9, scen, Condition::LOS), QueryError);
    CHECK_THROWS_AS(path_loss_db(-3.0, 5.9e9, scen, Condition::LOS), QueryError);
}

TEST_CASE("synthesize_sample: single unit-power direct cluster has unit magnitude")
{
    const ClusterSet set = direct_only_set(0.0, 0.0, 180.0);
    const LinkState state = head_on_state(0.0, 123.4);
    const AntennaConfig iso = iso_antenna();
    const ChannelSample out =
        synthesize_sample(set, state, iso, iso, 5.9e9, 0.0, 0.0, 0.0, 0.0);
    REQUIRE(out.taps.size() == 1);
    REQUIRE(out.pair(0, 0).size() == 1);
    CHECK(std::abs(out.pair(0, 0)[0].amp) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(out.pair(0, 0)[0].delay_s == 0.0);

    // loss scaling: 20 dB -> amplitude /10
    const ChannelSample lossy =
        synthesize_sample(set, state, iso, iso, 5.9e9, 0.0, 20.0, 0.0, 0.0);
    CHECK(std::abs(lossy.pair(0, 0)[0].amp) == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("synthesize_sample: head-on Doppler matches the analytic 590 Hz")
{
    // rx approaching tx at 30 m/s, 5.9 GHz: nu = 30 * 5.9e9 / 3e8 = 590 Hz
    const double band = 5.9e9;
    const double speed = 30.0;
    const double h = 1e-6;
    const AntennaConfig iso = iso_antenna();

    const double d0 = 100.0;
    const LinkState s0 = head_on_state(0.0, d0, speed);
    LinkState s1 = head_on_state(h, d0 - speed * h, speed);

    const ClusterSet set0 = direct_only_set(0.0, 0.0, 180.0);
    ClusterSet set1 = set0;
    set1.t = h;

    const auto a0 = synthesize_sample(set0, s0, iso, iso, band, 0.0, 0.0, 0.0, 0.0);
    const auto a1 = synthesize_sample(set1, s1, iso, iso, band, h, 0.0, 0.0, 0.0);
    double dphi = std::arg(a1.pair(0, 0)[0].amp) - std::arg(a0.pair(0, 0)[0].amp);
    while (dphi > kPi)
        dphi -= 2 * kPi;
    while (dphi <= -kPi)
        dphi += 2 * kPi;
    const double doppler = dphi / (2 * kPi * h);
    CHECK(doppler == doctest::Approx(speed * band / kSpeedOfLight).epsilon(1e-6));
    CHECK(doppler == doctest::Approx(590.0).epsilon(1e-6));
    CHECK(doppler > 0.0); // closing geometry gives positive Doppler
}

TEST_CASE("synthesize_sample: static-cluster Doppler term via finite differences")
{
    // one static cluster, rx moving; phase rate must equal the formula value
    const double band = 5.9e9;
    ClusterSet set;
    set.link_id = 0;
    set.t = 0.0;
    set.los = Condition::NLOS;
    Cluster c;
    c.kind = ClusterKind::Static;
    c.delay_s = 100e-9;
    c.power = 1.0;
    c.aod_deg = 30.0;
    c.aoa_deg = 100.0;
    c.subpath_scale_deg = 0.0; // collapse sub-paths onto the mean angle
    c.n_subpaths = 1;
    c.birth_t = 0.0;
    set.clusters.push_back(c);

    LinkState s0 = head_on_state(0.0, 100.0);
    s0.rx_vel = Vec3(12.0, -5.0, 0.0);
    s0.tx_vel = Vec3(-3.0, 7.0, 0.0);

    const double h = 1e-6;
    ClusterSet set1 = set;
    set1.t = h;
    LinkState s1 = s0;
    s1.t = h;

    const AntennaConfig iso = iso_antenna();
    const auto a0 = synthesize_sample(set, s0, iso, iso, band, 0.0, 0.0, 0.0, 0.0);
    const auto a1 = synthesize_sample(set1, s1, iso, iso, band, h, 0.0, 0.0, 0.0);
    double dphi = std::arg(a1.pair(0, 0)[0].amp) - std::arg(a0.pair(0, 0)[0].amp);
    while (dphi > kPi)
        dphi -= 2 * kPi;
    while (dphi <= -kPi)
        dphi += 2 * kPi;

    const Vec3 u_aoa = azimuth_unit(100.0);
    const Vec3 u_aod = azimuth_unit(30.0);
    const double expect = (s0.rx_vel.dot(u_aoa) + s0.tx_vel.dot(u_aod)) * band / kSpeedOfLight;
    CHECK(dphi / (2 * kPi * h) == doctest::Approx(expect).epsilon(1e-6));
}

TEST_CASE("synthesize_sample: array phase across two half-wavelength elements")
{
    const double band = 5.9e9;
    const double lambda = kSpeedOfLight / band;
    const AntennaConfig rx2 = iso_antenna(2, lambda / 2.0); // along body y
    const AntennaConfig tx1 = iso_antenna();

    // plane wave from 0 degrees (east): offsets are broadside, no phase shift
    {
        const ClusterSet set = direct_only_set(0.0, 0.0, 0.0);
        const LinkState state = head_on_state(0.0, 50.0);
        const auto out = synthesize_sample(set, state, tx1, rx2, band, 0.0, 0.0, 0.0, 0.0);
        const double d = std::arg(out.pair(1, 0)[0].amp) - std::arg(out.pair(0, 0)[0].amp);
        CHECK(std::abs(std::remainder(d, 2 * kPi)) < 1e-9);
    }
    // plane wave from 90 degrees (north, endfire): half-wavelength spacing
    // gives a pi phase difference
    {
        const ClusterSet set = direct_only_set(0.0, 90.0, 90.0);
        const LinkState state = head_on_state(0.0, 50.0);
        const auto out = synthesize_sample(set, state, tx1, rx2, band, 0.0, 0.0, 0.0, 0.0);
        const double d = std::arg(out.pair(1, 0)[0].amp) - std::arg(out.pair(0, 0)[0].amp);
        CHECK(std::abs(std::abs(std::remainder(d, 2 * kPi))) == doctest::Approx(kPi).epsilon(1e-9));
    }
}

TEST_CASE("synthesize_sample: pattern scaling is exactly linear")
{
    const std::complex<double> gamma{1.3, -0.7};
    AntennaConfig plain = iso_antenna();
    AntennaConfig scaled = plain;
    scaled.elements[0].pattern.gains[0] *= gamma;

    ClusterSet set = direct_only_set(0.0, 10.0, 170.0);
    // add a static cluster so several taps are exercised
    Cluster c;
    c.kind = ClusterKind::Static;
    c.delay_s = 80e-9;
    c.power = 0.4;
    c.aod_deg = 45.0;
    c.aoa_deg = -60.0;
    c.subpath_scale_deg = 5.0;
    c.n_subpaths = kSubpathsPerCluster;
    for (size_t m = 0; m < c.phases_rad.size(); ++m)
        c.phases_rad[m] = 0.37 * static_cast<double>(m);
    set.clusters.push_back(c);

    const LinkState state = head_on_state(0.0, 75.0);
    const auto base = synthesize_sample(set, state, plain, plain, 5.9e9, 0.0, 0.0, 0.0, 0.0);
    const auto with_rx = synthesize_sample(set, state, plain, scaled, 5.9e9, 0.0, 0.0, 0.0, 0.0);
    for (size_t tap = 0; tap < base.pair(0, 0).size(); ++tap)
    {
        const auto expect = base.pair(0, 0)[tap].amp * gamma;
        CHECK(std::abs(with_rx.pair(0, 0)[tap].amp - expect) < 1e-12);
    }
}

TEST_CASE("synthesize_sample: determinism and contract checks")
{
    ClusterSet set = direct_only_set(0.0, 0.0, 180.0);
    const LinkState state = head_on_state(0.0, 60.0);
    const AntennaConfig iso = iso_antenna();
    const auto a = synthesize_sample(set, state, iso, iso, 5.9e9, 0.0, 3.0, 0.1, -0.2);
    const auto b = synthesize_sample(set, state, iso, iso, 5.9e9, 0.0, 3.0, 0.1, -0.2);
    REQUIRE(a.pair(0, 0).size() == b.pair(0, 0).size());
    CHECK(a.pair(0, 0)[0].amp == b.pair(0, 0)[0].amp); // bit-identical

    AntennaConfig empty;
    CHECK_THROWS_AS(synthesize_sample(set, state, empty, iso, 5.9e9, 0.0, 0.0, 0.0, 0.0),
                    ContractError);
    CHECK_THROWS_AS(synthesize_sample(set, state, iso, iso, 5.9e9, 1.0, 0.0, 0.0, 0.0),
                    ContractError); // t mismatch
}

TEST_CASE("mean-power calibration at reduced scale")
{
    // unit-power nLOS set, isotropic antennas, no losses: the ensemble mean of
    // |h|^2 over phase redraws is 1 (the acceptance suite runs the full size)
    const ScenarioParams scen = [] {
        ScenarioParams p = test_scenario();
        p.n_clusters = 12;
        return p;
    }();
    LspSet lsps;
    lsps.delay_spread_s = 100e-9;
    lsps.k_factor_db = 0.0;
    lsps.asd_deg = 30.0;
    lsps.asa_deg = 30.0;

    LinkState state = head_on_state(0.0, 100.0);
    state.los = Condition::NLOS; // K-factor-free scatter-only set
    const AntennaConfig iso = iso_antenna();
    RandomStream stream(31);
    double acc = 0.0;
    const int redraws = 2000;
    for (int i = 0; i < redraws; ++i)
    {
        ClusterSet set = generate_static_clusters(lsps, state, scen, stream, test::data_dir());
        set.link_id = 0;
        const auto sample = synthesize_sample(set, state, iso, iso, 5.9e9, 0.0, 0.0, 0.0, 0.0);
        double h2 = 0.0;
        for (const auto &tap : sample.pair(0, 0))
            h2 += std::norm(tap.amp);
        acc += h2;
    }
    CHECK(acc / redraws == doctest::Approx(1.0).epsilon(0.06));
}

TEST_CASE("frequency_response: anchors and independent-sum oracle")
{
    ChannelSample s;
    s.link_id = 0;
    s.n_rx = 1;
    s.n_tx = 1;
    s.taps.resize(1);

    SUBCASE("single tap, zero delay")
    {
        s.taps[0].push_back({0.0, {0.3, -0.4}});
        const std::vector<double> freqs = {0.0, 1e6, 5e8};
        const auto h = frequency_response(s, freqs);
        for (int f = 0; f < 3; ++f)
            CHECK(std::abs(h(0, f) - std::complex<double>(0.3, -0.4)) < 1e-15);
    }
    SUBCASE("single tap at half period flips sign")
    {
        const double tau = 50e-9;
        s.taps[0].push_back({tau, {1.0, 0.0}});
        const std::vector<double> freqs = {1.0 / (2.0 * tau)};
        const auto h = frequency_response(s, freqs);
        CHECK(std::abs(h(0, 0) - std::complex<double>(-1.0, 0.0)) < 1e-12);
    }
    SUBCASE("ten random taps match a direct sum to 1e-12")
    {
        RandomStream rng(9);
        for (int i = 0; i < 10; ++i)
            s.taps[0].push_back({rng.uniform(0, 1e-6),
                                 std::complex<double>(rng.uniform(-1, 1), rng.uniform(-1, 1))});
        const std::vector<double> freqs = {-2e7, 0.0, 1.3e7, 9e7};
        const auto h = frequency_response(s, freqs);
        for (size_t f = 0; f < freqs.size(); ++f)
        {
            std::complex<double> expect{0.0, 0.0};
            for (const auto &tap : s.taps[0])
            {
                const double ang = -2.0 * kPi * freqs[f] * tap.delay_s;
                expect += tap.amp * std::complex<double>(std::cos(ang), std::sin(ang));
            }
            CHECK(std::abs(h(0, static_cast<Eigen::Index>(f)) - expect) < 1e-12);
        }
    }
}

TEST_CASE("CIR binary container round trip")
{
    std::vector<ChannelSample> samples;
    RandomStream rng(17);
    for (int k = 0; k < 5; ++k)
    {
        ChannelSample s;
        s.link_id = 3;
        s.n_rx = 2;
        s.n_tx = 1;
        s.taps.resize(2);
        for (auto &taps : s.taps)
            for (int i = 0; i < 4; ++i)
                taps.push_back({rng.uniform(0, 1e-6),
                                std::complex<double>(rng.uniform(-1, 1), rng.uniform(-1, 1))});
        samples.push_back(std::move(s));
    }
    const std::string dir = test::scratch_dir("cir");
    write_cir_binary(samples, dir + "/c.bin");
    const auto back = read_cir_binary(dir + "/c.bin");
    REQUIRE(back.size() == samples.size());
    for (size_t k = 0; k < samples.size(); ++k)
        for (size_t p = 0; p < samples[k].taps.size(); ++p)
        {
            REQUIRE(back[k].taps[p].size() == samples[k].taps[p].size());
            for (size_t i = 0; i < samples[k].taps[p].size(); ++i)
            {
                CHECK(back[k].taps[p][i].delay_s == samples[k].taps[p][i].delay_s);
                CHECK(back[k].taps[p][i].amp == samples[k].taps[p][i].amp);
            }
        }
    CHECK_THROWS_AS(read_cir_binary(dir + "/nope.bin"), ParseError);
}
