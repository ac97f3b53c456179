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

#include "hcm/configfile.hpp"
#include "hcm/rng.hpp"
#include "hcm/scenario.hpp"
#include "hcm/sim_config.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace hcm;

TEST_CASE("config document: parse, types, serialize round trip")
{
    const char *text = R"(
# a comment
seed = 42
duration_s = 2.5
label = "hello # not a comment"
flag = true
values = [1, 2.5, 3e2]
names = [a, b, "c d"]

[section.sub]
key = bare_word
)";
    ConfigDoc doc = ConfigDoc::parse(text);
    ConfigReader r(doc);
    CHECK(r.get_int("", "seed", 0) == 42);
    CHECK(r.get_real("", "duration_s", 0) == 2.5);
    CHECK(r.get_string("", "label", "") == "hello # not a comment");
    CHECK(r.get_bool("", "flag", false));
    CHECK(r.get_numbers("", "values", {}) == std::vector<double>{1.0, 2.5, 300.0});
    CHECK(r.get_strings("", "names", {}) == std::vector<std::string>{"a", "b", "c d"});
    CHECK(r.get_string("section.sub", "key", "") == "bare_word");
    r.reject_unknown(); // everything consumed

    ConfigDoc again = ConfigDoc::parse(doc.serialize());
    CHECK(again.serialize() == doc.serialize());
}

TEST_CASE("config document: errors")
{
    CHECK_THROWS_AS(ConfigDoc::parse("key"), ParseError);
    CHECK_THROWS_AS(ConfigDoc::parse("a = [1, 2"), ParseError);
    CHECK_THROWS_AS(ConfigDoc::parse("a = 1\na = 2"), ParseError);
    ConfigDoc doc = ConfigDoc::parse("known = 1\nmystery = 2");
    ConfigReader r(doc);
    r.get_int("", "known", 0);
    CHECK_THROWS_WITH_AS(r.reject_unknown(), doctest::Contains("mystery"), ValidationError);
}

TEST_CASE("SimConfig: minimal document gets documented defaults")
{
    const SimConfig c = SimConfig::from_text("seed = 7\nduration_s = 5.0\n");
    CHECK(c.seed == 7);
    CHECK(c.duration_s == 5.0);
    CHECK(c.time_step_s == 0.01);
    CHECK(c.bands_hz == std::vector<double>{5.9e9});
    CHECK(c.extent_m == 500.0);
    CHECK(c.features == FeatureFlags::v2x());
    CHECK(c.population.vehicle_count == 2);
    CHECK(c.pairing.mode == PairingSpec::Mode::AllPairs);
    CHECK(c.antennas.size() == 1);
    CHECK(c.antennas[0].id == "iso");
}

TEST_CASE("SimConfig: violated invariants name the field")
{
    CHECK_THROWS_WITH_AS(SimConfig::from_text("time_step_s = 0.0\n"),
                         doctest::Contains("time_step_s"), ValidationError);
    CHECK_THROWS_WITH_AS(SimConfig::from_text("duration_s = 0.001\ntime_step_s = 0.01\n"),
                         doctest::Contains("duration_s"), ValidationError);
    CHECK_THROWS_WITH_AS(SimConfig::from_text("bands_hz = []\n"), doctest::Contains("bands_hz"),
                         ValidationError);
    CHECK_THROWS_WITH_AS(SimConfig::from_text("extent_m = -5\n"), doctest::Contains("extent_m"),
                         ValidationError);
    CHECK_THROWS_WITH_AS(SimConfig::from_text("unknown_key = 1\n"),
                         doctest::Contains("unknown_key"), ValidationError);
}

TEST_CASE("SimConfig: WINNER-column flags enable the parity predicate")
{
    std::string text = "seed = 1\n[features]\n";
    text += "dynamic_scatterers = false\n";
    text += "situation_transitions = false\n";
    text += "cluster_memory = false\n";
    text += "situation_detection = false\n";
    text += "nodes_without_antennas = false\n";
    text += "simple_movement_profiles = true\n";
    text += "node_trajectories = false\n";
    text += "building_sublayer = false\n";
    text += "road_sublayer = false\n";
    text += "user_defined_environment = false\n";
    text += "geometry_import = false\n";
    const SimConfig c = SimConfig::from_text(text);
    CHECK(c.winner_parity_mode());
    CHECK(c.features == FeatureFlags::winner());

    // one flag off the column breaks parity
    std::string off_column = text;
    off_column.replace(off_column.find("cluster_memory = false"),
                       std::string("cluster_memory = false").size(), "cluster_memory = true");
    CHECK_FALSE(SimConfig::from_text(off_column).winner_parity_mode());
    CHECK_FALSE(SimConfig::from_text("seed = 1\n").winner_parity_mode());
}

TEST_CASE("SimConfig: serialize/reload round trip is structurally equal")
{
    std::string text = "seed = 99\nduration_s = 3.5\nbands_hz = [5.9e9, 2.4e9]\n";
    text += "[population.station.bs1]\nposition = [10, 20, 12.5]\ninfrastructure = true\n";
    text += "[antenna.ula2]\nelements = 2\nspacing_m = 0.0254\n";
    text += "[pairing]\nmode = max_range\nmax_range_m = 150\n";
    const SimConfig c = SimConfig::from_text(text);
    const SimConfig back = SimConfig::from_text(c.to_text());
    CHECK(back == c);
    CHECK(back.to_text() == c.to_text());
}

TEST_CASE("builtin scenarios: required set present, invariants hold")
{
    const auto scen = builtin_scenarios(test::data_dir());
    for (const char *required : {"urban_v2i", "urban_v2v", "highway_v2v"})
    {
        REQUIRE(scen.count(required) == 1);
        const ScenarioParams &p = scen.at(required);
        CHECK(p.n_clusters >= 1);
        CHECK(p.delay_proportionality > 1.0);
        for (int c = 0; c < kNumConditions; ++c)
            for (int par = 0; par < kNumLspParams; ++par)
                CHECK(p.d_corr_m[c][par] > 0.0);
        // PSD check: all eigenvalues non-negative after load
        Eigen::SelfAdjointEigenSolver<Matrix5> eig(p.lsp_cross_correlation);
        CHECK(eig.eigenvalues().minCoeff() >= -1e-12);
        for (int i = 0; i < 5; ++i)
            CHECK(p.lsp_cross_correlation(i, i) == doctest::Approx(1.0));
    }
}

namespace
{

std::string scenario_text_with_matrix(const std::array<std::array<double, 5>, 5> &m)
{
    std::string text = R"(scenario_id = "custom"
n_clusters = 10
delay_proportionality = 2.0
[pathloss.los]
a = 22.7
b = 41.0
c = 20.0
[pathloss.nlos]
a = 36.7
b = 23.15
c = 26.0
)";
    for (const char *sec : {"ds", "k", "asd", "asa", "sf"})
        text += std::string("[lsp.") + sec +
                "]\nmu = 0\nsigma = 1\ndcorr_los_m = 50\ndcorr_nlos_m = 50\n";
    text += "[cross_correlation]\n";
    const char *names[] = {"ds", "k", "asd", "asa", "sf"};
    for (int i = 0; i < 5; ++i)
    {
        text += std::string("row_") + names[i] + " = [";
        for (int j = 0; j < 5; ++j)
            text += (j ? ", " : "") + format_double(m[i][j]);
        text += "]\n";
    }
    return text;
}

} // namespace

TEST_CASE("scenario file: clearly negative eigenvalue is a validation error")
{
    // embeds a 3x3 block with eigenvalue 1 - 0.75*sqrt(2) = -0.06
    std::array<std::array<double, 5>, 5> bad = {{{1.0, 0.75, 0.0, 0.0, 0.0},
                                                 {0.75, 1.0, 0.75, 0.0, 0.0},
                                                 {0.0, 0.75, 1.0, 0.0, 0.0},
                                                 {0.0, 0.0, 0.0, 1.0, 0.0},
                                                 {0.0, 0.0, 0.0, 0.0, 1.0}}};
    CHECK_THROWS_WITH_AS(ScenarioParams::from_text(scenario_text_with_matrix(bad)),
                         doctest::Contains("positive semi-definite"), ValidationError);

    // an exactly semidefinite matrix loads (clamping path tolerates -1e-9)
    std::array<std::array<double, 5>, 5> ok = {{{1.0, 0.5, 0.0, 0.0, 0.0},
                                                {0.5, 1.0, 0.5, 0.0, 0.0},
                                                {0.0, 0.5, 1.0, 0.0, 0.0},
                                                {0.0, 0.0, 0.0, 1.0, 0.0},
                                                {0.0, 0.0, 0.0, 0.0, 1.0}}};
    const ScenarioParams p = ScenarioParams::from_text(scenario_text_with_matrix(ok));
    Eigen::SelfAdjointEigenSolver<Matrix5> eig(p.lsp_cross_correlation);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-12);
}

TEST_CASE("scenario invariants: r_tau and n_clusters")
{
    auto base = builtin_scenarios(test::data_dir()).at("urban_v2v");
    base.delay_proportionality = 1.0;
    CHECK_THROWS_WITH_AS(base.validate_and_repair(), doctest::Contains("r_tau"),
                         ValidationError);
    base.delay_proportionality = 2.0;
    base.n_clusters = 0;
    CHECK_THROWS_WITH_AS(base.validate_and_repair(), doctest::Contains("n_clusters"),
                         ValidationError);
}

TEST_CASE("psd_lower_factor: rank-one all-ones matrix gives equal components")
{
    const Matrix5 ones = Matrix5::Ones();
    const Matrix5 l = psd_lower_factor(ones);
    CHECK(((l * l.transpose()) - ones).cwiseAbs().maxCoeff() < 1e-12);
    Vector5 g;
    g << 0.3, -1.2, 0.8, 2.0, -0.5;
    const Vector5 out = l * g;
    for (int i = 1; i < 5; ++i)
        CHECK(out(i) == doctest::Approx(out(0)).epsilon(1e-12));
}

TEST_CASE("psd_lower_factor: reproduces a full-rank matrix")
{
    const auto scen = builtin_scenarios(test::data_dir()).at("urban_v2v");
    const Matrix5 &m = scen.lsp_cross_correlation;
    const Matrix5 l = psd_lower_factor(m);
    CHECK(((l * l.transpose()) - m).cwiseAbs().maxCoeff() < 1e-10);
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j)
            CHECK(l(i, j) == 0.0);
}

TEST_CASE("random streams: determinism and sub-stream independence")
{
    RandomStream a(substream_seed(123, "module", 5, 0));
    RandomStream b(substream_seed(123, "module", 5, 0));
    for (int i = 0; i < 100; ++i)
        CHECK(a.next_u64() == b.next_u64());

    // different entities, tags or bands give different streams
    std::set<std::uint64_t> seeds;
    for (int id = 0; id < 50; ++id)
        seeds.insert(substream_seed(123, "module", id));
    seeds.insert(substream_seed(123, "other", 0));
    seeds.insert(substream_seed(123, "module", 0, 1));
    CHECK(seeds.size() == 52);
}

TEST_CASE("random streams: uniform range and gaussian moments")
{
    RandomStream s(987);
    double min_u = 1.0;
    double max_u = 0.0;
    for (int i = 0; i < 20000; ++i)
    {
        const double u = s.uniform();
        min_u = std::min(min_u, u);
        max_u = std::max(max_u, u);
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
    }
    CHECK(min_u < 0.01);
    CHECK(max_u > 0.99);

    double sum = 0.0;
    double sum2 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i)
    {
        const double g = s.gaussian();
        sum += g;
        sum2 += g * g;
    }
    CHECK(std::abs(sum / n) < 0.01);
    CHECK(sum2 / n == doctest::Approx(1.0).epsilon(0.02));
}
