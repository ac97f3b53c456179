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

#ifndef HCM_CONFIGFILE_HPP
#define HCM_CONFIGFILE_HPP

#include "hcm/types.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hcm
{

// Flat typed key/value document with nested sections. Grammar (see
// docs/config-format.md):
//
//   # comment
//   key = value                    (root section)
//   [section.subsection]
//   key = value
//
// Values are typed on parse: true/false -> bool, integer literal -> int,
// anything parseable as a floating literal -> real, [a, b, c] -> number or
// string list, "quoted" or bare word -> string.
struct ConfigValue
{
    enum class Kind
    {
        Bool,
        Int,
        Real,
        String,
        NumberList,
        StringList
    };

    Kind kind = Kind::String;
    bool b = false;
    std::int64_t i = 0;
    double d = 0.0;
    std::string s;
    std::vector<double> numbers;
    std::vector<std::string> strings;
    int line = 0;

    // Numeric coercion: Int is accepted where Real is expected.
    double as_real() const;
    std::int64_t as_int() const;

    static ConfigValue of_bool(bool v);
    static ConfigValue of_int(std::int64_t v);
    static ConfigValue of_real(double v);
    static ConfigValue of_string(std::string v);
    static ConfigValue of_numbers(std::vector<double> v);
    static ConfigValue of_strings(std::vector<std::string> v);
};

class ConfigDoc
{
  public:
    struct Section
    {
        std::string name; // dotted path; "" is the root
        std::vector<std::pair<std::string, ConfigValue>> entries;
    };

    static ConfigDoc parse(std::string_view text);
    static ConfigDoc parse_file(const std::string &path);

    std::string serialize() const;

    bool has_section(const std::string &name) const;
    // Sections whose name equals `prefix` or starts with `prefix + '.'`.
    std::vector<std::string> sections_with_prefix(const std::string &prefix) const;
    const Section *find_section(const std::string &name) const;

    Section &section(const std::string &name); // creates on demand
    void set(const std::string &section, const std::string &key, ConfigValue v);

    const std::vector<Section> &sections() const { return sections_; }

  private:
    std::vector<Section> sections_; // ordered, unique names, sections_[0] is root
};

// Read-side view over a ConfigDoc that tracks which keys were consumed, so a
// loader can reject documents containing unknown keys.
class ConfigReader
{
  public:
    explicit ConfigReader(const ConfigDoc &doc);

    bool has(const std::string &section, const std::string &key) const;

    double get_real(const std::string &section, const std::string &key, double fallback);
    std::int64_t get_int(const std::string &section, const std::string &key, std::int64_t fallback);
    bool get_bool(const std::string &section, const std::string &key, bool fallback);
    std::string get_string(const std::string &section, const std::string &key,
                           const std::string &fallback);
    std::vector<double> get_numbers(const std::string &section, const std::string &key,
                                    std::vector<double> fallback);
    std::vector<std::string> get_strings(const std::string &section, const std::string &key,
                                         std::vector<std::string> fallback);

    std::optional<std::vector<double>> get_numbers_opt(const std::string &section,
                                                       const std::string &key);

    double require_real(const std::string &section, const std::string &key);
    std::string require_string(const std::string &section, const std::string &key);

    // Marks a whole section consumed (used for free-form sections).
    void consume_section(const std::string &section);
    std::vector<std::string> sections_with_prefix(const std::string &prefix) const;
    bool has_section(const std::string &name) const { return doc_->has_section(name); }

    // Throws ValidationError naming every key that was never consumed.
    void reject_unknown() const;

  private:
    const ConfigValue *fetch(const std::string &section, const std::string &key);

    const ConfigDoc *doc_;
    std::map<std::pair<std::string, std::string>, bool> consumed_;
};

std::string read_text_file(const std::string &path);
void write_text_file(const std::string &path, std::string_view text);

// Canonical shortest-exact formatting for doubles in text exports; parsing the
// result recovers the identical bit pattern.
std::string format_double(double v);

} // namespace hcm

#endif
