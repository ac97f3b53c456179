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

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hcm
{

namespace
{

std::string_view trim(std::string_view s)
{
    size_t b = 0;
    size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return s.substr(b, e - b);
}

bool is_integer_literal(std::string_view s)
{
    if (s.empty())
        return false;
    size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
    if (i == s.size())
        return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i])))
            return false;
    return true;
}

bool parse_real(std::string_view s, double &out)
{
    const char *first = s.data();
    const char *last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

bool valid_key(std::string_view s)
{
    if (s.empty())
        return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.'))
            return false;
    return true;
}

std::string unquote(std::string_view s, int line)
{
    std::string out;
    for (size_t i = 1; i + 1 < s.size(); ++i)
    {
        char c = s[i];
        if (c == '\\')
        {
            if (i + 2 >= s.size())
                throw ParseError("line " + std::to_string(line) + ": dangling escape in string");
            char e = s[++i];
            if (e == '"' || e == '\\')
                out.push_back(e);
            else if (e == 'n')
                out.push_back('\n');
            else if (e == 't')
                out.push_back('\t');
            else
                throw ParseError("line " + std::to_string(line) + ": unknown escape \\" +
                                 std::string(1, e));
        }
        else
        {
            out.push_back(c);
        }
    }
    return out;
}

std::string quote(std::string_view s)
{
    std::string out = "\"";
    for (char c : s)
    {
        if (c == '"' || c == '\\')
            out.push_back('\\');
        if (c == '\n')
        {
            out += "\\n";
            continue;
        }
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

bool needs_quotes(std::string_view s)
{
    if (s.empty())
        return true;
    if (s == "true" || s == "false")
        return true;
    if (is_integer_literal(s))
        return true;
    double d;
    if (parse_real(s, d))
        return true;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.' ||
              c == '/' || c == ':'))
            return true;
    return false;
}

ConfigValue parse_scalar(std::string_view tok, int line)
{
    ConfigValue v;
    v.line = line;
    if (tok == "true" || tok == "false")
    {
        v.kind = ConfigValue::Kind::Bool;
        v.b = (tok == "true");
        return v;
    }
    if (is_integer_literal(tok))
    {
        v.kind = ConfigValue::Kind::Int;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v.i);
        if (ec != std::errc())
            throw ParseError("line " + std::to_string(line) + ": integer out of range: " +
                             std::string(tok));
        (void)ptr;
        return v;
    }
    double d;
    if (parse_real(tok, d))
    {
        v.kind = ConfigValue::Kind::Real;
        v.d = d;
        return v;
    }
    if (tok.size() >= 2 && tok.front() == '"' && tok.back() == '"')
    {
        v.kind = ConfigValue::Kind::String;
        v.s = unquote(tok, line);
        return v;
    }
    if (!valid_key(tok))
        throw ParseError("line " + std::to_string(line) + ": cannot parse value: " +
                         std::string(tok));
    v.kind = ConfigValue::Kind::String;
    v.s = std::string(tok);
    return v;
}

// Splits a [a, b, c] body at top-level commas, honoring quotes.
std::vector<std::string_view> split_list(std::string_view body, int line)
{
    std::vector<std::string_view> items;
    size_t start = 0;
    bool in_quote = false;
    for (size_t i = 0; i < body.size(); ++i)
    {
        char c = body[i];
        if (c == '"' && (i == 0 || body[i - 1] != '\\'))
            in_quote = !in_quote;
        else if (c == ',' && !in_quote)
        {
            items.push_back(body.substr(start, i - start));
            start = i + 1;
        }
    }
    if (in_quote)
        throw ParseError("line " + std::to_string(line) + ": unterminated string in list");
    if (trim(body.substr(start)).size() > 0 || !items.empty())
        items.push_back(body.substr(start));
    return items;
}

ConfigValue parse_value(std::string_view tok, int line)
{
    tok = trim(tok);
    if (tok.empty())
        throw ParseError("line " + std::to_string(line) + ": missing value");
    if (tok.front() == '[')
    {
        if (tok.back() != ']')
            throw ParseError("line " + std::to_string(line) + ": unterminated list");
        ConfigValue v;
        v.line = line;
        auto items = split_list(tok.substr(1, tok.size() - 2), line);
        bool all_numeric = true;
        std::vector<ConfigValue> parsed;
        for (auto item : items)
        {
            auto sv = parse_scalar(trim(item), line);
            if (sv.kind != ConfigValue::Kind::Int && sv.kind != ConfigValue::Kind::Real)
                all_numeric = false;
            parsed.push_back(std::move(sv));
        }
        if (all_numeric)
        {
            v.kind = ConfigValue::Kind::NumberList;
            for (auto &p : parsed)
                v.numbers.push_back(p.kind == ConfigValue::Kind::Int ? static_cast<double>(p.i)
                                                                     : p.d);
        }
        else
        {
            v.kind = ConfigValue::Kind::StringList;
            for (auto &p : parsed)
            {
                if (p.kind != ConfigValue::Kind::String)
                    throw ParseError("line " + std::to_string(line) +
                                     ": list mixes numbers and strings");
                v.strings.push_back(p.s);
            }
        }
        return v;
    }
    return parse_scalar(tok, line);
}

} // namespace

double ConfigValue::as_real() const
{
    if (kind == Kind::Real)
        return d;
    if (kind == Kind::Int)
        return static_cast<double>(i);
    throw ValidationError("expected a numeric value (line " + std::to_string(line) + ")");
}

std::int64_t ConfigValue::as_int() const
{
    if (kind == Kind::Int)
        return i;
    throw ValidationError("expected an integer value (line " + std::to_string(line) + ")");
}

ConfigValue ConfigValue::of_bool(bool v)
{
    ConfigValue c;
    c.kind = Kind::Bool;
    c.b = v;
    return c;
}
ConfigValue ConfigValue::of_int(std::int64_t v)
{
    ConfigValue c;
    c.kind = Kind::Int;
    c.i = v;
    return c;
}
ConfigValue ConfigValue::of_real(double v)
{
    ConfigValue c;
    c.kind = Kind::Real;
    c.d = v;
    return c;
}
ConfigValue ConfigValue::of_string(std::string v)
{
    ConfigValue c;
    c.kind = Kind::String;
    c.s = std::move(v);
    return c;
}
ConfigValue ConfigValue::of_numbers(std::vector<double> v)
{
    ConfigValue c;
    c.kind = Kind::NumberList;
    c.numbers = std::move(v);
    return c;
}
ConfigValue ConfigValue::of_strings(std::vector<std::string> v)
{
    ConfigValue c;
    c.kind = Kind::StringList;
    c.strings = std::move(v);
    return c;
}

ConfigDoc ConfigDoc::parse(std::string_view text)
{
    ConfigDoc doc;
    doc.sections_.push_back({"", {}});
    size_t cur = 0; // index of current section
    int line_no = 0;
    size_t pos = 0;
    while (pos <= text.size())
    {
        size_t nl = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
        ++line_no;

        // strip comments outside quotes
        bool in_quote = false;
        size_t cut = line.size();
        for (size_t i = 0; i < line.size(); ++i)
        {
            char c = line[i];
            if (c == '"' && (i == 0 || line[i - 1] != '\\'))
                in_quote = !in_quote;
            else if (c == '#' && !in_quote)
            {
                cut = i;
                break;
            }
        }
        std::string_view body = trim(line.substr(0, cut));
        if (body.empty())
            continue;

        if (body.front() == '[' && body.back() == ']' && body.find('=') == std::string_view::npos)
        {
            std::string name(trim(body.substr(1, body.size() - 2)));
            if (!valid_key(name))
                throw ParseError("line " + std::to_string(line_no) + ": bad section name [" +
                                 name + "]");
            auto it = std::find_if(doc.sections_.begin(), doc.sections_.end(),
                                   [&](const Section &s) { return s.name == name; });
            if (it == doc.sections_.end())
            {
                doc.sections_.push_back({name, {}});
                cur = doc.sections_.size() - 1;
            }
            else
            {
                cur = static_cast<size_t>(it - doc.sections_.begin());
            }
            continue;
        }

        size_t eq = std::string_view::npos;
        {
            bool q = false;
            for (size_t i = 0; i < body.size(); ++i)
            {
                if (body[i] == '"' && (i == 0 || body[i - 1] != '\\'))
                    q = !q;
                else if (body[i] == '=' && !q)
                {
                    eq = i;
                    break;
                }
            }
        }
        if (eq == std::string_view::npos)
            throw ParseError("line " + std::to_string(line_no) + ": expected key = value");
        std::string key(trim(body.substr(0, eq)));
        if (!valid_key(key))
            throw ParseError("line " + std::to_string(line_no) + ": bad key '" + key + "'");
        ConfigValue value = parse_value(body.substr(eq + 1), line_no);
        auto &entries = doc.sections_[cur].entries;
        auto dup = std::find_if(entries.begin(), entries.end(),
                                [&](const auto &e) { return e.first == key; });
        if (dup != entries.end())
            throw ParseError("line " + std::to_string(line_no) + ": duplicate key '" + key +
                             "' in section [" + doc.sections_[cur].name + "]");
        entries.emplace_back(std::move(key), std::move(value));
    }
    return doc;
}

ConfigDoc ConfigDoc::parse_file(const std::string &path)
{
    return parse(read_text_file(path));
}

std::string ConfigDoc::serialize() const
{
    std::ostringstream out;
    bool first = true;
    for (const auto &sec : sections_)
    {
        if (sec.name.empty() && sec.entries.empty())
            continue;
        if (!sec.name.empty())
        {
            if (!first)
                out << "\n";
            out << "[" << sec.name << "]\n";
        }
        first = false;
        for (const auto &[key, v] : sec.entries)
        {
            out << key << " = ";
            switch (v.kind)
            {
            case ConfigValue::Kind::Bool:
                out << (v.b ? "true" : "false");
                break;
            case ConfigValue::Kind::Int:
                out << v.i;
                break;
            case ConfigValue::Kind::Real:
                out << format_double(v.d);
                break;
            case ConfigValue::Kind::String:
                out << (needs_quotes(v.s) ? quote(v.s) : v.s);
                break;
            case ConfigValue::Kind::NumberList:
            {
                out << "[";
                for (size_t i = 0; i < v.numbers.size(); ++i)
                    out << (i ? ", " : "") << format_double(v.numbers[i]);
                out << "]";
                break;
            }
            case ConfigValue::Kind::StringList:
            {
                out << "[";
                for (size_t i = 0; i < v.strings.size(); ++i)
                    out << (i ? ", " : "")
                        << (needs_quotes(v.strings[i]) ? quote(v.strings[i]) : v.strings[i]);
                out << "]";
                break;
            }
            }
            out << "\n";
        }
    }
    return out.str();
}

bool ConfigDoc::has_section(const std::string &name) const
{
    return find_section(name) != nullptr;
}

const ConfigDoc::Section *ConfigDoc::find_section(const std::string &name) const
{
    for (const auto &s : sections_)
        if (s.name == name)
            return &s;
    return nullptr;
}

std::vector<std::string> ConfigDoc::sections_with_prefix(const std::string &prefix) const
{
    std::vector<std::string> out;
    for (const auto &s : sections_)
        if (s.name == prefix ||
            (s.name.size() > prefix.size() + 1 && s.name.compare(0, prefix.size(), prefix) == 0 &&
             s.name[prefix.size()] == '.'))
            out.push_back(s.name);
    return out;
}

ConfigDoc::Section &ConfigDoc::section(const std::string &name)
{
    for (auto &s : sections_)
        if (s.name == name)
            return s;
    sections_.push_back({name, {}});
    return sections_.back();
}

void ConfigDoc::set(const std::string &sec, const std::string &key, ConfigValue v)
{
    auto &s = section(sec);
    for (auto &e : s.entries)
        if (e.first == key)
        {
            e.second = std::move(v);
            return;
        }
    s.entries.emplace_back(key, std::move(v));
}

ConfigReader::ConfigReader(const ConfigDoc &doc) : doc_(&doc)
{
    for (const auto &sec : doc.sections())
        for (const auto &[key, value] : sec.entries)
            consumed_[{sec.name, key}] = false;
}

bool ConfigReader::has(const std::string &section, const std::string &key) const
{
    return consumed_.count({section, key}) > 0;
}

const ConfigValue *ConfigReader::fetch(const std::string &section, const std::string &key)
{
    const auto *sec = doc_->find_section(section);
    if (!sec)
        return nullptr;
    for (const auto &[k, v] : sec->entries)
        if (k == key)
        {
            consumed_[{section, key}] = true;
            return &v;
        }
    return nullptr;
}

double ConfigReader::get_real(const std::string &section, const std::string &key, double fallback)
{
    const auto *v = fetch(section, key);
    if (!v)
        return fallback;
    if (v->kind != ConfigValue::Kind::Real && v->kind != ConfigValue::Kind::Int)
        throw ValidationError(key + ": expected number");
    return v->as_real();
}

std::int64_t ConfigReader::get_int(const std::string &section, const std::string &key,
                                   std::int64_t fallback)
{
    const auto *v = fetch(section, key);
    if (!v)
        return fallback;
    if (v->kind != ConfigValue::Kind::Int)
        throw ValidationError(key + ": expected integer");
    return v->i;
}

bool ConfigReader::get_bool(const std::string &section, const std::string &key, bool fallback)
{
    const auto *v = fetch(section, key);
    if (!v)
        return fallback;
    if (v->kind != ConfigValue::Kind::Bool)
        throw ValidationError(key + ": expected true/false");
    return v->b;
}

std::string ConfigReader::get_string(const std::string &section, const std::string &key,
                                     const std::string &fallback)
{
    const auto *v = fetch(section, key);
    if (!v)
        return fallback;
    if (v->kind != ConfigValue::Kind::String)
        throw ValidationError(key + ": expected string");
    return v->s;
}

std::vector<double> ConfigReader::get_numbers(const std::string &section, const std::string &key,
                                              std::vector<double> fallback)
{
    const auto *v = fetch(section, key);
    if (!v)
        return fallback;
    if (v->kind == ConfigValue::Kind::NumberList)
        return v->numbers;
    if (v->kind == ConfigValue::Kind::Real || v->kind == ConfigValue::Kind::Int)
        return {v->as_real()};
    throw ValidationError(key + ": expected number list");
}

std::vector<std::string> ConfigReader::get_strings(const std::string &section,
                                                   const std::string &key,
                                                   std::vector<std::string> fallback)
{
    const auto *v = fetch(section, key);
    if (!v)
        return fallback;
    if (v->kind == ConfigValue::Kind::StringList)
        return v->strings;
    if (v->kind == ConfigValue::Kind::String)
        return {v->s};
    if (v->kind == ConfigValue::Kind::NumberList && v->numbers.empty())
        return {};
    throw ValidationError(key + ": expected string list");
}

std::optional<std::vector<double>> ConfigReader::get_numbers_opt(const std::string &section,
                                                                 const std::string &key)
{
    const auto *v = fetch(section, key);
    if (!v)
        return std::nullopt;
    if (v->kind == ConfigValue::Kind::NumberList)
        return v->numbers;
    throw ValidationError(key + ": expected number list");
}

double ConfigReader::require_real(const std::string &section, const std::string &key)
{
    const auto *v = fetch(section, key);
    if (!v)
        throw ValidationError("missing required key '" + key + "' in section [" + section + "]");
    return v->as_real();
}

std::string ConfigReader::require_string(const std::string &section, const std::string &key)
{
    const auto *v = fetch(section, key);
    if (!v || v->kind != ConfigValue::Kind::String)
        throw ValidationError("missing required string '" + key + "' in section [" + section +
                              "]");
    return v->s;
}

void ConfigReader::consume_section(const std::string &section)
{
    const auto *sec = doc_->find_section(section);
    if (!sec)
        return;
    for (const auto &[k, v] : sec->entries)
        consumed_[{section, k}] = true;
}

std::vector<std::string> ConfigReader::sections_with_prefix(const std::string &prefix) const
{
    return doc_->sections_with_prefix(prefix);
}

void ConfigReader::reject_unknown() const
{
    std::string bad;
    for (const auto &[sk, used] : consumed_)
    {
        if (used)
            continue;
        if (!bad.empty())
            bad += ", ";
        bad += sk.first.empty() ? sk.second : sk.first + "." + sk.second;
    }
    if (!bad.empty())
        throw ValidationError("unknown keys: " + bad);
}

std::string read_text_file(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string &path, std::string_view text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write file: " + path);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out)
        throw Error("short write: " + path);
}

std::string format_double(double v)
{
    // Shortest representation that round-trips exactly.
    char buf[64];
    for (int prec = 1; prec <= 17; ++prec)
    {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        double back;
        if (parse_real(buf, back) && back == v)
            break;
    }
    std::string s(buf);
    // Ensure a real literal stays a real on re-parse.
    if (s.find_first_of(".eEnN") == std::string::npos)
        s += ".0";
    return s;
}

} // namespace hcm
