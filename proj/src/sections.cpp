#include "modeshift/sections.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "modeshift/types.hpp"

namespace modeshift {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace

SectionFile SectionFile::parse(const std::string& text, const std::string& origin) {
    SectionFile f;
    f.origin_ = origin;
    std::stringstream ss(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": malformed section header");
            }
            f.sections_.push_back(Section{trim(line.substr(1, line.size() - 2)), {}});
            continue;
        }
        if (f.sections_.empty()) {
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": entry before any [section]");
        }
        auto eq = line.find('=');
        Entry e;
        if (eq == std::string::npos) {
            e.key = trim(line);
        } else {
            e.key = trim(line.substr(0, eq));
            e.value = trim(line.substr(eq + 1));
        }
        if (e.key.empty()) {
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        }
        f.sections_.back().entries.push_back(std::move(e));
    }
    return f;
}

SectionFile SectionFile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse(text, path);
}

const SectionFile::Section* SectionFile::find(const std::string& name) const {
    for (const auto& s : sections_)
        if (s.name == name) return &s;
    return nullptr;
}

const SectionFile::Section& SectionFile::require(const std::string& name) const {
    const Section* s = find(name);
    if (!s) throw ConfigError(origin_ + ": missing required section [" + name + "]");
    return *s;
}

std::optional<std::string> SectionFile::value_of(const Section& s, const std::string& key) {
    for (const auto& e : s.entries)
        if (e.key == key) return e.value;
    return std::nullopt;
}

double parse_double(const std::string& s, const std::string& context) {
    const char* begin = s.c_str();
    char* end = nullptr;
    errno = 0;
    double v = std::strtod(begin, &end);
    if (end != begin + s.size() || s.empty() || errno == ERANGE) {
        throw ConfigError(context + ": not a number: '" + s + "'");
    }
    return v;
}

long parse_long(const std::string& s, const std::string& context) {
    double v = parse_double(s, context);
    long r = static_cast<long>(v);
    if (static_cast<double>(r) != v) throw ConfigError(context + ": not an integer: '" + s + "'");
    return r;
}

bool parse_bool(const std::string& s, const std::string& context) {
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw ConfigError(context + ": not a boolean: '" + s + "'");
}

std::vector<double> parse_double_list(const std::string& s, const std::string& context) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t a = item.find_first_not_of(" \t");
        std::size_t b = item.find_last_not_of(" \t");
        if (a == std::string::npos) throw ConfigError(context + ": empty list item");
        out.push_back(parse_double(item.substr(a, b - a + 1), context));
    }
    if (out.empty()) throw ConfigError(context + ": empty list");
    return out;
}

}  // namespace modeshift
