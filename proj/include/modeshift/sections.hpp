#ifndef MODESHIFT_SECTIONS_HPP
#define MODESHIFT_SECTIONS_HPP

#include <optional>
#include <string>
#include <vector>

namespace modeshift {

/// Plain-text config format shared by the spec, targets, grid, and
/// emissions files: `[section]` headers, `key = value` lines, bare lines
/// (no '='), and `#` comments.
class SectionFile {
  public:
    struct Entry {
        std::string key;
        std::string value;  // empty for bare lines
    };
    struct Section {
        std::string name;
        std::vector<Entry> entries;
    };

    static SectionFile parse(const std::string& text, const std::string& origin);
    static SectionFile load(const std::string& path);

    const std::vector<Section>& sections() const { return sections_; }
    const Section* find(const std::string& name) const;
    /// Required section; throws ConfigError naming it.
    const Section& require(const std::string& name) const;

    /// First value of `key` in `section`, if present.
    static std::optional<std::string> value_of(const Section& s, const std::string& key);

    const std::string& origin() const { return origin_; }

  private:
    std::string origin_;
    std::vector<Section> sections_;
};

double parse_double(const std::string& s, const std::string& context);
long parse_long(const std::string& s, const std::string& context);
bool parse_bool(const std::string& s, const std::string& context);
std::vector<double> parse_double_list(const std::string& s, const std::string& context);

}  // namespace modeshift

#endif
