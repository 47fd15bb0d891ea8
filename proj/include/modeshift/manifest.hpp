#ifndef MODESHIFT_MANIFEST_HPP
#define MODESHIFT_MANIFEST_HPP

#include <map>
#include <string>
#include <vector>

namespace modeshift {

/// FNV-1a 64 digest of a file's bytes, hex-encoded. Used for input
/// change detection, not integrity.
std::string file_digest(const std::string& path);

/// Provenance record written next to every command's outputs.
struct RunManifest {
    std::string command;
    std::string version;
    std::uint64_t seed = 0;
    std::map<std::string, std::pair<std::string, std::string>> inputs;  // label -> (path, digest)
    std::vector<std::string> outputs;

    void add_input(const std::string& label, const std::string& path);
    void write(const std::string& dir) const;

    std::string to_json() const;
};

}  // namespace modeshift

#endif
