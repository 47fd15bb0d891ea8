#include "modeshift/manifest.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>

#include "json.hpp"
#include "modeshift/draws.hpp"
#include "modeshift/types.hpp"

namespace modeshift {

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file for digest: " + path);
    std::uint64_t h = 14695981039346656037ULL;
    char buf[1 << 14];
    while (in) {
        in.read(buf, sizeof(buf));
        std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ULL;
        }
    }
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
    return std::string(hex);
}

void RunManifest::add_input(const std::string& label, const std::string& path) {
    inputs[label] = {path, file_digest(path)};
}

std::string RunManifest::to_json() const {
    nlohmann::json j;
    j["command"] = command;
    j["version"] = version;
    j["seed"] = seed;
    auto now = std::chrono::system_clock::now().time_since_epoch();
    j["created_unix_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
    nlohmann::json in = nlohmann::json::object();
    for (const auto& [label, pd] : inputs) {
        in[label] = {{"path", pd.first}, {"digest", pd.second}};
    }
    j["inputs"] = in;
    j["outputs"] = outputs;
    return j.dump(2) + "\n";
}

void RunManifest::write(const std::string& dir) const {
    std::ofstream out(dir + "/manifest.json", std::ios::binary);
    if (!out) throw DataError("cannot write manifest in " + dir);
    out << to_json();
}

}  // namespace modeshift
