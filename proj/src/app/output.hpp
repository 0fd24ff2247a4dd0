#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace parity::app {

using Json = nlohmann::ordered_json;

/// Writes `path` through a sibling temp file and a rename, so readers never
/// see a partial file. Throws parity::Error on I/O failure.
void write_atomic(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body);
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// FNV-1a 64-bit hash of a file's bytes, as 16 hex digits.
std::string file_digest(const std::filesystem::path& path);

/// Manifest entry describing an input file.
Json describe_input(const std::string& role, const std::filesystem::path& path);

/// Number rounded to the report precision for JSON emission.
Json json_number(double value);

/// Collects the files a command writes, relative to the output directory.
class OutputSet {
public:
    explicit OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {}

    void write(const std::string& name, const std::function<void(std::ostream&)>& body);
    void write(const std::string& name, const std::string& content);

    [[nodiscard]] const std::filesystem::path& dir() const { return dir_; }
    [[nodiscard]] const std::vector<std::string>& files() const { return files_; }

private:
    std::filesystem::path dir_;
    std::vector<std::string> files_;
};

}  // namespace parity::app
