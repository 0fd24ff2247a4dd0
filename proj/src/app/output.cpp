#include "output.hpp"

#include "parity/error.hpp"
#include "parity/format.hpp"

#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <sstream>
#include <system_error>

namespace parity::app {

namespace fs = std::filesystem;

void write_atomic(const fs::path& path, const std::function<void(std::ostream&)>& body) {
    std::ostringstream buffer;
    body(buffer);
    write_atomic(path, buffer.str());
}

void write_atomic(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw Error("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error("cannot rename into " + path.string());
    }
}

std::string file_digest(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[1 << 14];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
    }
    return fmt::format("{:016x}", h);
}

Json describe_input(const std::string& role, const fs::path& path) {
    Json j;
    j["role"] = role;
    j["path"] = path.string();
    j["bytes"] = fs::file_size(path);
    j["fnv1a64"] = file_digest(path);
    return j;
}

Json json_number(double value) {
    if (!std::isfinite(value)) return nullptr;
    return round_significant(value);
}

void OutputSet::write(const std::string& name, const std::function<void(std::ostream&)>& body) {
    write_atomic(dir_ / name, body);
    files_.push_back(name);
}

void OutputSet::write(const std::string& name, const std::string& content) {
    write_atomic(dir_ / name, content);
    files_.push_back(name);
}

}  // namespace parity::app
