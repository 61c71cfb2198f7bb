#include "polydrift/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "polydrift/errors.hpp"

namespace polydrift {

std::string format_double(double value) {
    char buffer[40];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream stream(path, std::ios::binary);
    if (!stream) throw FileNotFoundError(path.string());
    std::ostringstream content;
    content << stream.rdbuf();
    return std::move(content).str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream stream(tmp, std::ios::binary | std::ios::trunc);
        if (!stream) throw Error("cannot open for writing: " + tmp.string());
        stream.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!stream) throw Error("write failed: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw Error("cannot replace " + path.string() + ": " + ec.message());
    }
}

}  // namespace polydrift
