#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace evsim::csv {

/// Minimal reader for the unquoted comma-separated files used here.
/// Blank lines and lines starting with '#' are skipped.
class Reader {
public:
    Reader(const std::filesystem::path& path, std::vector<std::string> expected_header);

    /// Fills `fields` with the next row; returns false at end of file.
    bool next(std::vector<std::string_view>& fields);

    std::size_t line() const noexcept { return line_; }
    const std::string& file() const noexcept { return file_; }

    [[noreturn]] void fail(const std::string& message) const;

    double number(std::string_view field, const char* what) const;
    long long integer(std::string_view field, const char* what) const;

private:
    std::string file_;
    std::string contents_;
    std::size_t pos_ = 0;
    std::size_t line_ = 0;
    std::size_t width_ = 0;
};

std::string read_file(const std::filesystem::path& path);

/// Shortest representation that parses back to the same double.
std::string format_double(double value);

} // namespace evsim::csv
