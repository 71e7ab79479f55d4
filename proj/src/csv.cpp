#include "evsim/csv.hpp"

#include "evsim/errors.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace evsim::csv {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

void split(std::string_view line, std::vector<std::string_view>& out)
{
    out.clear();
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            return;
        }
        out.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
}

} // namespace

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError(path.string(), 0, "cannot open file");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Reader::Reader(const std::filesystem::path& path, std::vector<std::string> expected_header)
    : file_(path.string()), contents_(read_file(path))
{
    std::vector<std::string_view> header;
    if (!next(header)) {
        fail("empty file, expected header");
    }
    bool ok = header.size() == expected_header.size();
    for (std::size_t i = 0; ok && i < header.size(); ++i) {
        ok = header[i] == expected_header[i];
    }
    if (!ok) {
        std::string want;
        for (const auto& h : expected_header) {
            want += (want.empty() ? "" : ",") + h;
        }
        fail("unexpected header, expected '" + want + "'");
    }
    width_ = expected_header.size();
}

bool Reader::next(std::vector<std::string_view>& fields)
{
    while (pos_ < contents_.size()) {
        auto end = contents_.find('\n', pos_);
        if (end == std::string::npos) {
            end = contents_.size();
        }
        const std::string_view line = trim(std::string_view(contents_).substr(pos_, end - pos_));
        pos_ = end + 1;
        ++line_;
        if (line.empty() || line.front() == '#') {
            continue;
        }
        split(line, fields);
        if (width_ != 0 && fields.size() != width_) {
            fail("expected " + std::to_string(width_) + " fields, found " + std::to_string(fields.size()));
        }
        return true;
    }
    return false;
}

void Reader::fail(const std::string& message) const { throw InputError(file_, line_, message); }

double Reader::number(std::string_view field, const char* what) const
{
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
        fail(std::string("malformed ") + what + " '" + std::string(field) + "'");
    }
    return value;
}

long long Reader::integer(std::string_view field, const char* what) const
{
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
        fail(std::string("malformed ") + what + " '" + std::string(field) + "'");
    }
    return value;
}

std::string format_double(double value)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

} // namespace evsim::csv
