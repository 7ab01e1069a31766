#include "gibbslab/harness/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "gibbslab/errors.hpp"

namespace gibbslab::harness {

std::string format_real(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::filesystem::path invocation_dir(const std::filesystem::path& base, const std::string& command,
                                     const std::string& hash) {
    const auto dir = base / (command + "-" + hash);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    return dir;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << contents;
    out.flush();
    if (!out) throw IoError("write to " + path.string() + " failed");
}

Csv::Csv(const std::vector<std::string>& header) {
    for (const auto& h : header) cell(h);
    end_row();
}

Csv& Csv::cell(const std::string& text) {
    if (!fresh_) out_ += ',';
    out_ += text;
    fresh_ = false;
    return *this;
}

Csv& Csv::cell(double x) { return cell(format_real(x)); }

Csv& Csv::cell(std::size_t x) { return cell(std::to_string(x)); }

Csv& Csv::quoted(const std::string& text) {
    std::string q = "\"";
    for (char c : text) {
        if (c == '"') q += '"';
        q += c == '\n' ? ' ' : c;
    }
    q += '"';
    return cell(text.empty() ? std::string() : q);
}

void Csv::end_row() {
    out_ += '\n';
    fresh_ = true;
}

}  // namespace gibbslab::harness
