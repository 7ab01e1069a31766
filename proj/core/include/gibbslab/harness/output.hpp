#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace gibbslab::harness {

// %.17g, so every double round-trips. Non-finite values print as nan/inf.
std::string format_real(double x);

// <base>/<command>-<hash>, created if missing.
std::filesystem::path invocation_dir(const std::filesystem::path& base, const std::string& command,
                                     const std::string& hash);

// Throws IoError.
void write_file(const std::filesystem::path& path, const std::string& contents);

// Minimal CSV builder; fields never contain separators except free-text
// messages, which are quoted.
class Csv {
public:
    explicit Csv(const std::vector<std::string>& header);
    Csv& cell(const std::string& text);
    Csv& cell(double x);
    Csv& cell(std::size_t x);
    Csv& quoted(const std::string& text);
    void end_row();
    const std::string& str() const { return out_; }

private:
    std::string out_;
    bool fresh_ = true;
};

}  // namespace gibbslab::harness
