#pragma once

#include <filesystem>
#include <string>

namespace chroma {

/// Scratch directory under the system temp root, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& prefix = "chromalight");
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

/// Fills {input}/{output} placeholders when present; otherwise appends
/// `--input <in> --output <out>` to the command.
std::string build_command(const std::string& command_template, const std::string& input,
                          const std::string& output);

struct ProcessResult {
    int exit_code = -1;
    std::string stderr_text;
};

/// Runs the command through the shell, capturing stderr.
ProcessResult run_command(const std::string& command, const std::filesystem::path& scratch);

} // namespace chroma
