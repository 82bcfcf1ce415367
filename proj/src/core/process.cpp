#include "core/process.hpp"

#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "core/error.hpp"

namespace chroma {

namespace fs = std::filesystem;

TempDir::TempDir(const std::string& prefix) {
    static std::mt19937_64 rng{std::random_device{}()};
    const fs::path base = fs::temp_directory_path();
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::ostringstream name;
        name << prefix << "-" << std::hex << rng();
        fs::path candidate = base / name.str();
        std::error_code ec;
        if (fs::create_directory(candidate, ec) && !ec) {
            path_ = candidate;
            return;
        }
    }
    fail(Errc::io, "could not create a scratch directory under " + base.string());
}

TempDir::~TempDir() {
    if (!path_.empty()) {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
}

std::string build_command(const std::string& command_template, const std::string& input,
                          const std::string& output) {
    auto replace_all = [](std::string s, const std::string& from, const std::string& to) {
        std::size_t pos = 0;
        while ((pos = s.find(from, pos)) != std::string::npos) {
            s.replace(pos, from.size(), to);
            pos += to.size();
        }
        return s;
    };
    const bool has_in = command_template.find("{input}") != std::string::npos;
    const bool has_out = command_template.find("{output}") != std::string::npos;
    if (has_in || has_out) {
        std::string cmd = replace_all(command_template, "{input}", input);
        return replace_all(cmd, "{output}", output);
    }
    return command_template + " --input " + input + " --output " + output;
}

ProcessResult run_command(const std::string& command, const fs::path& scratch) {
    const fs::path stderr_path = scratch / "stderr.txt";
    std::string full = "(" + command + ") 2> '" + stderr_path.string() + "'";
    int rc = std::system(full.c_str());

    ProcessResult result;
    if (rc == -1) {
        result.exit_code = -1;
        result.stderr_text = "failed to spawn shell";
        return result;
    }
#ifdef _WIN32
    result.exit_code = rc;
#else
    result.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : 128 + WTERMSIG(rc);
#endif
    std::ifstream err(stderr_path);
    if (err) {
        std::ostringstream ss;
        ss << err.rdbuf();
        result.stderr_text = ss.str();
    }
    return result;
}

} // namespace chroma
