#pragma once

// Shared plumbing for the acceptance binaries: a tiny pass/fail reporter
// with per-criterion timing.

#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

namespace acceptance {

class Reporter {
public:
    // Runs one criterion; the body returns true on pass and may append
    // detail text through the out-parameter.
    void criterion(const std::string& label,
                   const std::function<bool(std::string&)>& body)
    {
        const auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool pass = false;
        try {
            pass = body(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          start)
                .count();
        std::printf("[%s] %s (%.1f s)%s%s\n", pass ? "PASS" : "FAIL",
                    label.c_str(), seconds, detail.empty() ? "" : " — ",
                    detail.c_str());
        std::fflush(stdout);
        if (!pass)
            ++failures_;
    }

    int exit_code() const { return failures_ == 0 ? 0 : 1; }
    int failures() const { return failures_; }

private:
    int failures_ = 0;
};

inline std::string fmt(const char* format, ...)
{
    char buffer[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buffer, sizeof(buffer), format, args);
    va_end(args);
    return buffer;
}

} // namespace acceptance
