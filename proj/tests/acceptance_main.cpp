// Acceptance suite: runs the full verification matrix and prints one
// pass/fail line per criterion. Exit status is nonzero when anything fails.
//
// Usage: acceptance [--seed N] [--jobs N] [--out DIR]

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <iostream>
#include <string>

#include "xcfb/verify.hpp"

int main(int argc, char** argv) {
    std::uint64_t seed = 42;
    int jobs = 8;
    std::string out_dir = (std::filesystem::temp_directory_path() / "xcfb_acceptance").string();
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc) seed = std::stoull(argv[++i]);
        else if (std::strcmp(argv[i], "--jobs") == 0 && i + 1 < argc) jobs = std::stoi(argv[++i]);
        else if (std::strcmp(argv[i], "--out") == 0 && i + 1 < argc) out_dir = argv[++i];
        else {
            std::cerr << "usage: acceptance [--seed N] [--jobs N] [--out DIR]\n";
            return 2;
        }
    }

    const auto results = xcfb::run_acceptance(seed, jobs, out_dir);
    std::cout << xcfb::format_results(results);
    if (xcfb::all_passed(results)) {
        std::cout << "acceptance: all " << results.size() << " criteria passed\n";
        return 0;
    }
    std::cout << "acceptance: FAILED\n";
    return 1;
}
