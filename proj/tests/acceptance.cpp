// One line per acceptance criterion; exit status 0 iff every criterion passes.
#include <cstdio>
#include <cstdlib>
#include <string>

#include "wrinkle/acceptance.hpp"

int main(int argc, char** argv) {
    wrinkle::AcceptanceOptions opts;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--no-diagnostics")
            opts.diagnostics = false;
        else
            opts.only.push_back(std::atoi(a.c_str()));
    }
    int failed = 0;
    wrinkle::run_acceptance(opts, [&](const wrinkle::CriterionResult& r) {
        std::printf("%s\n", wrinkle::format_result(r).c_str());
        std::fflush(stdout);
        if (!r.pass) ++failed;
    });
    std::printf("%d criteria failed\n", failed);
    return failed == 0 ? 0 : 1;
}
