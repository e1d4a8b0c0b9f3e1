// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Run a single criterion with --criterion N.

#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "dimer/verify.hpp"

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
    }

    std::vector<dimer::CheckResult> results;
    if (only > 0) {
        results.push_back(dimer::run_criterion(only));
    } else {
        for (int id = 1; id <= 10; ++id) results.push_back(dimer::run_criterion(id));
    }

    bool all_pass = true;
    for (const auto& r : results) {
        std::printf("[%s] criterion %d: %s | measured %.6g %s target %.6g | %.2fs | %s\n",
                    r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.measured,
                    r.exceed_target ? ">" : "<=", r.target, r.seconds, r.note.c_str());
        all_pass = all_pass && r.pass;
    }
    return all_pass ? 0 : 1;
}
