#pragma once

#include <functional>
#include <optional>

#include "ellchar/finite_dl.hpp"
#include "ellchar/formula.hpp"

namespace ellchar {

struct CheckResult {
    std::string id;
    std::string anchor; // semantic tag of the identity being checked
    std::string input;
    std::string lhs, rhs;
    bool pass = false;
};

struct SuiteReport {
    std::string suite;
    long checked = 0;
    long failed = 0;
    std::vector<CheckResult> entries;
    void add(CheckResult r, bool keepEntries) {
        ++checked;
        if (!r.pass) ++failed;
        if (keepEntries || !r.pass) entries.push_back(std::move(r));
    }
};

struct SuiteConfig {
    long p = 3;
    int ell = 2;
    int precision = 12;
    unsigned long long seed = 1;
    int cutoff = 3;            // torus classes mod F* U^cutoff
    bool keepEntries = false;  // record passing checks too
};

// registered suites: name -> description
const std::vector<std::pair<std::string, std::string>>& suiteList();
SuiteReport runSuite(const std::string& name, const SuiteConfig& cfg);

// torus class representatives of E* mod F* U^{cutoff}
std::vector<ExtElement> torusClasses(const TameExtension& E, int cutoff);

// Separation of two regular pairs through the formula on the n(w) = 0 range.
struct SeparationResult {
    bool sameTorus;                   // compared on a shared torus
    bool equivalent;                  // formulas agree on every class
    int weylIndex = -1;               // chi_b = chi_a o sigma^k when equivalent
    std::optional<ExtElement> witness; // separating point otherwise
};
SeparationResult separationTest(const CharPair& a, const CharPair& b, int cutoff);

// depth-zero cross-check of the formula against the finite-field side
SuiteReport depthZeroCrosscheck(const SuiteConfig& cfg);

// deterministic stream seed derived from the run seed and a label
unsigned long long seedFor(unsigned long long seed, const std::string& label);

} // namespace ellchar
