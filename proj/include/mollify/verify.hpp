#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace mollify {

struct VerifyCheck {
    std::string name;
    std::function<bool(std::string& detail, uint64_t seed)> run;
};

/// Property checks for the convolution engine and the approximation
/// pipelines, one per library invariant.
const std::vector<VerifyCheck>& verify_checks();

/// Runs every check, prints one PASS/FAIL line each, returns the failure
/// count.
int run_verify(uint64_t seed, std::ostream& out);

}  // namespace mollify
