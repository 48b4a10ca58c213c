#pragma once

#include <string>
#include <vector>

#include "ell2/verify.hpp"

namespace ell2::suites {

// One entry per acceptance criterion, grouped by suite.
std::vector<Record> measure(const RunConfig& cfg);
std::vector<Record> cutoff(const RunConfig& cfg);
std::vector<Record> surface(const RunConfig& cfg);
std::vector<Record> dbar(const RunConfig& cfg);
std::vector<Record> ck(const RunConfig& cfg);
std::vector<Record> sobolev(const RunConfig& cfg);
std::vector<Record> determinism(const RunConfig& cfg);

}  // namespace ell2::suites
