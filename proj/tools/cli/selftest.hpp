#pragma once

#include <cstdint>
#include <ostream>

namespace gstab::cli {

/// Runs the invariant suites at reduced size; one line per check. Returns 0 iff all pass.
int selftest(std::uint64_t seed, std::ostream& out);

}  // namespace gstab::cli
