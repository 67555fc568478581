#pragma once

#include <ostream>

namespace levmem {

// Run the ten-point acceptance battery, printing one [PASS]/[FAIL] line per
// criterion to `out`. Returns the number of failed criteria (0 = all green).
// Every check uses fixed seeds and is fully deterministic.
int run_acceptance(std::ostream& out);

} // namespace levmem
