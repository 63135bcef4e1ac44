#ifndef DYONLAB_VERIFY_HPP
#define DYONLAB_VERIFY_HPP

#include <cstdint>

#include "dyonlab/report.hpp"

namespace dyonlab {

struct VerifyOptions {
  std::uint64_t seed = 0;
  // Parallelism cap; 0 means the DYONLAB_THREADS environment variable (or
  // hardware concurrency when unset).
  int threads = 0;
};

// Runs the whole numeric verification battery and returns one residual /
// tolerance entry per relation checked. Entry order is fixed; results do not
// depend on the thread count.
VerificationReport run_all_checks(const VerifyOptions& options);

}  // namespace dyonlab

#endif
