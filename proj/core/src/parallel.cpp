#include "wavebasis/parallel.hpp"

#include <cstdlib>
#include <string>

namespace wavebasis {

int thread_count() {
  if (const char* env = std::getenv("WAVEBASIS_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return v;
    } catch (const std::exception&) {
      // fall through to the hardware default
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

}  // namespace wavebasis
