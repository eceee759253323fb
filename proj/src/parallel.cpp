#include "heislab/parallel.hpp"

#include <cstdlib>
#include <string>

#include "heislab/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace heislab {

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_thread_count(int threads) {
  if (threads < 1) throw InvalidArgument("thread count must be >= 1");
#ifdef _OPENMP
  omp_set_num_threads(threads);
#endif
}

int apply_thread_env() {
  if (const char* env = std::getenv("HEISLAB_THREADS")) {
    try {
      set_thread_count(std::stoi(env));
    } catch (const std::logic_error&) {
      throw InvalidArgument(std::string("HEISLAB_THREADS must be a positive integer, got '") + env + "'");
    }
  }
  return thread_count();
}

ScopedThreads::ScopedThreads(int threads) : previous_(thread_count()) { set_thread_count(threads); }

ScopedThreads::~ScopedThreads() {
#ifdef _OPENMP
  omp_set_num_threads(previous_);
#endif
}

}  // namespace heislab
