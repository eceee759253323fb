#pragma once

#include <cstdint>

namespace heislab {

/// Number of OpenMP threads parallel kernels will use (1 without OpenMP).
int thread_count();

/// Sets the OpenMP team size for subsequent kernels.
void set_thread_count(int threads);

/// Applies HEISLAB_THREADS if set; returns the resulting thread count.
int apply_thread_env();

/// Restores the previous team size on scope exit.
class ScopedThreads {
 public:
  explicit ScopedThreads(int threads);
  ~ScopedThreads();
  ScopedThreads(const ScopedThreads&) = delete;
  ScopedThreads& operator=(const ScopedThreads&) = delete;

 private:
  int previous_;
};

}  // namespace heislab
