#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

#ifdef HCS_HAVE_OPENMP
#include <omp.h>
#endif

namespace hcs {

/// Execution policy for kernels that have both an OpenMP and a serial path.
enum class Exec { Serial, Parallel };

inline int max_threads() {
#ifdef HCS_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_threads(int n) {
#ifdef HCS_HAVE_OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

/// Captures the first exception thrown inside a parallel region so it can be
/// rethrown on the calling thread.
class ExceptionSlot {
 public:
  template <class F>
  void run(F&& f) noexcept {
    try {
      f();
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu_);
      if (!error_) error_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::mutex mu_;
  std::exception_ptr error_;
};

/// Runs body(i) for i in [0, n). Iterations must be independent.
template <class Body>
void for_each_index(std::size_t n, Exec exec, Body&& body) {
  ExceptionSlot slot;
  const auto count = static_cast<long long>(n);
#ifdef HCS_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic, 16) if (exec == Exec::Parallel)
#endif
  for (long long i = 0; i < count; ++i) {
    slot.run([&] { body(static_cast<std::size_t>(i)); });
  }
  (void)exec;
  slot.rethrow();
}

}  // namespace hcs
