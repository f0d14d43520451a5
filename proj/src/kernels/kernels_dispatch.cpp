#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>

#include "kernels/kernels_internal.hpp"

namespace countrank::kernels {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend initial_backend() {
  Backend chosen = backend_supported(Backend::avx2) ? Backend::avx2 : Backend::scalar;
  if (const char* env = std::getenv("COUNTRANK_SIMD")) {
    const std::string_view v(env);
    if (v == "scalar") chosen = Backend::scalar;
    else if (v == "avx2" && backend_supported(Backend::avx2)) chosen = Backend::avx2;
  }
  return chosen;
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> b{initial_backend()};
  return b;
}

}  // namespace

bool backend_supported(Backend b) noexcept {
  switch (b) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
      return detail::has_avx2_table && cpu_has_avx2();
  }
  return false;
}

std::string_view backend_name(Backend b) noexcept {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

const KernelTable& table_for(Backend b) {
  if (!backend_supported(b)) {
    throw std::invalid_argument("SIMD backend not supported on this CPU: " + std::string(backend_name(b)));
  }
  return b == Backend::avx2 ? detail::avx2_table : detail::scalar_table;
}

Backend active_backend() noexcept { return current().load(std::memory_order_relaxed); }

void set_backend(Backend b) {
  (void)table_for(b);
  current().store(b, std::memory_order_relaxed);
}

const KernelTable& active() noexcept {
  return active_backend() == Backend::avx2 ? detail::avx2_table : detail::scalar_table;
}

}  // namespace countrank::kernels
