#pragma once

#include <cstddef>
#include <exception>
#include <vector>

#include <omp.h>

namespace orchard {

/// Selects between the serial reference loop and the OpenMP kernel. Both
/// produce identical results: iterations write only to their own slot.
enum class Execution { Serial, Parallel };

/// Calls body(i) for i in [0, n). In parallel mode an exception thrown by any
/// iteration is rethrown after the loop; the one from the lowest index wins
/// so failures are reported deterministically.
template <class Body>
void for_each_index(Execution exec, std::size_t n, Body&& body) {
  if (exec == Execution::Serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

inline int max_threads() { return omp_get_max_threads(); }

}  // namespace orchard
