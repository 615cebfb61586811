#pragma once

#include <cstddef>
#include <exception>
#include <vector>

#include "enzq/types.hpp"

namespace enzq {

// Runs body(i) for i in [0, count). Under ExecPolicy::Parallel the iterations
// are distributed with OpenMP; an exception thrown by any iteration is
// rethrown after the loop, always the one from the lowest index, so both
// policies fail identically.
template <class Body>
void parallel_for(std::size_t count, ExecPolicy policy, Body&& body) {
  std::vector<std::exception_ptr> errors(count);
  const auto n = static_cast<long long>(count);
  if (policy == ExecPolicy::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < n; ++i) {
      try {
        body(static_cast<std::size_t>(i));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  } else {
    for (long long i = 0; i < n; ++i) {
      try {
        body(static_cast<std::size_t>(i));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
        break;
      }
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace enzq
