#pragma once

#include <exception>
#include <vector>

#include "hdg/types.hpp"

namespace hdg {

/// Runs body(i) for i in [begin, end). Under the parallel policy iterations
/// are spread over OpenMP threads; an exception thrown by any iteration is
/// rethrown after the loop, and when several fail the lowest index wins so the
/// reported error does not depend on scheduling.
template <class Body>
void for_each_index(int begin, int end, ExecutionPolicy policy, Body&& body) {
  if (policy == ExecutionPolicy::serial) {
    for (int i = begin; i < end; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(end > begin ? end - begin : 0));
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = begin; i < end; ++i) {
    try {
      body(i);
    } catch (...) {
      errors[static_cast<std::size_t>(i - begin)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace hdg
