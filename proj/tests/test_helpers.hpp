#pragma once

#include <stdexcept>
#include <utility>

#include "admflow/errors.hpp"

namespace admflow_test {

// Runs f, which must throw admflow::Error, and returns its kind.
template <typename F>
admflow::ErrorKind kind_of(F&& f) {
  try {
    std::forward<F>(f)();
  } catch (const admflow::Error& e) {
    return e.kind();
  }
  throw std::runtime_error("expected admflow::Error to be thrown");
}

}  // namespace admflow_test
