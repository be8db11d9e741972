#pragma once

#include <stdexcept>
#include <string>

namespace emf {

// Every failure raised by the library derives from this type so callers can
// catch simulator errors separately from std::bad_alloc and friends.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace emf
