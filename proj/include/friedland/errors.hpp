#pragma once

#include <stdexcept>
#include <string>

namespace friedland {

// Thrown when an enumeration (candidate pool, tree expansion, matrix size)
// would exceed its configured budget. Callers reduce depth/grid and retry.
class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace friedland
