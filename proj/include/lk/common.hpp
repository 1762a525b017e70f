#ifndef LK_COMMON_HPP
#define LK_COMMON_HPP

#include <stdexcept>
#include <string>

namespace lk {

inline constexpr const char* kVersion = "0.1.0";

/// Thrown when a computation fails numerically (ill-conditioning, missing
/// root bracket, non-positive Gram matrix).  Argument misuse throws
/// std::invalid_argument instead.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

/// One-sided evaluation at breakpoints.
enum class Side { left, right };

}  // namespace lk

#endif
