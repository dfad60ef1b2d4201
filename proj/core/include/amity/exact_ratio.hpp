#pragma once

#include <compare>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "amity/natural.hpp"

namespace amity {

/// Non-negative rational kept in lowest terms with a positive denominator.
class ExactRatio {
 public:
  ExactRatio() = default;
  ExactRatio(const Natural& numerator, const Natural& denominator);
  static ExactRatio whole(const Natural& n);

  /// Accepts "p/q" or a bare natural "n". Throws DomainError.
  static ExactRatio parse(std::string_view text);

  Natural numerator() const { return value_.get_num(); }
  Natural denominator() const { return value_.get_den(); }
  bool is_whole() const { return value_.get_den() == 1; }

  /// Always "p/q", including "3/1".
  std::string to_string() const;

  ExactRatio& operator*=(const ExactRatio& rhs);
  ExactRatio& operator/=(const ExactRatio& rhs);
  friend ExactRatio operator*(ExactRatio lhs, const ExactRatio& rhs) { return lhs *= rhs; }
  friend ExactRatio operator/(ExactRatio lhs, const ExactRatio& rhs) { return lhs /= rhs; }

  friend bool operator==(const ExactRatio& a, const ExactRatio& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const ExactRatio& a, const ExactRatio& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  explicit ExactRatio(mpq_class v) : value_(std::move(v)) {}
  mpq_class value_{0};
};

}  // namespace amity
