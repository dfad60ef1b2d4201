#include "amity/exact_ratio.hpp"

#include "amity/errors.hpp"

namespace amity {

ExactRatio::ExactRatio(const Natural& numerator, const Natural& denominator) {
  if (sgn(denominator) <= 0) throw DomainError("ratio denominator must be >= 1");
  if (sgn(numerator) < 0) throw DomainError("ratio numerator must be >= 0");
  value_ = mpq_class(numerator, denominator);
  value_.canonicalize();
}

ExactRatio ExactRatio::whole(const Natural& n) { return ExactRatio(n, 1); }

ExactRatio ExactRatio::parse(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return whole(parse_natural(text));
  return ExactRatio(parse_natural(text.substr(0, slash)), parse_natural(text.substr(slash + 1)));
}

std::string ExactRatio::to_string() const {
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

ExactRatio& ExactRatio::operator*=(const ExactRatio& rhs) {
  value_ *= rhs.value_;
  return *this;
}

ExactRatio& ExactRatio::operator/=(const ExactRatio& rhs) {
  if (sgn(rhs.value_) == 0) throw DomainError("division by a zero ratio");
  value_ /= rhs.value_;
  return *this;
}

}  // namespace amity
