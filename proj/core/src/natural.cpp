#include "amity/natural.hpp"

#include <cctype>

#include "amity/errors.hpp"

namespace amity {

namespace {

Natural parse_digits(std::string_view text, std::string_view whole) {
  std::string digits;
  digits.reserve(text.size());
  for (char c : text) {
    if (c == '_' || c == '\'') continue;
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw DomainError("not a natural number: '" + std::string(whole) + "'");
    }
    digits.push_back(c);
  }
  if (digits.empty()) throw DomainError("not a natural number: '" + std::string(whole) + "'");
  return Natural(digits, 10);
}

}  // namespace

Natural parse_natural(std::string_view text) {
  auto caret = text.find('^');
  if (caret == std::string_view::npos) return parse_digits(text, text);
  Natural base = parse_digits(text.substr(0, caret), text);
  Natural exponent = parse_digits(text.substr(caret + 1), text);
  if (!exponent.fits_ulong_p() || exponent > 1'000'000) {
    throw DomainError("exponent too large in '" + std::string(text) + "'");
  }
  return pow(base, exponent.get_ui());
}

std::string to_string(const Natural& n) { return n.get_str(10); }

bool fits_u64(const Natural& n) {
  return sgn(n) >= 0 && mpz_sizeinbase(n.get_mpz_t(), 2) <= 64;
}

std::uint64_t to_u64(const Natural& n) {
  if (!fits_u64(n)) throw DomainError("value does not fit in 64 bits: " + to_string(n));
  std::uint64_t out = 0;
  std::size_t count = 0;
  mpz_export(&out, &count, -1, sizeof(out), 0, 0, n.get_mpz_t());
  return out;
}

Natural from_u64(std::uint64_t v) {
  Natural out;
  mpz_import(out.get_mpz_t(), 1, -1, sizeof(v), 0, 0, &v);
  return out;
}

Natural pow(const Natural& base, unsigned long exponent) {
  Natural out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent);
  return out;
}

}  // namespace amity
