#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace amity {

/// Arbitrary-precision non-negative integer. All sigma and index arithmetic
/// runs on this type so nothing wraps silently.
using Natural = mpz_class;

/// Parses a decimal natural. Accepts plain digits ("1000"), a power
/// ("10^7") and digit separators ("1_000_000"). Throws DomainError.
Natural parse_natural(std::string_view text);

std::string to_string(const Natural& n);

bool fits_u64(const Natural& n);
std::uint64_t to_u64(const Natural& n);  // throws DomainError if it does not fit
Natural from_u64(std::uint64_t v);

Natural pow(const Natural& base, unsigned long exponent);

}  // namespace amity
