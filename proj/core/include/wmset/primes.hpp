#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "wmset/bigint.hpp"

namespace wmset::primes {

/// All primes p <= n, ascending.
std::vector<std::uint64_t> up_to(std::uint64_t n);

/// Zero-based: nth(0) == 2.
std::uint64_t nth(std::size_t i);

/// Number of primes <= n.
std::size_t count_up_to(std::uint64_t n);

/// Zero-based position of p in the prime sequence, or nullopt if p is not prime.
std::optional<std::size_t> position(std::uint64_t p);

bool is_prime(std::uint64_t n);

/// Prime factorization by trial division, ascending primes with multiplicity.
std::vector<std::pair<std::uint64_t, unsigned>> factorize(const BigInt& n);

}  // namespace wmset::primes
