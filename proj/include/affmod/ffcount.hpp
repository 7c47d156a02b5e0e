#pragma once

#include <optional>

#include "affmod/poly.hpp"

namespace affmod {

struct CountReport {
  uint32_t q = 0;
  size_t k = 0;
  uint64_t n_x = 0;      // points on uv = p
  uint64_t n_zero = 0;   // points on p = 0
  uint64_t predicted = 0; // q^k (q-1) + n_zero * q
  bool match = false;
};

// Exact number of common zeros in F_q^vars by exhaustive enumeration.
// Coefficients are reduced mod q (denominators must be invertible).
uint64_t count_points(const std::vector<QPoly>& eqs, uint32_t q,
                      uint64_t max_cells = 100000000ull);

CountReport uv_identity(const QPoly& p, uint32_t q, uint64_t max_cells = 100000000ull);

// A point where all equations and all their partials vanish, if found
// within the sample budget; absence is not a smoothness proof.
std::optional<std::vector<uint32_t>> singular_witness(const std::vector<QPoly>& eqs,
                                                      uint32_t q, uint64_t sample_budget,
                                                      uint64_t seed = 1);

bool is_prime_u32(uint32_t q);

} // namespace affmod
