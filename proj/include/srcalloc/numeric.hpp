#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

namespace srcalloc {

// Recursive pairwise summation; blocks of eight are summed directly.
double pairwise_sum(std::span<const double> values) noexcept;

// Sum of elementwise products, accumulated pairwise.
double pairwise_dot(std::span<const double> a, std::span<const double> b);

// Column sums of a row-major rows x cols block, accumulated pairwise over
// rows. `out` must hold `cols` values.
void pairwise_column_sums(std::span<const double> data, std::size_t rows,
                          std::size_t cols, std::span<double> out);

// Round half to even.
std::int64_t round_half_even(double x) noexcept;

// Shortest decimal text that parses back to the same double.
std::string format_real(double x);

}  // namespace srcalloc
