#include "srcalloc/numeric.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace srcalloc {
namespace {

constexpr std::size_t kBlock = 8;

void column_sums_range(std::span<const double> data, std::size_t cols,
                       std::size_t first, std::size_t last,
                       std::span<double> out) {
  if (last - first <= kBlock) {
    for (std::size_t c = 0; c < cols; ++c) out[c] = 0.0;
    for (std::size_t r = first; r < last; ++r) {
      for (std::size_t c = 0; c < cols; ++c) out[c] += data[r * cols + c];
    }
    return;
  }
  const std::size_t mid = first + (last - first) / 2;
  std::vector<double> right(cols);
  column_sums_range(data, cols, first, mid, out);
  column_sums_range(data, cols, mid, last, right);
  for (std::size_t c = 0; c < cols; ++c) out[c] += right[c];
}

}  // namespace

double pairwise_sum(std::span<const double> values) noexcept {
  if (values.size() <= kBlock) {
    double s = 0.0;
    for (const double v : values) s += v;
    return s;
  }
  const std::size_t mid = values.size() / 2;
  return pairwise_sum(values.first(mid)) + pairwise_sum(values.subspan(mid));
}

double pairwise_dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("pairwise_dot: length mismatch");
  }
  std::vector<double> products(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) products[i] = a[i] * b[i];
  return pairwise_sum(products);
}

void pairwise_column_sums(std::span<const double> data, std::size_t rows,
                          std::size_t cols, std::span<double> out) {
  if (data.size() != rows * cols || out.size() != cols) {
    throw std::invalid_argument("pairwise_column_sums: shape mismatch");
  }
  column_sums_range(data, cols, 0, rows, out);
}

std::int64_t round_half_even(double x) noexcept {
  const double floor_x = std::floor(x);
  const double diff = x - floor_x;
  auto result = static_cast<std::int64_t>(floor_x);
  if (diff > 0.5 || (diff == 0.5 && (result % 2 != 0))) ++result;
  return result;
}

std::string format_real(double x) {
  if (x == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

}  // namespace srcalloc
