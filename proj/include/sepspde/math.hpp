#pragma once

#include <Eigen/Dense>

#include <cstddef>

namespace sepspde {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

namespace detail {

template <typename Fetch>
double pairwise_sum_impl(const Fetch& fetch, std::ptrdiff_t begin, std::ptrdiff_t end) {
  const std::ptrdiff_t n = end - begin;
  if (n <= 32) {
    double acc = 0.0;
    for (std::ptrdiff_t i = begin; i < end; ++i) acc += fetch(i);
    return acc;
  }
  const std::ptrdiff_t mid = begin + n / 2;
  return pairwise_sum_impl(fetch, begin, mid) + pairwise_sum_impl(fetch, mid, end);
}

}  // namespace detail

/// Pairwise (cascade) summation: deterministic order, O(eps log n) error.
template <typename Fetch>
double pairwise_sum(std::ptrdiff_t n, const Fetch& fetch) {
  if (n <= 0) return 0.0;
  return detail::pairwise_sum_impl(fetch, 0, n);
}

inline double pairwise_sum(const Eigen::Ref<const Vector>& v) {
  return pairwise_sum(v.size(), [&](std::ptrdiff_t i) { return v[i]; });
}

inline double pairwise_mean(const Eigen::Ref<const Vector>& v) {
  return pairwise_sum(v) / static_cast<double>(v.size());
}

}  // namespace sepspde
