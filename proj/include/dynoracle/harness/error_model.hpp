// Prediction error generators: how a realized order strays from the predicted one.
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dynoracle::harness {

enum class ErrorKind { kExact, kLinfWindow, kSwapCount, kUnpredictedRate };

struct ErrorModel {
  ErrorKind kind = ErrorKind::kExact;
  std::size_t param = 0;  // window width w or swap count k
  double rate = 0.0;      // unpredicted fraction q
  std::uint64_t seed = 1;

  static ErrorModel exact(std::uint64_t seed = 1) { return {ErrorKind::kExact, 0, 0.0, seed}; }
  static ErrorModel linf_window(std::size_t w, std::uint64_t seed = 1) {
    return {ErrorKind::kLinfWindow, w, 0.0, seed};
  }
  static ErrorModel swap_count(std::size_t k, std::uint64_t seed = 1) {
    return {ErrorKind::kSwapCount, k, 0.0, seed};
  }
  static ErrorModel unpredicted_rate(double q, std::uint64_t seed = 1) {
    return {ErrorKind::kUnpredictedRate, 0, q, seed};
  }
};

/// Accepts "exact", "linf:W", "swap:K" and "unpredicted:Q".
std::optional<ErrorModel> parse_error_model(const std::string& text, std::uint64_t seed = 1);
std::string describe(const ErrorModel& model);

struct Perturbation {
  /// order[j] = predicted index of the item realized at position j.
  std::vector<std::size_t> order;
  /// Realized positions whose item should be replaced by something unpredicted.
  std::vector<bool> unpredicted;
  std::size_t eta_inf = 0;
  std::size_t eta_l1 = 0;
};

/// linf_window(w) shuffles disjoint windows of w+1 items; swap_count(k)
/// applies k random adjacent transpositions; unpredicted_rate keeps the order
/// and marks each position independently with probability q.
Perturbation perturb(std::size_t m, const ErrorModel& model);

std::size_t max_displacement(const std::vector<std::size_t>& order);
std::size_t total_displacement(const std::vector<std::size_t>& order);

}  // namespace dynoracle::harness
