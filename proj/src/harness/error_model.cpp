#include "dynoracle/harness/error_model.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <random>

namespace dynoracle::harness {

std::optional<ErrorModel> parse_error_model(const std::string& text, std::uint64_t seed) {
  if (text == "exact") return ErrorModel::exact(seed);
  const auto colon = text.find(':');
  if (colon == std::string::npos) return std::nullopt;
  const std::string name = text.substr(0, colon);
  const std::string arg = text.substr(colon + 1);
  if (name == "unpredicted") {
    try {
      std::size_t used = 0;
      const double q = std::stod(arg, &used);
      if (used != arg.size() || q < 0.0 || q > 1.0) return std::nullopt;
      return ErrorModel::unpredicted_rate(q, seed);
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), value);
  if (ec != std::errc{} || ptr != arg.data() + arg.size()) return std::nullopt;
  if (name == "linf") return ErrorModel::linf_window(value, seed);
  if (name == "swap") return ErrorModel::swap_count(value, seed);
  return std::nullopt;
}

std::string describe(const ErrorModel& model) {
  switch (model.kind) {
    case ErrorKind::kExact:
      return "exact";
    case ErrorKind::kLinfWindow:
      return "linf:" + std::to_string(model.param);
    case ErrorKind::kSwapCount:
      return "swap:" + std::to_string(model.param);
    case ErrorKind::kUnpredictedRate:
      break;
  }
  std::string q = std::to_string(model.rate);
  while (q.size() > 1 && q.back() == '0') q.pop_back();
  return "unpredicted:" + q;
}

Perturbation perturb(std::size_t m, const ErrorModel& model) {
  Perturbation out;
  out.order.resize(m);
  std::iota(out.order.begin(), out.order.end(), std::size_t{0});
  out.unpredicted.assign(m, false);
  std::mt19937_64 rng(model.seed);

  switch (model.kind) {
    case ErrorKind::kExact:
      break;
    case ErrorKind::kLinfWindow: {
      const std::size_t width = model.param + 1;
      for (std::size_t start = 0; start < m; start += width) {
        const std::size_t stop = std::min(m, start + width);
        std::shuffle(out.order.begin() + static_cast<std::ptrdiff_t>(start),
                     out.order.begin() + static_cast<std::ptrdiff_t>(stop), rng);
      }
      break;
    }
    case ErrorKind::kSwapCount: {
      if (m < 2) break;
      std::uniform_int_distribution<std::size_t> pick(0, m - 2);
      for (std::size_t i = 0; i < model.param; ++i) {
        const std::size_t j = pick(rng);
        std::swap(out.order[j], out.order[j + 1]);
      }
      break;
    }
    case ErrorKind::kUnpredictedRate: {
      std::bernoulli_distribution coin(model.rate);
      for (std::size_t j = 0; j < m; ++j) out.unpredicted[j] = coin(rng);
      break;
    }
  }
  out.eta_inf = max_displacement(out.order);
  out.eta_l1 = total_displacement(out.order);
  return out;
}

std::size_t max_displacement(const std::vector<std::size_t>& order) {
  std::size_t best = 0;
  for (std::size_t j = 0; j < order.size(); ++j) {
    best = std::max(best, order[j] > j ? order[j] - j : j - order[j]);
  }
  return best;
}

std::size_t total_displacement(const std::vector<std::size_t>& order) {
  std::size_t sum = 0;
  for (std::size_t j = 0; j < order.size(); ++j) sum += order[j] > j ? order[j] - j : j - order[j];
  return sum;
}

}  // namespace dynoracle::harness
