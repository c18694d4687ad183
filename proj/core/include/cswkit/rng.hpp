#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace cswkit {

/// Portable seeded generator. The engine is fully specified by the standard;
/// bounded draws and shuffles are done here rather than through the
/// implementation-defined distributions, so sequences match across toolchains.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [0, bound). `bound` must be positive.
  std::uint64_t below(std::uint64_t bound);

  template <class T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      using std::swap;
      swap(values[i - 1], values[j]);
    }
  }

  /// k distinct indices from [0, n), in draw order.
  std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k);

 private:
  std::mt19937_64 engine_;
};

/// Mixes a run seed with a per-instance key (pair id, language) so an
/// instance's draws do not depend on processing order.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view key) noexcept;

}  // namespace cswkit
