#pragma once

#include <cstdint>
#include <random>

#include "dqgp/dq/quaternion.hpp"

namespace dqgp::sim {

/// splitmix64 finalizer, used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Seeded generator with a fully specified output sequence: mt19937_64
/// (fixed by the C++ standard), a 53-bit uniform and a Box-Muller normal.
/// The standard library distributions are avoided because their algorithms
/// are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0, std::uint64_t stream = 0);

  std::uint64_t next_u64() { return eng_(); }
  /// Uniform on [0, 1).
  double uniform();
  /// Standard normal.
  double normal();
  Vec3 normal3() { return {normal(), normal(), normal()}; }
  /// Uniform direction on the unit sphere.
  Vec3 unit_vector();

  bool operator==(const Rng& o) const {
    return eng_ == o.eng_ && has_spare_ == o.has_spare_ && (!has_spare_ || spare_ == o.spare_);
  }

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace dqgp::sim
