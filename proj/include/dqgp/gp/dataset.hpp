#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dqgp/gp/kernel.hpp"

namespace dqgp::gp {

struct Sample {
  Input x;
  Vec3 y = Vec3::Zero();
};

/// Training data for three independent scalar GPs that share one kernel and
/// one noise variance. Value type: push() returns a new snapshot.
class GPDataset {
 public:
  static constexpr std::size_t kDefaultCapacity = 400;

  GPDataset() = default;
  GPDataset(InputSpace space, double noise_var, std::size_t capacity = kDefaultCapacity);

  /// Appends the batch, evicting the oldest samples past capacity (FIFO).
  /// Throws InvalidInput on malformed inputs or non-finite targets.
  GPDataset push(const std::vector<Sample>& batch) const;

  /// Same samples under a different noise variance.
  GPDataset with_noise_var(double noise_var) const;

  InputSpace space() const { return space_; }
  double noise_var() const { return noise_var_; }
  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return inputs_.size(); }
  bool empty() const { return inputs_.empty(); }
  /// Samples evicted over the dataset's lifetime.
  std::size_t evicted() const { return evicted_; }

  const std::vector<Input>& inputs() const { return inputs_; }
  const std::vector<Vec3>& targets() const { return targets_; }
  Eigen::MatrixXd target_matrix() const;  // N x 3

  void validate_input(const Input& x) const;

  /// Text format: one header line, then one row per sample.
  void save(const std::string& path) const;
  static GPDataset load(const std::string& path);

 private:
  InputSpace space_ = InputSpace::S3;
  double noise_var_ = 1.0;
  std::size_t capacity_ = kDefaultCapacity;
  std::size_t evicted_ = 0;
  std::vector<Input> inputs_;
  std::vector<Vec3> targets_;
};

}  // namespace dqgp::gp
