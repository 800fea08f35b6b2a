#include "dqgp/gp/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dqgp/errors.hpp"

namespace dqgp::gp {

GPDataset::GPDataset(InputSpace space, double noise_var, std::size_t capacity)
    : space_(space), noise_var_(noise_var), capacity_(capacity) {
  if (!(noise_var >= 0.0) || !std::isfinite(noise_var)) {
    throw InvalidInput("noise variance must be finite and nonnegative");
  }
  if (capacity == 0) {
    throw InvalidInput("dataset capacity must be positive");
  }
}

GPDataset GPDataset::with_noise_var(double noise_var) const {
  GPDataset out(space_, noise_var, capacity_);
  out.evicted_ = evicted_;
  out.inputs_ = inputs_;
  out.targets_ = targets_;
  return out;
}

void GPDataset::validate_input(const Input& x) const {
  const int dim = input_dim(space_);
  if (x.size() != dim) {
    std::ostringstream os;
    os << "expected a " << dim << "-vector input for " << to_string(space_) << ", got " << x.size();
    throw InvalidInput(os.str());
  }
  if (!x.allFinite()) {
    throw InvalidInput("input has non-finite entries");
  }
  if (space_ == InputSpace::S3) {
    if (std::abs(x.norm() - 1.0) > UnitQuaternion::kTolerance) {
      throw InvalidInput("S3 input is not a unit quaternion");
    }
  } else {
    std::array<double, 8> a{};
    for (int i = 0; i < 8; ++i) a[static_cast<std::size_t>(i)] = x(i);
    if (UnitDualQuaternion::unit_residual(DualQuaternion::from_array(a)) > UnitDualQuaternion::kTolerance) {
      throw InvalidInput("SE3 input is not a unit dual quaternion");
    }
  }
}

GPDataset GPDataset::push(const std::vector<Sample>& batch) const {
  for (const Sample& s : batch) {
    validate_input(s.x);
    if (!s.y.allFinite()) {
      throw InvalidInput("target has non-finite entries");
    }
  }
  GPDataset out = *this;
  for (const Sample& s : batch) {
    out.inputs_.push_back(s.x);
    out.targets_.push_back(s.y);
  }
  if (out.inputs_.size() > capacity_) {
    const std::size_t drop = out.inputs_.size() - capacity_;
    out.inputs_.erase(out.inputs_.begin(), out.inputs_.begin() + static_cast<std::ptrdiff_t>(drop));
    out.targets_.erase(out.targets_.begin(), out.targets_.begin() + static_cast<std::ptrdiff_t>(drop));
    out.evicted_ += drop;
  }
  return out;
}

Eigen::MatrixXd GPDataset::target_matrix() const {
  Eigen::MatrixXd y(static_cast<Eigen::Index>(size()), 3);
  for (std::size_t i = 0; i < size(); ++i) y.row(static_cast<Eigen::Index>(i)) = targets_[i].transpose();
  return y;
}

void GPDataset::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) {
    throw Error("cannot open '" + path + "' for writing");
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", noise_var_);
  out << "# dqgp-dataset v1 space=" << to_string(space_) << " noise_var=" << buf << " capacity=" << capacity_
      << " n=" << size() << "\n";
  for (std::size_t i = 0; i < size(); ++i) {
    const Input& x = inputs_[i];
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", x(k));
      out << (k ? "," : "") << buf;
    }
    for (int k = 0; k < 3; ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", targets_[i](k));
      out << "," << buf;
    }
    out << "\n";
  }
  if (!out) {
    throw Error("write to '" + path + "' failed");
  }
}

GPDataset GPDataset::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot open '" + path + "'");
  }
  std::string line;
  std::getline(in, line);
  std::istringstream hs(line);
  std::string hash, tag, version, field;
  hs >> hash >> tag >> version;
  if (hash != "#" || tag != "dqgp-dataset" || version != "v1") {
    throw InvalidInput("'" + path + "' is not a dqgp dataset file");
  }
  std::string space = "S3";
  double noise = 1.0;
  std::size_t cap = kDefaultCapacity, n = 0;
  while (hs >> field) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = field.substr(0, eq), val = field.substr(eq + 1);
    if (key == "space") space = val;
    else if (key == "noise_var") noise = std::stod(val);
    else if (key == "capacity") cap = std::stoul(val);
    else if (key == "n") n = std::stoul(val);
  }
  GPDataset ds(input_space_from_string(space), noise, cap);
  const int dim = input_dim(ds.space_);
  std::vector<Sample> batch;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> vals;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) vals.push_back(std::stod(cell));
    if (static_cast<int>(vals.size()) != dim + 3) {
      throw InvalidInput("dataset row has the wrong number of columns");
    }
    Sample s;
    s.x = Eigen::Map<const Eigen::VectorXd>(vals.data(), dim);
    s.y = Vec3(vals[dim], vals[dim + 1], vals[dim + 2]);
    batch.push_back(std::move(s));
  }
  if (batch.size() != n) {
    throw InvalidInput("dataset row count does not match its header");
  }
  return ds.push(batch);
}

}  // namespace dqgp::gp
