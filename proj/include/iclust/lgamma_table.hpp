#pragma once

#include <cmath>
#include <vector>

namespace iclust {

// lgamma(frac + t) for integer t in [0, len), filled eagerly, falling back
// to std::lgamma outside the table. Immutable after init; safe to share
// across threads. Collapsed marginals evaluate log-gamma at integer offsets
// of the prior hyperparameters, which makes these tables the hot path of
// swap epochs.
class LgammaShiftTable {
 public:
  LgammaShiftTable() = default;

  void init(double frac, std::size_t len) {
    frac_ = frac;
    vals_.resize(len);
    for (std::size_t t = 0; t < len; ++t)
      vals_[t] = std::lgamma(frac + static_cast<double>(t));
  }

  double operator()(long long t) const {
    return t >= 0 && static_cast<std::size_t>(t) < vals_.size()
               ? vals_[static_cast<std::size_t>(t)]
               : std::lgamma(frac_ + static_cast<double>(t));
  }

 private:
  double frac_ = 0.0;
  std::vector<double> vals_;
};

}  // namespace iclust
