#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>

namespace ftvp {

// Philox4x32-10 block function (counter-based, stateless).
std::array<uint32_t, 4> philox4x32(std::array<uint32_t, 4> ctr,
                                   std::array<uint32_t, 2> key);

// Counter-based random source. A (seed, stream) pair fixes the sequence;
// split() derives independent child streams so that parallel work can be
// scheduled in any order without changing results.
class Rng {
 public:
  using result_type = uint32_t;

  explicit Rng(uint64_t seed = 0, uint64_t stream = 0);

  Rng split(uint64_t tag) const;

  uint64_t seed() const { return seed_; }
  uint64_t stream() const { return stream_; }

  uint32_t operator()() { return next_u32(); }
  static constexpr uint32_t min() { return 0; }
  static constexpr uint32_t max() { return 0xffffffffu; }

  uint32_t next_u32();
  uint64_t next_u64();
  double uniform();  // open interval (0, 1)
  double normal();
  double gamma(double shape);  // unit scale
  double chi2(double df) { return 2.0 * gamma(0.5 * df); }
  Eigen::VectorXd normal_vector(int n);
  // Index drawn with probability proportional to w (need not be normalized).
  int categorical(const double* w, int k);

 private:
  void refill();

  uint64_t seed_;
  uint64_t stream_;
  uint64_t counter_ = 0;
  std::array<uint32_t, 4> buf_{};
  int pos_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

uint64_t mix64(uint64_t x);

}  // namespace ftvp
