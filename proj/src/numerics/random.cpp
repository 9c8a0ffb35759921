#include "ftvp/numerics/random.hpp"

#include <cmath>

namespace ftvp {

namespace {

constexpr uint32_t kM0 = 0xD2511F53u;
constexpr uint32_t kM1 = 0xCD9E8D57u;
constexpr uint32_t kW0 = 0x9E3779B9u;
constexpr uint32_t kW1 = 0xBB67AE85u;

inline void mulhilo(uint32_t a, uint32_t b, uint32_t& hi, uint32_t& lo) {
  uint64_t p = uint64_t(a) * uint64_t(b);
  hi = uint32_t(p >> 32);
  lo = uint32_t(p);
}

}  // namespace

std::array<uint32_t, 4> philox4x32(std::array<uint32_t, 4> c,
                                   std::array<uint32_t, 2> k) {
  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      k[0] += kW0;
      k[1] += kW1;
    }
    uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kM0, c[0], hi0, lo0);
    mulhilo(kM1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
  return c;
}

// splitmix64 finalizer
uint64_t mix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

Rng::Rng(uint64_t seed, uint64_t stream) : seed_(seed), stream_(stream) {}

Rng Rng::split(uint64_t tag) const {
  uint64_t s = mix64(seed_ ^ mix64(stream_ ^ mix64(tag + 0x632BE59BD9B4E019ull)));
  return Rng(s, tag);
}

void Rng::refill() {
  std::array<uint32_t, 4> ctr = {uint32_t(counter_), uint32_t(counter_ >> 32),
                                 uint32_t(stream_), uint32_t(stream_ >> 32)};
  buf_ = philox4x32(ctr, {uint32_t(seed_), uint32_t(seed_ >> 32)});
  ++counter_;
  pos_ = 0;
}

uint32_t Rng::next_u32() {
  if (pos_ >= 4) refill();
  return buf_[pos_++];
}

uint64_t Rng::next_u64() {
  uint64_t hi = next_u32();
  uint64_t lo = next_u32();
  return (hi << 32) | lo;
}

double Rng::uniform() {
  return (double(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double th = 2.0 * M_PI * u2;
  spare_ = r * std::sin(th);
  has_spare_ = true;
  return r * std::cos(th);
}

// Marsaglia-Tsang, with the usual boost for shape < 1.
double Rng::gamma(double shape) {
  if (shape < 1.0) {
    double g = gamma(shape + 1.0);
    return g * std::pow(uniform(), 1.0 / shape);
  }
  double d = shape - 1.0 / 3.0;
  double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = normal();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

Eigen::VectorXd Rng::normal_vector(int n) {
  Eigen::VectorXd z(n);
  for (int i = 0; i < n; ++i) z[i] = normal();
  return z;
}

int Rng::categorical(const double* w, int k) {
  double tot = 0.0;
  for (int i = 0; i < k; ++i) tot += w[i];
  double u = uniform() * tot;
  double acc = 0.0;
  for (int i = 0; i < k; ++i) {
    acc += w[i];
    if (u < acc) return i;
  }
  return k - 1;
}

}  // namespace ftvp
