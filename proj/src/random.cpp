#include "cgeom/random.hpp"

#include <cmath>
#include <numbers>

namespace cgeom {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_key(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t a = seed;
  const std::uint64_t hs = splitmix64(a);
  std::uint64_t b = stream ^ 0xD1B54A32D192ED03ULL;
  const std::uint64_t hi = splitmix64(b);
  std::uint64_t c = hs ^ (hi + 0x632BE59BD9B4E019ULL + (hs << 6) + (hs >> 2));
  return splitmix64(c);
}

namespace {
inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
}  // namespace

CounterStream::CounterStream(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t state = derive_key(seed, stream);
  for (auto& s : s_) s = splitmix64(state);
}

std::uint64_t CounterStream::next_u64() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double CounterStream::uniform() {
  // 53 random bits, shifted off zero.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterStream::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  cached_ = r * std::sin(theta);
  has_cached_ = true;
  return r * std::cos(theta);
}

Vec CounterStream::normal_vector(int dim) {
  Vec v(dim);
  fill_normal(v);
  return v;
}

void CounterStream::fill_normal(Vec& out) {
  for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = normal();
}

int CounterStream::uniform_int(int lo, int hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(next_u64() % span);
}

}  // namespace cgeom
