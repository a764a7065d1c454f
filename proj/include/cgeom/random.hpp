#pragma once

#include "cgeom/types.hpp"

#include <cstdint>

namespace cgeom {

std::uint64_t splitmix64(std::uint64_t& state);

/// Derives an independent 64-bit key from (seed, stream index).  Used to give
/// every Monte Carlo sample and every sweep instance its own substream, so
/// results never depend on evaluation order or thread count.
std::uint64_t derive_key(std::uint64_t seed, std::uint64_t stream);

/// xoshiro256** generator keyed by (seed, stream).  Normals use Box-Muller
/// written out here, so sequences do not depend on the standard library's
/// distribution implementations.
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1).
  double uniform();
  double normal();
  Vec normal_vector(int dim);
  void fill_normal(Vec& out);
  /// Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi);

 private:
  std::uint64_t s_[4];
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace cgeom
