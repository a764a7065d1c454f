#pragma once

#include "cgeom/io.hpp"

#include <doctest.h>

#include <string>

namespace testutil {

inline std::string data(const std::string& name) { return std::string(CGEOM_TEST_DATA) + "/" + name; }

inline cgeom::DiscreteSphericalMeasure measure(const std::string& name) {
  return cgeom::measure_from_json(cgeom::read_json_file(data(name)));
}

inline cgeom::Subspace subspace(const std::string& name) {
  return cgeom::subspace_from_json(cgeom::read_json_file(data(name)));
}

inline cgeom::Mat rows(std::initializer_list<std::initializer_list<double>> r) {
  cgeom::Mat m(static_cast<Eigen::Index>(r.size()), static_cast<Eigen::Index>(r.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& row : r) {
    Eigen::Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

inline cgeom::Vec vec(std::initializer_list<double> v) {
  cgeom::Vec x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double e : v) x[i++] = e;
  return x;
}

// |a - b| <= k sigma.
inline bool within_sigma(double a, double b, double sigma, double k = 3.0) {
  return std::abs(a - b) <= k * sigma;
}

}  // namespace testutil
