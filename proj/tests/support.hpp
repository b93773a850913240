// Shared generators for the property tests.  Fixed seeds keep runs repeatable.
#pragma once

#include <cmath>
#include <random>

#include "hopfmcf/sphere_geometry.hpp"

namespace hopfmcf::testing {

inline std::mt19937_64& rng(std::uint64_t seed = 0) {
  static std::mt19937_64 gen;
  if (seed) gen.seed(seed);
  return gen;
}

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline Point3 random_on_sphere3(std::mt19937_64& g, double radius) {
  std::normal_distribution<double> n;
  Point3 p{n(g), n(g), n(g)};
  while (norm(p) < 1e-3) p = {n(g), n(g), n(g)};
  return project_to_sphere(p, radius);
}

inline Point4 random_on_sphere4(std::mt19937_64& g, double radius) {
  std::normal_distribution<double> n;
  Point4 p{n(g), n(g), n(g), n(g)};
  while (norm(p) < 1e-3) p = {n(g), n(g), n(g), n(g)};
  return project_to_sphere(p, radius);
}

inline Point4 random_vector4(std::mt19937_64& g) {
  std::normal_distribution<double> n;
  return {n(g), n(g), n(g), n(g)};
}

inline Point3 random_tangent(std::mt19937_64& g, const Point3& base, double scale) {
  std::normal_distribution<double> n;
  return scale * tangent_project(base, Point3{n(g), n(g), n(g)});
}

}  // namespace hopfmcf::testing
