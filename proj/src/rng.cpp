#include "qlc/rng.hpp"

#include <cmath>

namespace qlc {

std::uint64_t CounterRng::next_u64() {
  std::uint64_t z = seed + (counter++) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double CounterRng::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::next_open() {
  return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
}

double CounterRng::next_gaussian() {
  double u1 = next_open();
  double u2 = next_double();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

Quaternion CounterRng::gaussian_quaternion() {
  return {next_gaussian(), next_gaussian(), next_gaussian(), next_gaussian()};
}

HVector CounterRng::gaussian_hvector(std::size_t n) {
  HVector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = gaussian_quaternion();
  return v;
}

HVector CounterRng::unit_hvector(std::size_t n) {
  for (;;) {
    HVector v = gaussian_hvector(n);
    double norm = hnorm(v);
    if (norm > 1e-12) return v * (1.0 / norm);
  }
}

HVector CounterRng::ball_hvector(std::size_t n, double radius) {
  HVector dir = unit_hvector(n);
  double u = next_double();
  double r = radius * std::pow(u, 1.0 / static_cast<double>(4 * n));
  return dir * r;
}

}  // namespace qlc
