#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace qlc {

struct dimension_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/* q = w + x*i + y*j + z*k */
struct Quaternion {
  double w = 0.0, x = 0.0, y = 0.0, z = 0.0;

  constexpr Quaternion() = default;
  constexpr Quaternion(double w_, double x_, double y_, double z_)
      : w(w_), x(x_), y(y_), z(z_) {}
  static constexpr Quaternion real(double v) { return {v, 0.0, 0.0, 0.0}; }

  constexpr Quaternion operator+(const Quaternion& o) const {
    return {w + o.w, x + o.x, y + o.y, z + o.z};
  }
  constexpr Quaternion operator-(const Quaternion& o) const {
    return {w - o.w, x - o.x, y - o.y, z - o.z};
  }
  constexpr Quaternion operator-() const { return {-w, -x, -y, -z}; }
  constexpr Quaternion operator*(double s) const {
    return {w * s, x * s, y * s, z * s};
  }
  constexpr bool operator==(const Quaternion& o) const {
    return w == o.w && x == o.x && y == o.y && z == o.z;
  }
};

constexpr Quaternion operator*(double s, const Quaternion& q) { return q * s; }

/* Hamilton product, ij = k, jk = i, ki = j */
constexpr Quaternion qmul(const Quaternion& p, const Quaternion& q) {
  return {p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
          p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
          p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
          p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w};
}

constexpr Quaternion qconj(const Quaternion& q) { return {q.w, -q.x, -q.y, -q.z}; }

double qnorm(const Quaternion& q);
double qnorm2(const Quaternion& q);

/* vector in H^n */
struct HVector {
  std::vector<Quaternion> entries;

  HVector() = default;
  explicit HVector(std::size_t n) : entries(n) {}
  HVector(std::initializer_list<Quaternion> init) : entries(init) {}

  std::size_t size() const { return entries.size(); }
  Quaternion& operator[](std::size_t i) { return entries[i]; }
  const Quaternion& operator[](std::size_t i) const { return entries[i]; }
};

HVector operator+(const HVector& a, const HVector& b);
HVector operator-(const HVector& a, const HVector& b);
HVector operator*(const HVector& a, double s);
HVector operator*(double s, const HVector& a);

/* componentwise conjugation */
HVector hconj(const HVector& x);

/* Euclidean norm of the 4n real components */
double hnorm(const HVector& x);

/* Re(sum conj(x_i) y_i); real bilinear inner product */
double inner_re(const HVector& x, const HVector& y);

/* s / ||s|| for s != 0, zero vector at s = 0 (absolute cutoff 1e-14) */
HVector sgn_h(const HVector& s);

bool is_zero(const HVector& x);

/* matrix in H^{n x m}, row-major entries */
struct HMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<Quaternion> entries;

  HMatrix() = default;
  HMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), entries(r * c) {}

  Quaternion& at(std::size_t i, std::size_t j) { return entries[i * cols + j]; }
  const Quaternion& at(std::size_t i, std::size_t j) const {
    return entries[i * cols + j];
  }

  static HMatrix identity(std::size_t n);
  static HMatrix scalar(std::size_t n, const Quaternion& q);
};

/* y = A x over H (left action on column vectors) */
HVector hmat_vec(const HMatrix& A, const HVector& x);
HMatrix hmat_mul(const HMatrix& A, const HMatrix& B);
/* conjugate transpose */
HMatrix hmat_dagger(const HMatrix& A);

}  // namespace qlc
