#include "qlc/quat.hpp"

#include <cmath>

namespace qlc {

double qnorm2(const Quaternion& q) {
  return q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z;
}

double qnorm(const Quaternion& q) { return std::sqrt(qnorm2(q)); }

static void require_same_size(const HVector& a, const HVector& b) {
  if (a.size() != b.size()) {
    throw dimension_error("vector size mismatch");
  }
}

HVector operator+(const HVector& a, const HVector& b) {
  require_same_size(a, b);
  HVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

HVector operator-(const HVector& a, const HVector& b) {
  require_same_size(a, b);
  HVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

HVector operator*(const HVector& a, double s) {
  HVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * s;
  return out;
}

HVector operator*(double s, const HVector& a) { return a * s; }

HVector hconj(const HVector& x) {
  HVector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = qconj(x[i]);
  return out;
}

double hnorm(const HVector& x) {
  double s = 0.0;
  for (const auto& q : x.entries) s += qnorm2(q);
  return std::sqrt(s);
}

double inner_re(const HVector& x, const HVector& y) {
  require_same_size(x, y);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Quaternion& a = x[i];
    const Quaternion& b = y[i];
    s += a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
  }
  return s;
}

HVector sgn_h(const HVector& s) {
  double n = hnorm(s);
  if (n <= 1e-14) return HVector(s.size());
  return s * (1.0 / n);
}

bool is_zero(const HVector& x) {
  for (const auto& q : x.entries) {
    if (q.w != 0.0 || q.x != 0.0 || q.y != 0.0 || q.z != 0.0) return false;
  }
  return true;
}

HMatrix HMatrix::identity(std::size_t n) {
  HMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Quaternion::real(1.0);
  return m;
}

HMatrix HMatrix::scalar(std::size_t n, const Quaternion& q) {
  HMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = q;
  return m;
}

HVector hmat_vec(const HMatrix& A, const HVector& x) {
  if (A.cols != x.size()) throw dimension_error("matrix-vector size mismatch");
  HVector out(A.rows);
  for (std::size_t i = 0; i < A.rows; ++i) {
    Quaternion acc;
    for (std::size_t j = 0; j < A.cols; ++j) {
      acc = acc + qmul(A.at(i, j), x[j]);
    }
    out[i] = acc;
  }
  return out;
}

HMatrix hmat_mul(const HMatrix& A, const HMatrix& B) {
  if (A.cols != B.rows) throw dimension_error("matrix-matrix size mismatch");
  HMatrix out(A.rows, B.cols);
  for (std::size_t i = 0; i < A.rows; ++i) {
    for (std::size_t k = 0; k < A.cols; ++k) {
      const Quaternion& aik = A.at(i, k);
      for (std::size_t j = 0; j < B.cols; ++j) {
        out.at(i, j) = out.at(i, j) + qmul(aik, B.at(k, j));
      }
    }
  }
  return out;
}

HMatrix hmat_dagger(const HMatrix& A) {
  HMatrix out(A.cols, A.rows);
  for (std::size_t i = 0; i < A.rows; ++i) {
    for (std::size_t j = 0; j < A.cols; ++j) {
      out.at(j, i) = qconj(A.at(i, j));
    }
  }
  return out;
}

}  // namespace qlc
