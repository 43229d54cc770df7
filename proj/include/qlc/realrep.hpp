#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qlc/quat.hpp"

namespace qlc {

struct precondition_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct singularity_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RealVec {
  std::vector<double> entries;

  RealVec() = default;
  explicit RealVec(std::size_t n) : entries(n, 0.0) {}

  std::size_t size() const { return entries.size(); }
  double& operator[](std::size_t i) { return entries[i]; }
  double operator[](std::size_t i) const { return entries[i]; }
};

double norm(const RealVec& v);
RealVec operator+(const RealVec& a, const RealVec& b);
RealVec operator-(const RealVec& a, const RealVec& b);
RealVec operator*(const RealVec& a, double s);

/* dense row-major real matrix */
struct RealMat {
  std::size_t rows = 0, cols = 0;
  std::vector<double> a;

  RealMat() = default;
  RealMat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}

  double& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  static RealMat identity(std::size_t n);
};

RealMat operator+(const RealMat& A, const RealMat& B);
RealMat operator-(const RealMat& A, const RealMat& B);
RealMat operator*(const RealMat& A, const RealMat& B);
RealMat operator*(const RealMat& A, double s);
RealVec operator*(const RealMat& A, const RealVec& v);
RealMat transpose(const RealMat& A);
double frobenius(const RealMat& A);
double max_abs(const RealMat& A);

/* solve A x = b by Gaussian elimination with partial pivoting */
RealVec solve_dense(RealMat A, RealVec b);
RealMat invert_dense(const RealMat& A);

struct SpectralData {
  std::vector<double> eigenvalues;              /* ascending */
  std::optional<RealMat> eigenvectors;          /* columns match eigenvalues */
};

/* H^n -> R^{4n}, per-entry contiguous blocks (w, x, y, z) */
RealVec phi_vec(const HVector& x);
HVector phi_inv_vec(const RealVec& v);

/* H^{n x m} -> R^{4n x 4m}, 4x4 block phi(q) per entry; phi(q) acts as left
 * multiplication by q on the (w, x, y, z) coordinates */
RealMat phi_mat(const HMatrix& A);

/* cyclic Jacobi for symmetric input; off-diagonal Frobenius threshold
 * 1e-12 * ||S||_F; input symmetric within 1e-10 or precondition_error */
SpectralData sym_eig(const RealMat& S, bool with_vectors = true);

/* largest singular value via sym_eig(A^T A) */
double op_norm(const RealMat& A);

struct PinvResult {
  RealMat pinv;      /* (B^T B)^{-1} B^T */
  double c_bplus;    /* 1 / sigma_min */
  double sigma_min;
  double sigma_max;
};

/* full column rank required: sigma_min > 1e-10 * sigma_max */
PinvResult pinv(const RealMat& Breal);

/* orthogonal projection of x onto Im(B) computed in the real representation */
HVector proj_im_b(const HMatrix& B, const HVector& x);
/* the 4n x 4n projector matrix B_R B_R^+ */
RealMat proj_im_b_matrix(const HMatrix& B);

/* y -> hconj(T * hconj(y)) */
struct ConjugatedOperator {
  HMatrix T;
  HVector operator()(const HVector& y) const;
};

ConjugatedOperator conjugate_operator(const HMatrix& T);

/* real matrix of an arbitrary R-linear map on H^n, built column-by-column
 * from its action on the 4n basis vectors */
RealMat real_matrix_of(const std::function<HVector(const HVector&)>& f,
                       std::size_t n);

}  // namespace qlc
