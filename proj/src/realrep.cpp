#include "qlc/realrep.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qlc {

double norm(const RealVec& v) {
  double s = 0.0;
  for (double e : v.entries) s += e * e;
  return std::sqrt(s);
}

RealVec operator+(const RealVec& a, const RealVec& b) {
  if (a.size() != b.size()) throw dimension_error("vector size mismatch");
  RealVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

RealVec operator-(const RealVec& a, const RealVec& b) {
  if (a.size() != b.size()) throw dimension_error("vector size mismatch");
  RealVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

RealVec operator*(const RealVec& a, double s) {
  RealVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * s;
  return out;
}

RealMat RealMat::identity(std::size_t n) {
  RealMat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

RealMat operator+(const RealMat& A, const RealMat& B) {
  if (A.rows != B.rows || A.cols != B.cols) {
    throw dimension_error("matrix size mismatch");
  }
  RealMat out(A.rows, A.cols);
  for (std::size_t i = 0; i < A.a.size(); ++i) out.a[i] = A.a[i] + B.a[i];
  return out;
}

RealMat operator-(const RealMat& A, const RealMat& B) {
  if (A.rows != B.rows || A.cols != B.cols) {
    throw dimension_error("matrix size mismatch");
  }
  RealMat out(A.rows, A.cols);
  for (std::size_t i = 0; i < A.a.size(); ++i) out.a[i] = A.a[i] - B.a[i];
  return out;
}

RealMat operator*(const RealMat& A, const RealMat& B) {
  if (A.cols != B.rows) throw dimension_error("matrix size mismatch");
  RealMat out(A.rows, B.cols);
  for (std::size_t i = 0; i < A.rows; ++i) {
    for (std::size_t k = 0; k < A.cols; ++k) {
      double aik = A.at(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < B.cols; ++j) {
        out.at(i, j) += aik * B.at(k, j);
      }
    }
  }
  return out;
}

RealMat operator*(const RealMat& A, double s) {
  RealMat out(A.rows, A.cols);
  for (std::size_t i = 0; i < A.a.size(); ++i) out.a[i] = A.a[i] * s;
  return out;
}

RealVec operator*(const RealMat& A, const RealVec& v) {
  if (A.cols != v.size()) throw dimension_error("matrix-vector size mismatch");
  RealVec out(A.rows);
  for (std::size_t i = 0; i < A.rows; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < A.cols; ++j) s += A.at(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

RealMat transpose(const RealMat& A) {
  RealMat out(A.cols, A.rows);
  for (std::size_t i = 0; i < A.rows; ++i) {
    for (std::size_t j = 0; j < A.cols; ++j) out.at(j, i) = A.at(i, j);
  }
  return out;
}

double frobenius(const RealMat& A) {
  double s = 0.0;
  for (double e : A.a) s += e * e;
  return std::sqrt(s);
}

double max_abs(const RealMat& A) {
  double m = 0.0;
  for (double e : A.a) m = std::max(m, std::fabs(e));
  return m;
}

RealVec solve_dense(RealMat A, RealVec b) {
  if (A.rows != A.cols || A.rows != b.size()) {
    throw dimension_error("solve needs a square system");
  }
  const std::size_t n = A.rows;
  const double scale = std::max(max_abs(A), 1.0);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    double best = std::fabs(A.at(perm[col], col));
    for (std::size_t r = col + 1; r < n; ++r) {
      double v = std::fabs(A.at(perm[r], col));
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best <= 1e-14 * scale) {
      throw singularity_error("singular linear system");
    }
    std::swap(perm[col], perm[piv]);
    const std::size_t pr = perm[col];
    const double pivot = A.at(pr, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      const std::size_t rr = perm[r];
      double f = A.at(rr, col) / pivot;
      if (f == 0.0) continue;
      A.at(rr, col) = 0.0;
      for (std::size_t j = col + 1; j < n; ++j) A.at(rr, j) -= f * A.at(pr, j);
      b[rr] -= f * b[pr];
    }
  }
  RealVec x(n);
  for (std::size_t i = n; i-- > 0;) {
    const std::size_t ri = perm[i];
    double s = b[ri];
    for (std::size_t j = i + 1; j < n; ++j) s -= A.at(ri, j) * x[j];
    x[i] = s / A.at(ri, i);
  }
  return x;
}

RealMat invert_dense(const RealMat& A) {
  if (A.rows != A.cols) throw dimension_error("inverse needs a square matrix");
  const std::size_t n = A.rows;
  RealMat inv(n, n);
  for (std::size_t col = 0; col < n; ++col) {
    RealVec e(n);
    e[col] = 1.0;
    RealVec x = solve_dense(A, e);
    for (std::size_t i = 0; i < n; ++i) inv.at(i, col) = x[i];
  }
  return inv;
}

RealVec phi_vec(const HVector& x) {
  RealVec out(4 * x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[4 * i + 0] = x[i].w;
    out[4 * i + 1] = x[i].x;
    out[4 * i + 2] = x[i].y;
    out[4 * i + 3] = x[i].z;
  }
  return out;
}

HVector phi_inv_vec(const RealVec& v) {
  if (v.size() % 4 != 0) throw dimension_error("length must be a multiple of 4");
  HVector out(v.size() / 4);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = {v[4 * i + 0], v[4 * i + 1], v[4 * i + 2], v[4 * i + 3]};
  }
  return out;
}

/* 4x4 left-multiplication block of a single quaternion */
static void write_phi_block(RealMat& M, std::size_t bi, std::size_t bj,
                            const Quaternion& q) {
  const double blk[4][4] = {{q.w, -q.x, -q.y, -q.z},
                            {q.x, q.w, -q.z, q.y},
                            {q.y, q.z, q.w, -q.x},
                            {q.z, -q.y, q.x, q.w}};
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) M.at(4 * bi + r, 4 * bj + c) = blk[r][c];
  }
}

RealMat phi_mat(const HMatrix& A) {
  RealMat out(4 * A.rows, 4 * A.cols);
  for (std::size_t i = 0; i < A.rows; ++i) {
    for (std::size_t j = 0; j < A.cols; ++j) write_phi_block(out, i, j, A.at(i, j));
  }
  return out;
}

static double off_diag_frobenius(const RealMat& S) {
  double s = 0.0;
  for (std::size_t i = 0; i < S.rows; ++i) {
    for (std::size_t j = 0; j < S.cols; ++j) {
      if (i != j) s += S.at(i, j) * S.at(i, j);
    }
  }
  return std::sqrt(s);
}

SpectralData sym_eig(const RealMat& S, bool with_vectors) {
  if (S.rows != S.cols) throw dimension_error("eigensolver needs a square matrix");
  const std::size_t n = S.rows;
  const double fro = frobenius(S);
  const double sym_tol = 1e-10 * std::max(1.0, fro);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::fabs(S.at(i, j) - S.at(j, i)) > sym_tol) {
        throw precondition_error("matrix is not symmetric");
      }
    }
  }

  RealMat A = S;
  /* symmetrize exactly so the sweep preserves symmetry bit-for-bit */
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double v = 0.5 * (A.at(i, j) + A.at(j, i));
      A.at(i, j) = v;
      A.at(j, i) = v;
    }
  }
  RealMat V = RealMat::identity(n);
  const double stop = 1e-12 * std::max(fro, 1e-300);

  for (int sweep = 0; sweep < 200; ++sweep) {
    if (off_diag_frobenius(A) <= stop) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double apq = A.at(p, q);
        if (apq == 0.0) continue;
        double theta = (A.at(q, q) - A.at(p, p)) / (2.0 * apq);
        double t = (theta >= 0.0 ? 1.0 : -1.0) /
                   (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          double akp = A.at(k, p);
          double akq = A.at(k, q);
          A.at(k, p) = c * akp - s * akq;
          A.at(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double apk = A.at(p, k);
          double aqk = A.at(q, k);
          A.at(p, k) = c * apk - s * aqk;
          A.at(q, k) = s * apk + c * aqk;
        }
        if (with_vectors) {
          for (std::size_t k = 0; k < n; ++k) {
            double vkp = V.at(k, p);
            double vkq = V.at(k, q);
            V.at(k, p) = c * vkp - s * vkq;
            V.at(k, q) = s * vkp + c * vkq;
          }
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return A.at(a, a) < A.at(b, b); });

  SpectralData out;
  out.eigenvalues.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.eigenvalues[i] = A.at(order[i], order[i]);
  if (with_vectors) {
    RealMat sorted(n, n);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) sorted.at(i, j) = V.at(i, order[j]);
    }
    out.eigenvectors = std::move(sorted);
  }
  return out;
}

double op_norm(const RealMat& A) {
  RealMat G = transpose(A) * A;
  SpectralData eig = sym_eig(G, false);
  double lmax = eig.eigenvalues.empty() ? 0.0 : eig.eigenvalues.back();
  return std::sqrt(std::max(lmax, 0.0));
}

PinvResult pinv(const RealMat& Breal) {
  RealMat G = transpose(Breal) * Breal;
  SpectralData eig = sym_eig(G, true);
  const std::size_t m = G.rows;
  double lmin = eig.eigenvalues.front();
  double lmax = eig.eigenvalues.back();
  PinvResult out;
  out.sigma_min = std::sqrt(std::max(lmin, 0.0));
  out.sigma_max = std::sqrt(std::max(lmax, 0.0));
  if (out.sigma_min <= 1e-10 * out.sigma_max || out.sigma_max == 0.0) {
    throw singularity_error("input map is rank deficient: sigma_min too small");
  }
  /* G^{-1} = V diag(1/lambda) V^T */
  const RealMat& V = *eig.eigenvectors;
  RealMat Ginv(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        s += V.at(i, k) * V.at(j, k) / eig.eigenvalues[k];
      }
      Ginv.at(i, j) = s;
    }
  }
  out.pinv = Ginv * transpose(Breal);
  out.c_bplus = 1.0 / out.sigma_min;
  return out;
}

RealMat proj_im_b_matrix(const HMatrix& B) {
  RealMat Breal = phi_mat(B);
  PinvResult pb = pinv(Breal);
  return Breal * pb.pinv;
}

HVector proj_im_b(const HMatrix& B, const HVector& x) {
  RealMat P = proj_im_b_matrix(B);
  return phi_inv_vec(P * phi_vec(x));
}

HVector ConjugatedOperator::operator()(const HVector& y) const {
  return hconj(hmat_vec(T, hconj(y)));
}

ConjugatedOperator conjugate_operator(const HMatrix& T) { return {T}; }

RealMat real_matrix_of(const std::function<HVector(const HVector&)>& f,
                       std::size_t n) {
  RealMat out;
  for (std::size_t col = 0; col < 4 * n; ++col) {
    RealVec e(4 * n);
    e[col] = 1.0;
    RealVec y = phi_vec(f(phi_inv_vec(e)));
    if (col == 0) out = RealMat(y.size(), 4 * n);
    for (std::size_t i = 0; i < y.size(); ++i) out.at(i, col) = y[i];
  }
  return out;
}

}  // namespace qlc
