#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <vector>

#include "aqg/scalar.hpp"

namespace aqg {

template <class K>
using Vec = std::vector<K>;

/// Minimal dense row-major matrix over an arbitrary field scalar.
/// Eigen backs the floating-point decompositions; everything that has to
/// stay exact in rational mode goes through the elimination routines below.
template <class K>
struct Mat {
  int rows = 0, cols = 0;
  std::vector<K> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(size_t(r) * c, scalar_traits<K>::zero()) {}

  K& operator()(int i, int j) { return a[size_t(i) * cols + j]; }
  const K& operator()(int i, int j) const { return a[size_t(i) * cols + j]; }

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = scalar_traits<K>::one();
    return m;
  }

  Mat operator+(const Mat& o) const {
    Mat r(rows, cols);
    for (size_t i = 0; i < a.size(); ++i) r.a[i] = a[i] + o.a[i];
    return r;
  }
  Mat operator-(const Mat& o) const {
    Mat r(rows, cols);
    for (size_t i = 0; i < a.size(); ++i) r.a[i] = a[i] - o.a[i];
    return r;
  }
  Mat operator*(const K& s) const {
    Mat r(rows, cols);
    for (size_t i = 0; i < a.size(); ++i) r.a[i] = a[i] * s;
    return r;
  }
};

template <class K>
Mat<K> matmul(const Mat<K>& A, const Mat<K>& B) {
  if (A.cols != B.rows) throw error(errc::dimension_mismatch, "matmul");
  Mat<K> C(A.rows, B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int k = 0; k < A.cols; ++k) {
      const K& v = A(i, k);
      if (scalar_traits<K>::is_zero(v)) continue;  // corpus matrices are sparse
      for (int j = 0; j < B.cols; ++j) C(i, j) += v * B(k, j);
    }
  return C;
}

template <class K>
Vec<K> matvec(const Mat<K>& A, const Vec<K>& x) {
  if (A.cols != int(x.size())) throw error(errc::dimension_mismatch, "matvec");
  Vec<K> y(A.rows, scalar_traits<K>::zero());
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j)
      if (!scalar_traits<K>::is_zero(A(i, j))) y[i] += A(i, j) * x[j];
  return y;
}

template <class K>
Mat<K> adjoint(const Mat<K>& A) {
  Mat<K> B(A.cols, A.rows);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) B(j, i) = scalar_traits<K>::conj(A(i, j));
  return B;
}

template <class K>
Mat<K> transpose(const Mat<K>& A) {
  Mat<K> B(A.cols, A.rows);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) B(j, i) = A(i, j);
  return B;
}

template <class K>
Mat<K> kron(const Mat<K>& A, const Mat<K>& B) {
  Mat<K> C(A.rows * B.rows, A.cols * B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) {
      if (scalar_traits<K>::is_zero(A(i, j))) continue;
      for (int p = 0; p < B.rows; ++p)
        for (int q = 0; q < B.cols; ++q)
          C(i * B.rows + p, j * B.cols + q) = A(i, j) * B(p, q);
    }
  return C;
}

template <class K>
double max_abs(const Mat<K>& A) {
  double m = 0;
  for (const K& v : A.a) m = std::max(m, std::abs(scalar_traits<K>::to_cd(v)));
  return m;
}

template <class K>
double max_abs(const Vec<K>& v) {
  double m = 0;
  for (const K& x : v) m = std::max(m, std::abs(scalar_traits<K>::to_cd(x)));
  return m;
}

template <class K>
double diff_norm(const Mat<K>& A, const Mat<K>& B) {
  return max_abs(A - B);
}

// --- Eigen bridge (floating point) ------------------------------------------

inline Eigen::MatrixXcd to_eigen(const Mat<cd>& A) {
  Eigen::MatrixXcd M(A.rows, A.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) M(i, j) = A(i, j);
  return M;
}

template <class K>
Eigen::MatrixXcd to_eigen_cd(const Mat<K>& A) {
  Eigen::MatrixXcd M(A.rows, A.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) M(i, j) = scalar_traits<K>::to_cd(A(i, j));
  return M;
}

inline Mat<cd> from_eigen(const Eigen::MatrixXcd& M) {
  Mat<cd> A(int(M.rows()), int(M.cols()));
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) A(i, j) = M(i, j);
  return A;
}

inline double opnorm(const Mat<cd>& A) {
  if (A.rows == 0 || A.cols == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(A));
  return svd.singularValues()(0);
}

inline double cond_number(const Mat<cd>& A) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(A));
  double smin = svd.singularValues()(svd.singularValues().size() - 1);
  if (smin <= 0) return std::numeric_limits<double>::infinity();
  return svd.singularValues()(0) / smin;
}

/// Eigenvalues of a Hermitian matrix, ascending.
inline std::vector<double> hermitian_eigenvalues(const Mat<cd>& A) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_eigen(A));
  std::vector<double> v(es.eigenvalues().data(),
                        es.eigenvalues().data() + es.eigenvalues().size());
  return v;
}

// --- linear solving ----------------------------------------------------------

template <class K>
struct SolveResult {
  bool consistent = false;
  bool unique = false;
  int rank = 0;
  Mat<K> solution;       // one solution (least-squares in float mode)
  Mat<K> nullspace;      // columns span the kernel
  double residual = 0.0; // max-abs of A*X - B
};

/// Exact Gaussian elimination over any field scalar; used verbatim in
/// rational mode and as a fallback rank oracle elsewhere.
template <class K>
SolveResult<K> solve_elimination(Mat<K> A, Mat<K> B) {
  const int m = A.rows, n = A.cols, r = B.cols;
  std::vector<int> pivot_col;
  int row = 0;
  for (int col = 0; col < n && row < m; ++col) {
    int sel = -1;
    double best = 0;
    for (int i = row; i < m; ++i) {
      double mag = std::abs(scalar_traits<K>::to_cd(A(i, col)));
      if (!scalar_traits<K>::is_zero(A(i, col)) && mag > best) { best = mag; sel = i; }
    }
    if (sel < 0) continue;
    for (int j = 0; j < n; ++j) std::swap(A(sel, j), A(row, j));
    for (int j = 0; j < r; ++j) std::swap(B(sel, j), B(row, j));
    K inv = scalar_traits<K>::one() / A(row, col);
    for (int j = col; j < n; ++j) A(row, j) = A(row, j) * inv;
    for (int j = 0; j < r; ++j) B(row, j) = B(row, j) * inv;
    for (int i = 0; i < m; ++i) {
      if (i == row || scalar_traits<K>::is_zero(A(i, col))) continue;
      K f = A(i, col);
      for (int j = col; j < n; ++j) A(i, j) = A(i, j) - f * A(row, j);
      for (int j = 0; j < r; ++j) B(i, j) = B(i, j) - f * B(row, j);
    }
    pivot_col.push_back(col);
    ++row;
  }
  SolveResult<K> res;
  res.rank = row;
  res.consistent = true;
  for (int i = row; i < m; ++i)
    for (int j = 0; j < r; ++j)
      if (!scalar_traits<K>::is_zero(B(i, j))) res.consistent = false;
  res.unique = (res.rank == n);

  res.solution = Mat<K>(n, r);
  if (res.consistent)
    for (int p = 0; p < row; ++p)
      for (int j = 0; j < r; ++j) res.solution(pivot_col[p], j) = B(p, j);

  // kernel basis from the free columns
  std::vector<bool> is_pivot(n, false);
  for (int c : pivot_col) is_pivot[c] = true;
  std::vector<int> free_cols;
  for (int c = 0; c < n; ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  res.nullspace = Mat<K>(n, int(free_cols.size()));
  for (size_t f = 0; f < free_cols.size(); ++f) {
    int fc = free_cols[f];
    res.nullspace(fc, int(f)) = scalar_traits<K>::one();
    for (int p = 0; p < row; ++p)
      res.nullspace(pivot_col[p], int(f)) = -A(p, fc);
  }
  return res;
}

/// Solve A X = B. Float mode routes through a rank-revealing QR and reports
/// the least-squares residual; exact mode reports exact (in)consistency.
template <class K>
SolveResult<K> linear_solve(const Mat<K>& A, const Mat<K>& B) {
  SolveResult<K> res;
  if constexpr (scalar_traits<K>::exact) {
    res = solve_elimination(A, B);
    if (res.consistent) res.residual = 0.0;
    else res.residual = std::numeric_limits<double>::infinity();
    if (res.consistent) {
      Mat<K> R = matmul(A, res.solution) - B;
      res.residual = max_abs(R);
    }
    return res;
  } else {
    Eigen::MatrixXcd Ae = to_eigen_cd(A), Be = to_eigen_cd(B);
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(Ae);
    Eigen::MatrixXcd X = cod.solve(Be);
    res.rank = int(cod.rank());
    res.unique = (res.rank == A.cols);
    res.solution = from_eigen(X);
    res.residual = X.size() ? (Ae * X - Be).cwiseAbs().maxCoeff() : 0.0;
    double scale = std::max(1.0, Be.size() ? Be.cwiseAbs().maxCoeff() : 0.0);
    res.consistent = res.residual <= global_tol().predicate * scale;
    // kernel via SVD
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Ae, Eigen::ComputeFullV);
    double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    double thresh = std::max(1e-13, 1e-11 * smax);
    int rk = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()(i) > thresh) ++rk;
    res.nullspace = Mat<cd>(A.cols, A.cols - rk);
    for (int j = rk; j < A.cols; ++j)
      for (int i = 0; i < A.cols; ++i)
        res.nullspace(i, j - rk) = svd.matrixV()(i, j);
    return res;
  }
}

template <class K>
Mat<K> inverse(const Mat<K>& A) {
  auto r = linear_solve(A, Mat<K>::identity(A.rows));
  if (!r.unique || !r.consistent)
    throw error(errc::singular_transfer, "matrix not invertible");
  return r.solution;
}

/// Kernel of A (basis in columns).
template <class K>
Mat<K> kernel(const Mat<K>& A) {
  return linear_solve(A, Mat<K>(A.rows, 0)).nullspace;
}

/// Cholesky factor R (upper triangular, G = R^* R). Works over both scalar
/// modes; rational mode demands exact square roots of the pivots.
template <class K>
Mat<K> cholesky_upper(const Mat<K>& G) {
  const int n = G.rows;
  Mat<K> R(n, n);
  for (int j = 0; j < n; ++j) {
    K d = G(j, j);
    for (int k = 0; k < j; ++k) d = d - scalar_traits<K>::conj(R(k, j)) * R(k, j);
    if (scalar_traits<K>::to_cd(d).real() <= 0)
      throw error(errc::not_faithful, "Gram matrix not positive definite");
    K rjj = scalar_traits<K>::sqrt_positive(d);
    R(j, j) = rjj;
    for (int i = j + 1; i < n; ++i) {
      K s = G(j, i);
      for (int k = 0; k < j; ++k) s = s - scalar_traits<K>::conj(R(k, j)) * R(k, i);
      R(j, i) = s / rjj;
    }
  }
  return R;
}

/// PSD test: eigenvalues above the configured floor. Exact mode uses
/// pivoted Hermitian elimination (Sylvester), so flat-zero modes stay exact.
template <class K>
bool is_psd(const Mat<K>& G, double floor_tol = global_tol().psd_floor) {
  if constexpr (scalar_traits<K>::exact) {
    Mat<K> A = G;
    int n = A.rows;
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int k = 0; k < n; ++k) {
      int sel = -1;
      double best = 0;
      for (int i = k; i < n; ++i) {
        double mag = std::abs(scalar_traits<K>::to_cd(A(i, i)));
        if (!scalar_traits<K>::is_zero(A(i, i)) && mag > best) { best = mag; sel = i; }
      }
      if (sel < 0) {
        // diagonal block vanished: PSD iff the remaining block is zero
        for (int i = k; i < n; ++i)
          for (int j = k; j < n; ++j)
            if (!scalar_traits<K>::is_zero(A(i, j))) return false;
        return true;
      }
      if (sel != k) {
        for (int j = 0; j < n; ++j) std::swap(A(sel, j), A(k, j));
        for (int i = 0; i < n; ++i) std::swap(A(i, sel), A(i, k));
      }
      cd piv = scalar_traits<K>::to_cd(A(k, k));
      if (piv.real() < 0 || std::abs(piv.imag()) > 0) return false;
      for (int i = k + 1; i < n; ++i) {
        K f = A(i, k) / A(k, k);
        for (int j = k; j < n; ++j) A(i, j) = A(i, j) - f * A(k, j);
      }
      for (int j = k + 1; j < n; ++j) A(k, j) = scalar_traits<K>::zero();
    }
    return true;
  } else {
    auto ev = hermitian_eigenvalues(G);
    return ev.empty() || ev.front() >= floor_tol;
  }
}

}  // namespace aqg
