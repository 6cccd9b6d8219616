#pragma once

// Dense symmetric linear algebra for small fixed dimension (d <= 32):
// quadratic forms, rank-1 updates, SPD solves and a cyclic-Jacobi symmetric
// eigensolver. Deliberately dependency-free; everything is a plain value.

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace mlr {

class Vector {
 public:
  Vector() = default;
  explicit Vector(std::vector<double> entries) : e_(std::move(entries)) {}
  Vector(std::initializer_list<double> entries) : e_(entries) {}
  static Vector zeros(std::size_t d) { return Vector(std::vector<double>(d, 0.0)); }

  std::size_t size() const { return e_.size(); }
  double operator[](std::size_t i) const { return e_[i]; }
  double& operator[](std::size_t i) { return e_[i]; }
  const std::vector<double>& entries() const { return e_; }

  Vector& operator+=(const Vector& o);
  Vector& operator-=(const Vector& o);
  Vector& operator*=(double s);

 private:
  std::vector<double> e_;
};

Vector operator+(Vector a, const Vector& b);
Vector operator-(Vector a, const Vector& b);
Vector operator*(double s, Vector a);
Vector operator*(Vector a, double s);

double dot(const Vector& a, const Vector& b);
double norm_sq(const Vector& v);
double norm(const Vector& v);
bool all_finite(const Vector& v);

/// Symmetric d x d matrix stored as the packed upper triangle (row major).
/// Symmetry is structural: there is one storage cell per unordered index
/// pair, so no update can introduce asymmetry. Constructors taking a full
/// square array reject input that is asymmetric beyond 1e-12 (max-abs) and
/// store the symmetrized average (A + A^T) / 2.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t d);
  static SymMatrix identity(std::size_t d);
  static SymMatrix scaled_identity(std::size_t d, double s);
  static SymMatrix diagonal(const Vector& diag);
  static SymMatrix from_rows(const std::vector<std::vector<double>>& rows);
  static SymMatrix from_packed_upper(std::size_t d, std::vector<double> packed);

  std::size_t dim() const { return d_; }
  double operator()(std::size_t i, std::size_t j) const { return e_[index(i, j)]; }
  void set(std::size_t i, std::size_t j, double v) { e_[index(i, j)] = v; }
  const std::vector<double>& packed_upper() const { return e_; }

  Vector matvec(const Vector& v) const;
  /// M += c * v v^T
  void rank1_update(double c, const Vector& v);
  SymMatrix& operator+=(const SymMatrix& o);
  SymMatrix& operator*=(double s);
  double trace() const;
  double max_abs() const;

 private:
  std::size_t index(std::size_t i, std::size_t j) const;
  std::size_t d_ = 0;
  std::vector<double> e_;
};

/// v^T M v as the explicit double contraction.
double quad_form(const SymMatrix& m, const Vector& v);

/// All eigenvalues in ascending order, by cyclic Jacobi rotations. Sweeps
/// run until the off-diagonal Frobenius mass drops below rel_tol times the
/// Frobenius norm of the input (relative, so large matrices do not stall on
/// the rounding floor). Throws NumericError if the sweep budget is spent.
std::vector<double> sym_eigvals(const SymMatrix& m, double rel_tol = 1e-12,
                                int max_sweeps = 100);

/// Solve M x = b for SPD M via a Cholesky factorization.
/// Throws NumericError("not SPD ...") on a nonpositive pivot.
Vector solve_spd(const SymMatrix& m, const Vector& b);

/// Inverse of an SPD matrix (column solves against the identity).
SymMatrix inverse_spd(const SymMatrix& m);

/// True iff the Cholesky factorization succeeds with all pivots positive.
bool is_spd(const SymMatrix& m);

/// Dense row-major lower Cholesky factor L with M = L L^T.
std::vector<double> cholesky_lower(const SymMatrix& m);

}  // namespace mlr
