#include "mlr/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mlr/errors.hpp"

namespace mlr {

namespace {

void check_same_size(std::size_t a, std::size_t b, const char* who) {
  if (a != b) {
    throw std::invalid_argument(std::string(who) + ": dimension mismatch (" +
                                std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

Vector& Vector::operator+=(const Vector& o) {
  check_same_size(size(), o.size(), "Vector::operator+=");
  for (std::size_t i = 0; i < e_.size(); ++i) e_[i] += o.e_[i];
  return *this;
}

Vector& Vector::operator-=(const Vector& o) {
  check_same_size(size(), o.size(), "Vector::operator-=");
  for (std::size_t i = 0; i < e_.size(); ++i) e_[i] -= o.e_[i];
  return *this;
}

Vector& Vector::operator*=(double s) {
  for (double& x : e_) x *= s;
  return *this;
}

Vector operator+(Vector a, const Vector& b) { return a += b; }
Vector operator-(Vector a, const Vector& b) { return a -= b; }
Vector operator*(double s, Vector a) { return a *= s; }
Vector operator*(Vector a, double s) { return a *= s; }

double dot(const Vector& a, const Vector& b) {
  check_same_size(a.size(), b.size(), "dot");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm_sq(const Vector& v) { return dot(v, v); }
double norm(const Vector& v) { return std::sqrt(norm_sq(v)); }

bool all_finite(const Vector& v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) return false;
  }
  return true;
}

SymMatrix::SymMatrix(std::size_t d) : d_(d), e_(d * (d + 1) / 2, 0.0) {
  if (d == 0) throw std::invalid_argument("SymMatrix: dimension must be >= 1");
}

std::size_t SymMatrix::index(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  return i * d_ - i * (i - 1) / 2 + (j - i);
}

SymMatrix SymMatrix::identity(std::size_t d) { return scaled_identity(d, 1.0); }

SymMatrix SymMatrix::scaled_identity(std::size_t d, double s) {
  SymMatrix m(d);
  for (std::size_t i = 0; i < d; ++i) m.set(i, i, s);
  return m;
}

SymMatrix SymMatrix::diagonal(const Vector& diag) {
  SymMatrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m.set(i, i, diag[i]);
  return m;
}

SymMatrix SymMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t d = rows.size();
  if (d == 0) throw std::invalid_argument("SymMatrix::from_rows: empty matrix");
  for (const auto& r : rows) {
    check_same_size(r.size(), d, "SymMatrix::from_rows");
  }
  SymMatrix m(d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      const double a = rows[i][j];
      const double b = rows[j][i];
      if (!std::isfinite(a) || !std::isfinite(b)) {
        throw std::invalid_argument("SymMatrix::from_rows: non-finite entry");
      }
      if (std::abs(a - b) > 1e-12) {
        throw std::invalid_argument("SymMatrix::from_rows: asymmetry above 1e-12 at (" +
                                    std::to_string(i) + "," + std::to_string(j) + ")");
      }
      m.set(i, j, 0.5 * (a + b));
    }
  }
  return m;
}

SymMatrix SymMatrix::from_packed_upper(std::size_t d, std::vector<double> packed) {
  if (packed.size() != d * (d + 1) / 2) {
    throw std::invalid_argument("SymMatrix::from_packed_upper: wrong packed length");
  }
  SymMatrix m(d);
  m.e_ = std::move(packed);
  return m;
}

Vector SymMatrix::matvec(const Vector& v) const {
  check_same_size(v.size(), d_, "SymMatrix::matvec");
  Vector out = Vector::zeros(d_);
  for (std::size_t i = 0; i < d_; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < d_; ++j) acc += (*this)(i, j) * v[j];
    out[i] = acc;
  }
  return out;
}

void SymMatrix::rank1_update(double c, const Vector& v) {
  check_same_size(v.size(), d_, "SymMatrix::rank1_update");
  for (std::size_t i = 0; i < d_; ++i) {
    for (std::size_t j = i; j < d_; ++j) {
      e_[index(i, j)] += c * v[i] * v[j];
    }
  }
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& o) {
  check_same_size(d_, o.d_, "SymMatrix::operator+=");
  for (std::size_t k = 0; k < e_.size(); ++k) e_[k] += o.e_[k];
  return *this;
}

SymMatrix& SymMatrix::operator*=(double s) {
  for (double& x : e_) x *= s;
  return *this;
}

double SymMatrix::trace() const {
  double acc = 0.0;
  for (std::size_t i = 0; i < d_; ++i) acc += (*this)(i, i);
  return acc;
}

double SymMatrix::max_abs() const {
  double m = 0.0;
  for (double x : e_) m = std::max(m, std::abs(x));
  return m;
}

double quad_form(const SymMatrix& m, const Vector& v) {
  check_same_size(v.size(), m.dim(), "quad_form");
  double acc = 0.0;
  for (std::size_t i = 0; i < m.dim(); ++i) {
    for (std::size_t j = 0; j < m.dim(); ++j) acc += v[i] * m(i, j) * v[j];
  }
  return acc;
}

namespace {

// Dense row-major scratch copy for the eigensolver.
std::vector<double> to_dense(const SymMatrix& m) {
  const std::size_t d = m.dim();
  std::vector<double> a(d * d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) a[i * d + j] = m(i, j);
  }
  return a;
}

double off_diag_frobenius(const std::vector<double>& a, std::size_t d) {
  double acc = 0.0;
  for (std::size_t p = 0; p < d; ++p) {
    for (std::size_t q = p + 1; q < d; ++q) acc += a[p * d + q] * a[p * d + q];
  }
  return std::sqrt(2.0 * acc);
}

double frobenius(const std::vector<double>& a) {
  double acc = 0.0;
  for (double x : a) acc += x * x;
  return std::sqrt(acc);
}

}  // namespace

std::vector<double> sym_eigvals(const SymMatrix& m, double rel_tol, int max_sweeps) {
  if (!(rel_tol > 0.0)) throw std::invalid_argument("sym_eigvals: tol must be positive");
  const std::size_t d = m.dim();
  std::vector<double> a = to_dense(m);
  const double scale = frobenius(a);
  std::vector<double> vals(d);
  if (scale == 0.0 || d == 1) {
    for (std::size_t i = 0; i < d; ++i) vals[i] = a[i * d + i];
    std::sort(vals.begin(), vals.end());
    return vals;
  }
  const double threshold = rel_tol * scale;
  for (int sweep = 0; sweep <= max_sweeps; ++sweep) {
    if (off_diag_frobenius(a, d) < threshold) {
      for (std::size_t i = 0; i < d; ++i) vals[i] = a[i * d + i];
      std::sort(vals.begin(), vals.end());
      return vals;
    }
    if (sweep == max_sweeps) break;
    for (std::size_t p = 0; p < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        const double apq = a[p * d + q];
        if (apq == 0.0) continue;
        const double app = a[p * d + p];
        const double aqq = a[q * d + q];
        const double theta = (aqq - app) / (2.0 * apq);
        double t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        a[p * d + p] = app - t * apq;
        a[q * d + q] = aqq + t * apq;
        a[p * d + q] = a[q * d + p] = 0.0;
        for (std::size_t r = 0; r < d; ++r) {
          if (r == p || r == q) continue;
          const double arp = a[r * d + p];
          const double arq = a[r * d + q];
          a[r * d + p] = a[p * d + r] = c * arp - s * arq;
          a[r * d + q] = a[q * d + r] = s * arp + c * arq;
        }
      }
    }
  }
  throw NumericError("sym_eigvals: no convergence after " + std::to_string(max_sweeps) +
                     " sweeps (off-diagonal residual " +
                     std::to_string(off_diag_frobenius(a, d)) + ")");
}

std::vector<double> cholesky_lower(const SymMatrix& m) {
  const std::size_t d = m.dim();
  std::vector<double> L(d * d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    double diag = m(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= L[j * d + k] * L[j * d + k];
    if (!(diag > 0.0) || !std::isfinite(diag)) {
      throw NumericError("cholesky: matrix is not SPD (nonpositive pivot at column " +
                         std::to_string(j) + ")");
    }
    const double ljj = std::sqrt(diag);
    L[j * d + j] = ljj;
    for (std::size_t i = j + 1; i < d; ++i) {
      double acc = m(i, j);
      for (std::size_t k = 0; k < j; ++k) acc -= L[i * d + k] * L[j * d + k];
      L[i * d + j] = acc / ljj;
    }
  }
  return L;
}

namespace {

Vector chol_solve(const std::vector<double>& L, std::size_t d, const Vector& b) {
  // forward: L y = b
  Vector y = Vector::zeros(d);
  for (std::size_t i = 0; i < d; ++i) {
    double acc = b[i];
    for (std::size_t k = 0; k < i; ++k) acc -= L[i * d + k] * y[k];
    y[i] = acc / L[i * d + i];
  }
  // backward: L^T x = y
  Vector x = Vector::zeros(d);
  for (std::size_t ii = d; ii-- > 0;) {
    double acc = y[ii];
    for (std::size_t k = ii + 1; k < d; ++k) acc -= L[k * d + ii] * x[k];
    x[ii] = acc / L[ii * d + ii];
  }
  return x;
}

}  // namespace

Vector solve_spd(const SymMatrix& m, const Vector& b) {
  check_same_size(b.size(), m.dim(), "solve_spd");
  const auto L = cholesky_lower(m);
  return chol_solve(L, m.dim(), b);
}

SymMatrix inverse_spd(const SymMatrix& m) {
  const std::size_t d = m.dim();
  const auto L = cholesky_lower(m);
  std::vector<Vector> cols;
  cols.reserve(d);
  for (std::size_t j = 0; j < d; ++j) {
    Vector e = Vector::zeros(d);
    e[j] = 1.0;
    cols.push_back(chol_solve(L, d, e));
  }
  SymMatrix inv(d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      inv.set(i, j, 0.5 * (cols[j][i] + cols[i][j]));
    }
  }
  return inv;
}

bool is_spd(const SymMatrix& m) {
  try {
    cholesky_lower(m);
    return true;
  } catch (const NumericError&) {
    return false;
  }
}

}  // namespace mlr
