#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "twc/matrix.hpp"

namespace twc {

// Smith normal form U * A * V = D with U, V unimodular and D diagonal with
// nonnegative entries, each dividing the next.
template <class Scalar>
struct SmithDecomposition {
  Mat<Scalar> u;
  Mat<Scalar> d;
  Mat<Scalar> v;
  int rank = 0;  // number of nonzero diagonal entries
};

template <class Scalar>
SmithDecomposition<Scalar> smith_normal_form(const Mat<Scalar>& a);

enum class SolutionKind { NoSolution, Unique, Infinite };

// Integer solutions of A x = b.
template <class Scalar>
struct SolutionSet {
  using Kind = SolutionKind;
  SolutionKind kind = SolutionKind::NoSolution;
  Vec<Scalar> particular;            // valid unless NoSolution
  std::vector<Vec<Scalar>> kernel;   // nonempty exactly when Infinite
};

template <class Scalar>
SolutionSet<Scalar> solve_linear(const Mat<Scalar>& a, const Vec<Scalar>& b);

// Fraction-free determinant of a square matrix.
template <class Scalar>
Scalar determinant(const Mat<Scalar>& a);

// ---------------------------------------------------------------------------

namespace detail {

// Smallest nonzero entry by absolute value in the submatrix at (t, t), ties
// resolved row-major. Returns false when the submatrix is zero.
template <class Scalar>
bool find_pivot(const Mat<Scalar>& m, Eigen::Index t, Eigen::Index& pi, Eigen::Index& pj) {
  using twc::abs;
  using std::abs;
  bool found = false;
  Scalar best(0);
  for (Eigen::Index i = t; i < m.rows(); ++i) {
    for (Eigen::Index j = t; j < m.cols(); ++j) {
      if (m(i, j) == Scalar(0)) continue;
      Scalar mag = abs(m(i, j));
      if (!found || mag < best) {
        found = true;
        best = mag;
        pi = i;
        pj = j;
      }
    }
  }
  return found;
}

}  // namespace detail

template <class Scalar>
SmithDecomposition<Scalar> smith_normal_form(const Mat<Scalar>& a) {
  const Eigen::Index rows = a.rows(), cols = a.cols();
  SmithDecomposition<Scalar> out;
  out.u = Mat<Scalar>::Identity(rows, rows);
  out.v = Mat<Scalar>::Identity(cols, cols);
  Mat<Scalar> m = a;

  const Eigen::Index steps = rows < cols ? rows : cols;
  Eigen::Index t = 0;
  for (; t < steps; ++t) {
    Eigen::Index pi = t, pj = t;
    if (!detail::find_pivot(m, t, pi, pj)) break;
    if (pi != t) {
      m.row(pi).swap(m.row(t));
      out.u.row(pi).swap(out.u.row(t));
    }
    if (pj != t) {
      m.col(pj).swap(m.col(t));
      out.v.col(pj).swap(out.v.col(t));
    }

    // Clear row t and column t; truncated quotients shrink residues, and any
    // survivor becomes the new, strictly smaller pivot on the next sweep.
    bool dirty = true;
    while (dirty) {
      dirty = false;
      for (Eigen::Index i = t + 1; i < rows; ++i) {
        if (m(i, t) == Scalar(0)) continue;
        Scalar q = m(i, t) / m(t, t);
        if (!(q == Scalar(0))) {
          m.row(i) -= q * m.row(t);
          out.u.row(i) -= q * out.u.row(t);
        }
        if (!(m(i, t) == Scalar(0))) {
          m.row(i).swap(m.row(t));
          out.u.row(i).swap(out.u.row(t));
          dirty = true;
        }
      }
      for (Eigen::Index j = t + 1; j < cols; ++j) {
        if (m(t, j) == Scalar(0)) continue;
        Scalar q = m(t, j) / m(t, t);
        if (!(q == Scalar(0))) {
          m.col(j) -= q * m.col(t);
          out.v.col(j) -= q * out.v.col(t);
        }
        if (!(m(t, j) == Scalar(0))) {
          m.col(j).swap(m.col(t));
          out.v.col(j).swap(out.v.col(t));
          dirty = true;
        }
      }
    }

    // Restore the divisibility chain: the pivot must divide every remaining
    // entry; folding an offending row in and re-clearing shrinks the pivot.
    bool fixed = false;
    for (Eigen::Index i = t + 1; i < rows && !fixed; ++i) {
      for (Eigen::Index j = t + 1; j < cols && !fixed; ++j) {
        if (!((m(i, j) % m(t, t)) == Scalar(0))) {
          m.row(t) += m.row(i);
          out.u.row(t) += out.u.row(i);
          fixed = true;
        }
      }
    }
    if (fixed) {
      --t;  // redo this step with the folded-in row
      continue;
    }

    if (m(t, t) < Scalar(0)) {
      m.row(t) = -m.row(t);
      out.u.row(t) = -out.u.row(t);
    }
  }

  out.rank = static_cast<int>(t);
  out.d = std::move(m);
  return out;
}

template <class Scalar>
SolutionSet<Scalar> solve_linear(const Mat<Scalar>& a, const Vec<Scalar>& b) {
  if (a.rows() != b.size()) throw std::invalid_argument("right-hand side has wrong size");
  SmithDecomposition<Scalar> snf = smith_normal_form(a);
  const Eigen::Index cols = a.cols();
  Vec<Scalar> c = snf.u * b;

  SolutionSet<Scalar> sol;
  Vec<Scalar> y = Vec<Scalar>::Zero(cols);
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    if (i < snf.rank) {
      Scalar d = snf.d(i, i);
      if (!((c(i) % d) == Scalar(0))) return sol;  // NoSolution
      y(i) = c(i) / d;
    } else if (!(c(i) == Scalar(0))) {
      return sol;  // NoSolution
    }
  }
  sol.particular = snf.v * y;
  for (Eigen::Index j = snf.rank; j < cols; ++j) sol.kernel.push_back(snf.v.col(j));
  sol.kind = sol.kernel.empty() ? SolutionSet<Scalar>::Kind::Unique
                                : SolutionSet<Scalar>::Kind::Infinite;
  return sol;
}

template <class Scalar>
Scalar determinant(const Mat<Scalar>& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("determinant needs a square matrix");
  const Eigen::Index n = a.rows();
  if (n == 0) return Scalar(1);
  Mat<Scalar> m = a;
  Scalar prev(1);
  int sign = 1;
  for (Eigen::Index k = 0; k < n - 1; ++k) {
    if (m(k, k) == Scalar(0)) {
      Eigen::Index swap_row = -1;
      for (Eigen::Index i = k + 1; i < n; ++i)
        if (!(m(i, k) == Scalar(0))) { swap_row = i; break; }
      if (swap_row < 0) return Scalar(0);
      m.row(k).swap(m.row(swap_row));
      sign = -sign;
    }
    for (Eigen::Index i = k + 1; i < n; ++i) {
      for (Eigen::Index j = k + 1; j < n; ++j) {
        Scalar num = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        m(i, j) = num / prev;  // Bareiss: division is exact
      }
      m(i, k) = Scalar(0);
    }
    prev = m(k, k);
  }
  Scalar det = m(n - 1, n - 1);
  return sign < 0 ? -det : det;
}

extern template SmithDecomposition<BigInt> smith_normal_form<BigInt>(const Mat<BigInt>&);
extern template SolutionSet<BigInt> solve_linear<BigInt>(const Mat<BigInt>&, const Vec<BigInt>&);
extern template BigInt determinant<BigInt>(const Mat<BigInt>&);

}  // namespace twc
