#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "ucplan/error.hpp"

namespace ucplan {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Thin singular value decomposition A = U * diag(S) * V^T with
/// r = min(rows, cols) columns in U and V and S sorted descending.
struct SvdFactors {
  Matrix U;
  Vector S;
  Matrix V;
};

/// Diagonal scaling decomposition: core = diag(left) * A * diag(right),
/// where every row and column of |core| has unit geometric mean over its
/// nonzero entries. Rows/columns of A that are entirely zero get scale
/// factor 1 and are listed in zero_rows / zero_cols.
struct ScalingFactors {
  Vector left;   // m positive row scales
  Matrix core;   // m x n balanced core
  Vector right;  // n positive column scales
  std::vector<int> zero_rows;
  std::vector<int> zero_cols;
};

/// Row/column index sets of the unit-sensitive block fed to the mixed
/// inverse. Empty lists degenerate the mixed inverse to the Moore-Penrose
/// inverse; whole-matrix lists degenerate it to the unit-consistent one.
struct PartitionSpec {
  std::vector<int> w_rows;
  std::vector<int> w_cols;

  bool empty() const { return w_rows.empty() && w_cols.empty(); }
  bool covers(Eigen::Index rows, Eigen::Index cols) const {
    return static_cast<Eigen::Index>(w_rows.size()) == rows &&
           static_cast<Eigen::Index>(w_cols.size()) == cols;
  }
};

SvdFactors svd(const Matrix& a);

ScalingFactors scaling_decomposition(const Matrix& a);

/// Moore-Penrose inverse via SVD; singular values below
/// max(m, n) * eps * s_max are treated as zero.
Matrix mp_inverse(const Matrix& a);

/// Unit-consistent inverse: diag(right) * pinv(core) * diag(left), with
/// pinv computed from the SVD of the balanced core. Satisfies
///   uc_inverse(diag(p) A diag(q)) = diag(q)^-1 uc_inverse(A) diag(p)^-1
/// for any positive diagonal p, q.
Matrix uc_inverse(const Matrix& a);

/// Mixed inverse: the matrix is permuted so the unit-sensitive block A_W
/// sits top-left, the four blocks are inverted with UC/MP Schur-complement
/// composition, and the result is permuted back.
Matrix mx_inverse(const Matrix& a, const PartitionSpec& spec);

/// Selects which generalized inverse a planner step uses and counts how
/// many times it is invoked (one mixed-inverse evaluation counts as one
/// call). Each experiment run owns its backend instance.
class GiBackend {
 public:
  enum class Kind { MP, UC, MX };

  static GiBackend mp() { return GiBackend(Kind::MP, {}); }
  static GiBackend uc() { return GiBackend(Kind::UC, {}); }
  static GiBackend mx(PartitionSpec spec) {
    return GiBackend(Kind::MX, std::move(spec));
  }

  Kind kind() const { return kind_; }
  const PartitionSpec& partition() const { return spec_; }

  /// GI of a Jacobian-shaped matrix (same shape as the matrix the
  /// partition spec was built for).
  Matrix apply(const Matrix& j);

  /// GI of the m x m task-space matrix J W^-1 J^T; under MX the induced
  /// partition is w_rows x w_rows.
  Matrix apply_task_square(const Matrix& m);

  long calls() const { return calls_; }
  void reset_calls() { calls_ = 0; }

 private:
  GiBackend(Kind kind, PartitionSpec spec) : kind_(kind), spec_(std::move(spec)) {}

  Kind kind_;
  PartitionSpec spec_;
  long calls_ = 0;
};

}  // namespace ucplan
