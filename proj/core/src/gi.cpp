#include "ucplan/gi.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ucplan {

namespace {

void require_finite(const Matrix& a, const char* who) {
  if (a.rows() < 1 || a.cols() < 1) {
    throw InvalidInputError(std::string(who) + ": matrix must be at least 1x1");
  }
  if (!a.allFinite()) {
    throw InvalidInputError(std::string(who) + ": matrix has non-finite entries");
  }
}

double rank_cutoff(const Matrix& a, const Vector& s) {
  const double smax = s.size() > 0 ? s(0) : 0.0;
  return static_cast<double>(std::max(a.rows(), a.cols())) *
         std::numeric_limits<double>::epsilon() * smax;
}

// pinv from a thin SVD; tolerant of 0-dimension inputs so the mixed
// inverse can run the Eq.-style block algebra on empty blocks.
Matrix pinv_impl(const Matrix& a) {
  if (a.rows() == 0 || a.cols() == 0) {
    return Matrix::Zero(a.cols(), a.rows());
  }
  Eigen::JacobiSVD<Matrix> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = dec.singularValues();
  const double cutoff = rank_cutoff(a, s);
  Vector sinv = Vector::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff) sinv(i) = 1.0 / s(i);
  }
  return dec.matrixV() * sinv.asDiagonal() * dec.matrixU().transpose();
}

ScalingFactors scaling_impl(const Matrix& a, const char* who) {
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();

  ScalingFactors out;
  out.left = Vector::Ones(m);
  out.right = Vector::Ones(n);

  if (a.isZero(0.0)) {
    throw DegenerateInputError(std::string(who) + ": all-zero matrix");
  }

  // Log magnitudes of nonzero entries; zeros are exempt from balancing.
  Matrix logs = Matrix::Zero(m, n);
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> nz(m, n);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      nz(i, j) = a(i, j) != 0.0;
      if (nz(i, j)) logs(i, j) = std::log(std::abs(a(i, j)));
    }
  }

  std::vector<int> row_count(m, 0), col_count(n, 0);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (nz(i, j)) {
        ++row_count[i];
        ++col_count[j];
      }
  for (Eigen::Index i = 0; i < m; ++i)
    if (row_count[i] == 0) out.zero_rows.push_back(static_cast<int>(i));
  for (Eigen::Index j = 0; j < n; ++j)
    if (col_count[j] == 0) out.zero_cols.push_back(static_cast<int>(j));

  // Alternate row/column normalization in log space: each half-sweep
  // subtracts the mean log magnitude of the nonzero entries, i.e. divides
  // by the geometric mean.
  Vector u = Vector::Zero(m);  // log row scales
  Vector v = Vector::Zero(n);  // log column scales
  constexpr double kTol = 1e-12;
  constexpr int kMaxSweeps = 10000;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double dev = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (row_count[i] == 0) continue;
      double s = 0.0;
      for (Eigen::Index j = 0; j < n; ++j)
        if (nz(i, j)) s += logs(i, j) + u(i) + v(j);
      const double mean = s / row_count[i];
      u(i) -= mean;
      dev = std::max(dev, std::abs(mean));
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      if (col_count[j] == 0) continue;
      double s = 0.0;
      for (Eigen::Index i = 0; i < m; ++i)
        if (nz(i, j)) s += logs(i, j) + u(i) + v(j);
      const double mean = s / col_count[j];
      v(j) -= mean;
      dev = std::max(dev, std::abs(mean));
    }
    if (dev < kTol) break;
  }

  out.left = u.array().exp();
  out.right = v.array().exp();
  out.core = out.left.asDiagonal() * a * out.right.asDiagonal();
  return out;
}

Matrix uc_impl(const Matrix& a, const char* who) {
  if (a.rows() == 0 || a.cols() == 0) {
    return Matrix::Zero(a.cols(), a.rows());
  }
  const ScalingFactors sf = scaling_impl(a, who);
  const Matrix core_pinv = pinv_impl(sf.core);
  return sf.right.asDiagonal() * core_pinv * sf.left.asDiagonal();
}

std::vector<int> complement(const std::vector<int>& picked, Eigen::Index size) {
  std::vector<bool> in(static_cast<size_t>(size), false);
  for (int k : picked) in[static_cast<size_t>(k)] = true;
  std::vector<int> rest;
  rest.reserve(static_cast<size_t>(size) - picked.size());
  for (Eigen::Index k = 0; k < size; ++k)
    if (!in[static_cast<size_t>(k)]) rest.push_back(static_cast<int>(k));
  return rest;
}

void validate_indices(const std::vector<int>& idx, Eigen::Index size,
                      const char* what) {
  std::vector<bool> seen(static_cast<size_t>(size), false);
  for (int k : idx) {
    if (k < 0 || k >= size) {
      throw PartitionError(std::string("mx_inverse: ") + what +
                           " index out of range: " + std::to_string(k));
    }
    if (seen[static_cast<size_t>(k)]) {
      throw PartitionError(std::string("mx_inverse: duplicate ") + what +
                           " index: " + std::to_string(k));
    }
    seen[static_cast<size_t>(k)] = true;
  }
}

Matrix take(const Matrix& a, const std::vector<int>& rows,
            const std::vector<int>& cols) {
  Matrix out(static_cast<Eigen::Index>(rows.size()),
             static_cast<Eigen::Index>(cols.size()));
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < cols.size(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          a(rows[i], cols[j]);
  return out;
}

}  // namespace

SvdFactors svd(const Matrix& a) {
  require_finite(a, "svd");
  Eigen::JacobiSVD<Matrix> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SvdFactors f;
  f.U = dec.matrixU();
  f.S = dec.singularValues();
  f.V = dec.matrixV();
  return f;
}

ScalingFactors scaling_decomposition(const Matrix& a) {
  require_finite(a, "scaling_decomposition");
  return scaling_impl(a, "scaling_decomposition");
}

Matrix mp_inverse(const Matrix& a) {
  require_finite(a, "mp_inverse");
  return pinv_impl(a);
}

Matrix uc_inverse(const Matrix& a) {
  require_finite(a, "uc_inverse");
  return uc_impl(a, "uc_inverse");
}

Matrix mx_inverse(const Matrix& a, const PartitionSpec& spec) {
  require_finite(a, "mx_inverse");
  validate_indices(spec.w_rows, a.rows(), "row");
  validate_indices(spec.w_cols, a.cols(), "column");

  const std::vector<int> rest_rows = complement(spec.w_rows, a.rows());
  const std::vector<int> rest_cols = complement(spec.w_cols, a.cols());

  const Matrix aw = take(a, spec.w_rows, spec.w_cols);
  const Matrix ax = take(a, spec.w_rows, rest_cols);
  const Matrix ay = take(a, rest_rows, spec.w_cols);
  const Matrix az = take(a, rest_rows, rest_cols);

  const Matrix az_mp = pinv_impl(az);

  Matrix aw_uc;
  try {
    aw_uc = uc_impl(aw, "mx_inverse");
  } catch (const DegenerateInputError&) {
    throw DegenerateInputError("mx_inverse: A_W block is degenerate");
  }

  Matrix schur_w_uc;
  try {
    schur_w_uc = uc_impl(aw - ax * az_mp * ay, "mx_inverse");
  } catch (const DegenerateInputError&) {
    throw DegenerateInputError(
        "mx_inverse: Schur complement of A_Z (A_W - A_X A_Z^+ A_Y) is degenerate");
  }

  const Matrix schur_z_mp = pinv_impl(az - ay * aw_uc * ax);

  const Matrix b11 = schur_w_uc;
  const Matrix b12 = -aw_uc * ax * schur_z_mp;
  const Matrix b21 = -az_mp * ay * schur_w_uc;
  const Matrix b22 = schur_z_mp;

  // Scatter the permuted inverse back: block rows follow the column
  // ordering (W columns then the rest) and block columns the row ordering.
  Matrix x = Matrix::Zero(a.cols(), a.rows());
  const auto scatter = [&x](const Matrix& b, const std::vector<int>& rows,
                            const std::vector<int>& cols) {
    for (size_t i = 0; i < rows.size(); ++i)
      for (size_t j = 0; j < cols.size(); ++j)
        x(rows[i], cols[j]) = b(static_cast<Eigen::Index>(i),
                                static_cast<Eigen::Index>(j));
  };
  scatter(b11, spec.w_cols, spec.w_rows);
  scatter(b12, spec.w_cols, rest_rows);
  scatter(b21, rest_cols, spec.w_rows);
  scatter(b22, rest_cols, rest_rows);
  return x;
}

Matrix GiBackend::apply(const Matrix& j) {
  ++calls_;
  switch (kind_) {
    case Kind::MP:
      return mp_inverse(j);
    case Kind::UC:
      return uc_inverse(j);
    case Kind::MX:
      return mx_inverse(j, spec_);
  }
  throw InvalidInputError("GiBackend: unknown kind");
}

Matrix GiBackend::apply_task_square(const Matrix& m) {
  ++calls_;
  switch (kind_) {
    case Kind::MP:
      return mp_inverse(m);
    case Kind::UC:
      return uc_inverse(m);
    case Kind::MX: {
      PartitionSpec induced;
      induced.w_rows = spec_.w_rows;
      induced.w_cols = spec_.w_rows;
      return mx_inverse(m, induced);
    }
  }
  throw InvalidInputError("GiBackend: unknown kind");
}

}  // namespace ucplan
