#pragma once

// Dense complex matrices, multipartite density matrices and the operations used
// for entanglement bookkeeping: Kronecker products, partial trace, partial
// transpose, Hermitian spectra and negativity.
//
// Index convention: for subsystem dimensions (d0, d1, ..., dk-1) a composite
// basis index is i0*d1*...*dk-1 + ... + ik-1, i.e. subsystem 0 varies slowest.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dimerlab/errors.hpp"

namespace dimerlab {

using Complex = std::complex<double>;

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw ArgumentError("ComplexMatrix: entry count " + std::to_string(data_.size()) +
                          " does not match " + std::to_string(rows_) + "x" + std::to_string(cols_));
    }
    for (const auto& z : data_) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw ArgumentError("ComplexMatrix: non-finite entry");
      }
    }
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(std::span<const double> values) {
    ComplexMatrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
  }

  /// |v><w|
  static ComplexMatrix outer(std::span<const Complex> v, std::span<const Complex> w) {
    ComplexMatrix m(v.size(), w.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      for (std::size_t j = 0; j < w.size(); ++j) m(i, j) = v[i] * std::conj(w[j]);
    }
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<const Complex> data() const noexcept { return data_; }
  std::span<Complex> data() noexcept { return data_; }

  Complex trace() const {
    Complex t = 0.0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& z : data_) m = std::max(m, std::abs(z));
    return m;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& z : data_) s += std::norm(z);
    return std::sqrt(s);
  }

  ComplexMatrix adjoint() const {
    ComplexMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
    }
    return m;
  }

  ComplexMatrix transpose() const {
    ComplexMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
    }
    return m;
  }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  ComplexMatrix& operator*=(Complex s) {
    for (auto& z : data_) z *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols_ != b.rows_) throw ArgumentError("matrix product: inner dimensions differ");
    ComplexMatrix m(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Complex aik = a(i, k);
        if (aik == Complex{}) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) m(i, j) += aik * b(k, j);
      }
    }
    return m;
  }

  std::vector<Complex> apply(std::span<const Complex> v) const {
    if (v.size() != cols_) throw ArgumentError("matrix-vector product: size mismatch");
    std::vector<Complex> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      Complex acc = 0.0;
      for (std::size_t j = 0; j < cols_; ++j) acc += (*this)(i, j) * v[j];
      out[i] = acc;
    }
    return out;
  }

  /// Largest |a_ij - a_ji^*| relative to the largest entry (0 for the zero matrix).
  double hermiticity_defect() const {
    if (!square()) return INFINITY;
    const double scale = max_abs();
    if (scale == 0.0) return 0.0;
    double d = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = i; j < cols_; ++j) {
        d = std::max(d, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
      }
    }
    return d / scale;
  }

 private:
  void require_same_shape(const ComplexMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw ArgumentError("matrix shapes differ");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return INFINITY;
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

inline constexpr double kHermitianTolerance = 1e-10;

/// Square matrix over a composite space; may be unnormalized.
class DensityMatrix {
 public:
  DensityMatrix() = default;
  DensityMatrix(ComplexMatrix m, std::vector<std::size_t> dims) : matrix_(std::move(m)), dims_(std::move(dims)) {
    if (!matrix_.square()) throw ArgumentError("DensityMatrix: matrix is not square");
    const std::size_t prod =
        std::accumulate(dims_.begin(), dims_.end(), std::size_t{1}, std::multiplies<>{});
    if (prod != matrix_.rows()) {
      throw ArgumentError("DensityMatrix: subsystem dimensions multiply to " + std::to_string(prod) +
                          ", matrix side is " + std::to_string(matrix_.rows()));
    }
    if (matrix_.hermiticity_defect() > kHermitianTolerance) {
      throw ArgumentError("DensityMatrix: matrix is not Hermitian");
    }
  }

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  std::size_t side() const noexcept { return matrix_.rows(); }
  std::size_t num_subsystems() const noexcept { return dims_.size(); }
  double trace() const { return matrix_.trace().real(); }

  DensityMatrix normalized() const {
    const double t = trace();
    if (!(std::abs(t) > 0.0)) throw ArgumentError("DensityMatrix: cannot normalize a zero-trace state");
    return DensityMatrix(matrix_ * Complex(1.0 / t), dims_);
  }

 private:
  ComplexMatrix matrix_;
  std::vector<std::size_t> dims_;
};

struct Spectrum {
  std::vector<double> eigenvalues;  // descending

  double sum() const { return std::accumulate(eigenvalues.begin(), eigenvalues.end(), 0.0); }
  double min() const { return eigenvalues.empty() ? 0.0 : eigenvalues.back(); }
  double max() const { return eigenvalues.empty() ? 0.0 : eigenvalues.front(); }
  std::size_t count_below(double threshold) const {
    return static_cast<std::size_t>(
        std::count_if(eigenvalues.begin(), eigenvalues.end(), [&](double v) { return v < threshold; }));
  }
};

inline ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t cap = limits().max_matrix_side;
  if ((a.rows() != 0 && b.rows() > cap / a.rows()) || (a.cols() != 0 && b.cols() > cap / a.cols())) {
    throw CapacityError("tensor_product: result side exceeds cap of " + std::to_string(cap));
  }
  ComplexMatrix m(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex{}) continue;
      for (std::size_t k = 0; k < b.rows(); ++k) {
        for (std::size_t l = 0; l < b.cols(); ++l) m(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
      }
    }
  }
  return m;
}

inline DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b) {
  std::vector<std::size_t> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return DensityMatrix(tensor_product(a.matrix(), b.matrix()), std::move(dims));
}

namespace detail {

inline std::vector<std::size_t> strides_of(std::span<const std::size_t> dims) {
  std::vector<std::size_t> s(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;) s[k - 1] = s[k] * dims[k];
  return s;
}

/// Splits the composite space into (kept, traced) parts. Returns, for every kept
/// index i and traced index t, the full composite index, laid out as table[i*nt + t].
struct Bipartition {
  std::size_t kept_dim = 1;
  std::size_t traced_dim = 1;
  std::vector<std::size_t> kept_dims;
  std::vector<std::size_t> table;
};

inline Bipartition bipartition(std::span<const std::size_t> dims, std::span<const std::size_t> keep) {
  std::vector<bool> kept(dims.size(), false);
  for (std::size_t k : keep) {
    if (k >= dims.size()) {
      throw ArgumentError("subsystem index " + std::to_string(k) + " out of range (have " +
                          std::to_string(dims.size()) + ")");
    }
    if (kept[k]) throw ArgumentError("subsystem index " + std::to_string(k) + " repeated");
    kept[k] = true;
  }
  std::vector<std::size_t> sorted_keep(keep.begin(), keep.end());
  std::sort(sorted_keep.begin(), sorted_keep.end());
  std::vector<std::size_t> traced;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (!kept[k]) traced.push_back(k);
  }

  const auto strides = strides_of(dims);
  Bipartition bp;
  for (std::size_t k : sorted_keep) {
    bp.kept_dims.push_back(dims[k]);
    bp.kept_dim *= dims[k];
  }
  for (std::size_t k : traced) bp.traced_dim *= dims[k];

  auto offsets = [&](const std::vector<std::size_t>& which, std::size_t count) {
    std::vector<std::size_t> off(count, 0);
    std::vector<std::size_t> digit(which.size(), 0);
    for (std::size_t n = 0; n < count; ++n) {
      std::size_t o = 0;
      for (std::size_t p = 0; p < which.size(); ++p) o += digit[p] * strides[which[p]];
      off[n] = o;
      for (std::size_t p = which.size(); p-- > 0;) {
        if (++digit[p] < dims[which[p]]) break;
        digit[p] = 0;
      }
    }
    return off;
  };
  const auto kept_off = offsets(sorted_keep, bp.kept_dim);
  const auto traced_off = offsets(traced, bp.traced_dim);
  bp.table.resize(bp.kept_dim * bp.traced_dim);
  for (std::size_t i = 0; i < bp.kept_dim; ++i) {
    for (std::size_t t = 0; t < bp.traced_dim; ++t) bp.table[i * bp.traced_dim + t] = kept_off[i] + traced_off[t];
  }
  return bp;
}

}  // namespace detail

/// Reduced matrix over `keep` (0-based subsystem indices, any order; the result
/// keeps them in their original order). An empty set yields the 1x1 trace.
inline DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep) {
  const auto bp = detail::bipartition(rho.dims(), keep);
  if (bp.kept_dim > limits().max_matrix_side) throw CapacityError("partial_trace: reduced side exceeds cap");
  ComplexMatrix out(bp.kept_dim, bp.kept_dim);
  const auto& m = rho.matrix();
  for (std::size_t i = 0; i < bp.kept_dim; ++i) {
    for (std::size_t j = 0; j < bp.kept_dim; ++j) {
      Complex acc = 0.0;
      for (std::size_t t = 0; t < bp.traced_dim; ++t) {
        acc += m(bp.table[i * bp.traced_dim + t], bp.table[j * bp.traced_dim + t]);
      }
      out(i, j) = acc;
    }
  }
  return DensityMatrix(std::move(out), bp.kept_dims);
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<std::size_t> keep) {
  return partial_trace(rho, std::span<const std::size_t>(keep.begin(), keep.size()));
}

/// Reduced matrix Tr_rest |psi><psi| of a vector over `dims`, without forming the
/// full projector.
inline DensityMatrix reduce_pure(std::span<const Complex> psi, std::span<const std::size_t> dims,
                                 std::span<const std::size_t> keep) {
  const auto bp = detail::bipartition(dims, keep);
  if (bp.kept_dim * bp.traced_dim != psi.size()) throw ArgumentError("reduce_pure: vector length mismatch");
  if (bp.kept_dim > limits().max_matrix_side) throw CapacityError("reduce_pure: reduced side exceeds cap");
  // Gather psi into a kept x traced block so the contraction runs over contiguous rows.
  std::vector<Complex> block(psi.size());
  for (std::size_t n = 0; n < block.size(); ++n) block[n] = psi[bp.table[n]];
  ComplexMatrix out(bp.kept_dim, bp.kept_dim);
  const std::size_t nt = bp.traced_dim;
  for (std::size_t i = 0; i < bp.kept_dim; ++i) {
    const Complex* ri = block.data() + i * nt;
    for (std::size_t j = i; j < bp.kept_dim; ++j) {
      const Complex* rj = block.data() + j * nt;
      Complex acc = 0.0;
      for (std::size_t t = 0; t < nt; ++t) acc += ri[t] * std::conj(rj[t]);
      out(i, j) = acc;
      out(j, i) = std::conj(acc);
    }
    out(i, i) = out(i, i).real();
  }
  return DensityMatrix(std::move(out), bp.kept_dims);
}

/// Cross term Tr_rest |psi><phi| for two vectors over the same `dims`.
inline ComplexMatrix reduce_outer(std::span<const Complex> psi, std::span<const Complex> phi,
                                  std::span<const std::size_t> dims, std::span<const std::size_t> keep) {
  const auto bp = detail::bipartition(dims, keep);
  if (psi.size() != phi.size() || bp.kept_dim * bp.traced_dim != psi.size()) {
    throw ArgumentError("reduce_outer: vector length mismatch");
  }
  ComplexMatrix out(bp.kept_dim, bp.kept_dim);
  const std::size_t nt = bp.traced_dim;
  for (std::size_t i = 0; i < bp.kept_dim; ++i) {
    for (std::size_t j = 0; j < bp.kept_dim; ++j) {
      Complex acc = 0.0;
      for (std::size_t t = 0; t < nt; ++t) acc += psi[bp.table[i * nt + t]] * std::conj(phi[bp.table[j * nt + t]]);
      out(i, j) = acc;
    }
  }
  return out;
}

/// Transposes the row/column indices of every subsystem in `which`.
inline DensityMatrix partial_transpose(const DensityMatrix& rho, std::span<const std::size_t> which) {
  const auto& dims = rho.dims();
  std::vector<bool> flip(dims.size(), false);
  for (std::size_t k : which) {
    if (k >= dims.size()) {
      throw ArgumentError("partial_transpose: subsystem index " + std::to_string(k) + " out of range");
    }
    flip[k] = true;
  }
  const auto strides = detail::strides_of(dims);
  const std::size_t n = rho.side();
  ComplexMatrix out(n, n);
  const auto& m = rho.matrix();
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t r2 = r;
      std::size_t c2 = c;
      for (std::size_t k = 0; k < dims.size(); ++k) {
        if (!flip[k]) continue;
        const std::size_t dr = (r / strides[k]) % dims[k];
        const std::size_t dc = (c / strides[k]) % dims[k];
        r2 = r2 - dr * strides[k] + dc * strides[k];
        c2 = c2 - dc * strides[k] + dr * strides[k];
      }
      out(r2, c2) = m(r, c);
    }
  }
  return DensityMatrix(std::move(out), dims);
}

inline DensityMatrix partial_transpose(const DensityMatrix& rho, std::size_t subsystem) {
  return partial_transpose(rho, std::span<const std::size_t>(&subsystem, 1));
}

/// Reorders subsystems: result subsystem p is input subsystem order[p].
inline DensityMatrix permute_subsystems(const DensityMatrix& rho, std::span<const std::size_t> order) {
  const auto& dims = rho.dims();
  if (order.size() != dims.size()) throw ArgumentError("permute_subsystems: order has wrong length");
  std::vector<bool> seen(dims.size(), false);
  std::vector<std::size_t> new_dims(dims.size());
  for (std::size_t p = 0; p < order.size(); ++p) {
    if (order[p] >= dims.size() || seen[order[p]]) throw ArgumentError("permute_subsystems: not a permutation");
    seen[order[p]] = true;
    new_dims[p] = dims[order[p]];
  }
  const auto old_strides = detail::strides_of(dims);
  const auto new_strides = detail::strides_of(new_dims);
  const std::size_t n = rho.side();
  std::vector<std::size_t> map(n);
  for (std::size_t idx = 0; idx < n; ++idx) {
    std::size_t old = 0;
    for (std::size_t p = 0; p < order.size(); ++p) {
      old += ((idx / new_strides[p]) % new_dims[p]) * old_strides[order[p]];
    }
    map[idx] = old;
  }
  ComplexMatrix out(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) out(r, c) = rho.matrix()(map[r], map[c]);
  }
  return DensityMatrix(std::move(out), std::move(new_dims));
}


/// Full spectrum of a Hermitian matrix by cyclic complex Jacobi rotations,
/// sorted descending.
inline Spectrum hermitian_eigenvalues(const ComplexMatrix& input) {
  if (!input.square()) throw ArgumentError("hermitian_eigenvalues: matrix is not square");
  if (input.hermiticity_defect() > kHermitianTolerance) {
    throw ArgumentError("hermitian_eigenvalues: matrix is not Hermitian");
  }
  const std::size_t n = input.rows();
  ComplexMatrix a = input;
  for (std::size_t i = 0; i < n; ++i) a(i, i) = a(i, i).real();

  auto off_norm2 = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) s += std::norm(a(i, j));
    }
    return s;
  };
  const double scale2 = std::max(std::norm(a.frobenius_norm()), 1e-300);
  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_norm2() <= 1e-32 * scale2) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex h = a(p, q);
        const double g = std::abs(h);
        if (g == 0.0) continue;
        const double alpha = a(p, p).real();
        const double beta = a(q, q).real();
        // Skip rotations that cannot change the diagonal at working precision.
        if (sweep > 3 && g < 1e-18 * (std::abs(alpha) + std::abs(beta))) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        const Complex phase = h / g;  // e^{i phi}
        const double tau = (beta - alpha) / (2.0 * g);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Complex sp = s * std::conj(phase);  // s e^{-i phi}
        // A <- A U with U = [[c, s], [-s e^{-i phi}, c e^{-i phi}]] on (p, q).
        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = c * akp - sp * akq;
          a(k, q) = s * akp + c * std::conj(phase) * akq;
        }
        // A <- U^dagger A.
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = c * apk - s * phase * aqk;
          a(q, k) = s * apk + c * phase * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = alpha - t * g;
        a(q, q) = beta + t * g;
      }
    }
  }
  Spectrum out;
  out.eigenvalues.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.eigenvalues[i] = a(i, i).real();
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), std::greater<>{});
  return out;
}

inline constexpr double kNegativityZero = 1e-10;
inline constexpr double kNormalizationTolerance = 1e-9;

/// Sum of |negative eigenvalues| of the partial transpose over `which`.
/// Eigenvalues in (-1e-10, 0) are treated as zero.
inline double negativity(const DensityMatrix& rho, std::span<const std::size_t> which) {
  const double t = rho.trace();
  if (std::abs(t - 1.0) > kNormalizationTolerance) {
    throw ArgumentError("negativity: state must be normalized, found trace " + std::to_string(t));
  }
  const auto spectrum = hermitian_eigenvalues(partial_transpose(rho, which).matrix());
  double neg = 0.0;
  for (double v : spectrum.eigenvalues) {
    if (v <= -kNegativityZero) neg -= v;
  }
  return neg;
}

inline double negativity(const DensityMatrix& rho, std::size_t subsystem) {
  return negativity(rho, std::span<const std::size_t>(&subsystem, 1));
}

/// Half the trace norm of a - b.
inline double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  const auto spectrum = hermitian_eigenvalues(a - b);
  double s = 0.0;
  for (double v : spectrum.eigenvalues) s += std::abs(v);
  return 0.5 * s;
}

/// Largest |eigenvalue| of a Hermitian matrix.
inline double spectral_norm(const ComplexMatrix& h) {
  const auto spectrum = hermitian_eigenvalues(h);
  return std::max(std::abs(spectrum.max()), std::abs(spectrum.min()));
}

}  // namespace dimerlab
