#include "qkd2e/quantum_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

namespace qkd2e {

namespace {

double squared_norm(std::span<const Amplitude> amps) {
  double acc = 0.0;
  for (const auto& a : amps) acc += std::norm(a);
  return acc;
}

void check_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionMismatch(std::string(what) + ": dimension " +
                            std::to_string(a) + " vs " + std::to_string(b));
  }
}

// Maps (subsystem multi-index, complement multi-index) to flat indices.
struct FactorSplit {
  std::size_t sub_dim = 1;
  std::size_t rest_dim = 1;
  // flat[s * rest_dim + c]
  std::vector<std::size_t> flat;
};

FactorSplit split_factors(FactorDims dims,
                          std::span<const std::size_t> subsystem,
                          std::size_t total_dim) {
  const std::size_t nf = dims.size();
  std::size_t product = 1;
  for (auto d : dims) {
    if (d == 0) throw std::invalid_argument("factor dimension must be positive");
    product *= d;
  }
  check_same_dim(product, total_dim, "factor layout");

  std::vector<bool> in_sub(nf, false);
  for (auto f : subsystem) {
    if (f >= nf) throw std::invalid_argument("subsystem factor out of range");
    if (in_sub[f]) throw std::invalid_argument("subsystem factor repeated");
    in_sub[f] = true;
  }
  if (subsystem.empty()) throw std::invalid_argument("empty subsystem");

  std::vector<std::size_t> rest;
  for (std::size_t f = 0; f < nf; ++f) {
    if (!in_sub[f]) rest.push_back(f);
  }

  // Row-major strides, factor 0 slowest.
  std::vector<std::size_t> stride(nf, 1);
  for (std::size_t f = nf; f-- > 1;) stride[f - 1] = stride[f] * dims[f];

  FactorSplit out;
  for (auto f : subsystem) out.sub_dim *= dims[f];
  for (auto f : rest) out.rest_dim *= dims[f];
  out.flat.resize(out.sub_dim * out.rest_dim);

  std::vector<std::size_t> digit(nf, 0);
  for (std::size_t s = 0; s < out.sub_dim; ++s) {
    std::size_t rem = s;
    for (std::size_t i = subsystem.size(); i-- > 0;) {
      const auto f = subsystem[i];
      digit[f] = rem % dims[f];
      rem /= dims[f];
    }
    for (std::size_t c = 0; c < out.rest_dim; ++c) {
      std::size_t remc = c;
      for (std::size_t i = rest.size(); i-- > 0;) {
        const auto f = rest[i];
        digit[f] = remc % dims[f];
        remc /= dims[f];
      }
      std::size_t idx = 0;
      for (std::size_t f = 0; f < nf; ++f) idx += digit[f] * stride[f];
      out.flat[s * out.rest_dim + c] = idx;
    }
  }
  return out;
}

// Gaussian elimination with partial pivoting on a copy.
double determinant_of(std::vector<double> a, std::size_t n) {
  double det = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r * n + c]) > std::abs(a[piv * n + c])) piv = r;
    }
    if (a[piv * n + c] == 0.0) return 0.0;
    if (piv != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a[c * n + k], a[piv * n + k]);
      det = -det;
    }
    det *= a[c * n + c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r * n + c] / a[c * n + c];
      for (std::size_t k = c; k < n; ++k) a[r * n + k] -= f * a[c * n + k];
    }
  }
  return det;
}

std::size_t inverse_cdf(std::span<const double> probs, double u) {
  if (!(u >= 0.0 && u < 1.0)) {
    throw std::invalid_argument("uniform draw must lie in [0, 1)");
  }
  double total = 0.0;
  for (double p : probs) total += p < kZeroProbability ? 0.0 : p;
  const double target = u * total;
  double acc = 0.0;
  std::size_t last_nonzero = probs.size();
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (probs[k] < kZeroProbability) continue;
    last_nonzero = k;
    acc += probs[k];
    if (target < acc) return k;
  }
  if (last_nonzero == probs.size()) {
    throw DegenerateOutcome("measurement has no outcome with nonzero probability");
  }
  return last_nonzero;
}

}  // namespace

// --- Labels --------------------------------------------------------------

Labels::Labels(std::vector<std::string> names) {
  std::unordered_set<std::string> seen;
  for (const auto& l : names) {
    if (!seen.insert(l).second) {
      throw std::invalid_argument("duplicate state label '" + l + "'");
    }
  }
  names_ = std::make_shared<const std::vector<std::string>>(std::move(names));
}

// --- StateVector ---------------------------------------------------------

StateVector::StateVector(std::vector<Amplitude> amps, Labels labels)
    : amps_(std::move(amps)), labels_(std::move(labels)) {
  if (amps_.empty()) throw std::invalid_argument("state dimension must be positive");
  if (labels_.size() != amps_.size()) {
    throw std::invalid_argument("state labels must match dimension");
  }
  for (const auto& a : amps_) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
      throw std::invalid_argument("state amplitude is not finite");
    }
  }
  if (std::abs(squared_norm(amps_) - 1.0) > kInvariantTol) {
    throw std::invalid_argument("state is not normalized");
  }
}

StateVector StateVector::normalized(std::vector<Amplitude> amps,
                                    Labels labels) {
  const double n = std::sqrt(squared_norm(amps));
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw std::invalid_argument("cannot normalize a zero or non-finite vector");
  }
  for (auto& a : amps) a /= n;
  return StateVector(std::move(amps), std::move(labels));
}

StateVector StateVector::basis_state(std::size_t k, Labels labels) {
  if (k >= labels.size()) throw std::out_of_range("basis index out of range");
  std::vector<Amplitude> amps(labels.size(), Amplitude{0.0, 0.0});
  amps[k] = 1.0;
  return StateVector(std::move(amps), std::move(labels));
}

double StateVector::norm() const { return std::sqrt(squared_norm(amps_)); }

std::size_t StateVector::index_of(const std::string& label) const {
  const auto& names = labels_.names();
  const auto it = std::find(names.begin(), names.end(), label);
  return static_cast<std::size_t>(it - names.begin());
}

// --- MeasurementBasis ----------------------------------------------------

MeasurementBasis::MeasurementBasis(std::vector<StateVector> vectors,
                                   std::string tag)
    : vectors_(std::move(vectors)), tag_(std::move(tag)) {
  const std::size_t n = vectors_.size();
  if (n == 0) throw std::invalid_argument("basis must contain vectors");
  for (const auto& v : vectors_) {
    check_same_dim(v.dim(), n, "basis vector");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const Amplitude ip = inner(vectors_[i], vectors_[j]);
      const double expected = i == j ? 1.0 : 0.0;
      if (std::abs(ip - expected) > kInvariantTol) {
        throw std::invalid_argument("basis '" + tag_ + "' is not orthonormal");
      }
    }
  }
}

MeasurementBasis MeasurementBasis::computational(Labels labels,
                                                 std::string tag) {
  std::vector<StateVector> vs;
  vs.reserve(labels.size());
  for (std::size_t k = 0; k < labels.size(); ++k) {
    vs.push_back(StateVector::basis_state(k, labels));
  }
  return MeasurementBasis(std::move(vs), std::move(tag));
}

// --- RotationMatrix ------------------------------------------------------

RotationMatrix::RotationMatrix(std::size_t n, std::vector<double> entries)
    : n_(n), entries_(std::move(entries)) {
  if (n_ == 0 || entries_.size() != n_ * n_) {
    throw std::invalid_argument("rotation matrix must be n x n");
  }
  for (double e : entries_) {
    if (!std::isfinite(e)) throw std::invalid_argument("rotation entry not finite");
  }
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n_; ++k) acc += (*this)(i, k) * (*this)(j, k);
      if (std::abs(acc - (i == j ? 1.0 : 0.0)) > kInvariantTol) {
        throw std::invalid_argument("matrix is not orthogonal");
      }
    }
  }
  if (std::abs(determinant() - 1.0) > kInvariantTol) {
    throw std::invalid_argument("rotation must have determinant +1");
  }
}

RotationMatrix RotationMatrix::identity(std::size_t n) {
  std::vector<double> e(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) e[i * n + i] = 1.0;
  return RotationMatrix(n, std::move(e));
}

RotationMatrix RotationMatrix::planar(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return RotationMatrix(2, {c, -s, s, c});
}

RotationMatrix RotationMatrix::transposed() const {
  std::vector<double> t(n_ * n_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) t[j * n_ + i] = (*this)(i, j);
  }
  return RotationMatrix(n_, std::move(t));
}

double RotationMatrix::determinant() const {
  return determinant_of(entries_, n_);
}

// --- operations ----------------------------------------------------------

StateVector tensor(const StateVector& a, const StateVector& b) {
  std::vector<Amplitude> amps;
  std::vector<std::string> labels;
  amps.reserve(a.dim() * b.dim());
  labels.reserve(a.dim() * b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = 0; j < b.dim(); ++j) {
      amps.push_back(a[i] * b[j]);
      labels.push_back(a.labels()[i] + "⊗" + b.labels()[j]);
    }
  }
  return StateVector(std::move(amps), std::move(labels));
}

Amplitude inner(const StateVector& a, const StateVector& b) {
  check_same_dim(a.dim(), b.dim(), "inner product");
  Amplitude acc{0.0, 0.0};
  for (std::size_t k = 0; k < a.dim(); ++k) acc += std::conj(a[k]) * b[k];
  return acc;
}

std::vector<double> born_distribution(const StateVector& state,
                                      const MeasurementBasis& basis) {
  check_same_dim(state.dim(), basis.dim(), "born distribution");
  std::vector<double> p(basis.dim());
  for (std::size_t k = 0; k < basis.dim(); ++k) {
    p[k] = std::norm(inner(basis[k], state));
  }
  return p;
}

Measurement projective_measure(const StateVector& state,
                               const MeasurementBasis& basis, double u) {
  const auto p = born_distribution(state, basis);
  const std::size_t k = inverse_cdf(p, u);
  return {k, basis[k]};
}

std::vector<MeasurementBranch> measurement_branches(
    const StateVector& state, FactorDims dims,
    std::span<const std::size_t> subsystem, const MeasurementBasis& basis) {
  const FactorSplit split = split_factors(dims, subsystem, state.dim());
  check_same_dim(basis.dim(), split.sub_dim, "subsystem basis");

  std::vector<MeasurementBranch> out;
  out.reserve(basis.dim());
  std::vector<Amplitude> reduced(split.rest_dim);
  for (std::size_t k = 0; k < basis.dim(); ++k) {
    const auto& bk = basis[k];
    std::fill(reduced.begin(), reduced.end(), Amplitude{0.0, 0.0});
    for (std::size_t s = 0; s < split.sub_dim; ++s) {
      const Amplitude w = std::conj(bk[s]);
      if (w == Amplitude{0.0, 0.0}) continue;
      for (std::size_t c = 0; c < split.rest_dim; ++c) {
        reduced[c] += w * state[split.flat[s * split.rest_dim + c]];
      }
    }
    const double prob = squared_norm(reduced);
    MeasurementBranch branch{prob, {}};
    if (prob >= kZeroProbability) {
      const double scale = 1.0 / std::sqrt(prob);
      branch.collapsed.assign(state.dim(), Amplitude{0.0, 0.0});
      for (std::size_t s = 0; s < split.sub_dim; ++s) {
        for (std::size_t c = 0; c < split.rest_dim; ++c) {
          branch.collapsed[split.flat[s * split.rest_dim + c]] =
              bk[s] * reduced[c] * scale;
        }
      }
    }
    out.push_back(std::move(branch));
  }
  return out;
}

std::vector<double> marginal_distribution(const StateVector& state,
                                          FactorDims dims,
                                          std::span<const std::size_t> subsystem,
                                          const MeasurementBasis& basis) {
  const auto branches = measurement_branches(state, dims, subsystem, basis);
  std::vector<double> p;
  p.reserve(branches.size());
  for (const auto& b : branches) p.push_back(b.probability);
  return p;
}

Measurement partial_measure(const StateVector& state, FactorDims dims,
                            std::span<const std::size_t> subsystem,
                            const MeasurementBasis& basis, double u) {
  auto branches = measurement_branches(state, dims, subsystem, basis);
  std::vector<double> p;
  p.reserve(branches.size());
  for (const auto& b : branches) p.push_back(b.probability);
  const std::size_t k = inverse_cdf(p, u);
  if (branches[k].collapsed.empty()) {
    throw DegenerateOutcome("selected measurement branch has zero probability");
  }
  return {k, StateVector::normalized(std::move(branches[k].collapsed),
                                     state.label_set())};
}

RotationMatrix haar_rotation(std::size_t n, Rng& rng) {
  if (n != 2 && n != 4) {
    throw std::invalid_argument("haar_rotation supports n in {2, 4}");
  }
  // Gaussian matrix, columns orthonormalized by modified Gram-Schmidt. This
  // is the Q of a QR factorization with positive diagonal R, which is
  // Haar-distributed on O(n); flipping one column maps it onto SO(n).
  std::vector<double> q(n * n);
  for (auto& x : q) x = rng.normal();
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      double proj = 0.0;
      for (std::size_t r = 0; r < n; ++r) proj += q[r * n + i] * q[r * n + j];
      for (std::size_t r = 0; r < n; ++r) q[r * n + j] -= proj * q[r * n + i];
    }
    double len = 0.0;
    for (std::size_t r = 0; r < n; ++r) len += q[r * n + j] * q[r * n + j];
    len = std::sqrt(len);
    for (std::size_t r = 0; r < n; ++r) q[r * n + j] /= len;
  }
  if (determinant_of(q, n) < 0.0) {
    for (std::size_t r = 0; r < n; ++r) q[r * n] = -q[r * n];
  }
  return RotationMatrix(n, std::move(q));
}

MeasurementBasis rotate_basis(const MeasurementBasis& basis,
                              const RotationMatrix& rotation) {
  check_same_dim(basis.dim(), rotation.n(), "rotate_basis");
  const std::size_t n = basis.dim();
  std::vector<StateVector> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<Amplitude> amps(n, Amplitude{0.0, 0.0});
    for (std::size_t j = 0; j < n; ++j) {
      const double w = rotation(j, k);
      for (std::size_t i = 0; i < n; ++i) amps[i] += w * basis[j][i];
    }
    out.push_back(StateVector::normalized(std::move(amps), basis[k].label_set()));
  }
  return MeasurementBasis(std::move(out), basis.tag() + "*R");
}

StateVector rotate_state(const StateVector& state,
                         const RotationMatrix& rotation) {
  check_same_dim(state.dim(), rotation.n(), "rotate_state");
  const std::size_t n = state.dim();
  std::vector<Amplitude> out(n, Amplitude{0.0, 0.0});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out[i] += rotation(i, j) * state[j];
  }
  return StateVector::normalized(std::move(out), state.label_set());
}

MeasurementBasis tensor(const MeasurementBasis& a, const MeasurementBasis& b) {
  std::vector<StateVector> out;
  out.reserve(a.dim() * b.dim());
  for (const auto& va : a.vectors()) {
    for (const auto& vb : b.vectors()) out.push_back(tensor(va, vb));
  }
  return MeasurementBasis(std::move(out), a.tag() + "⊗" + b.tag());
}

}  // namespace qkd2e
