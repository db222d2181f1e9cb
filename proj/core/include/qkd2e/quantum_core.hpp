#pragma once

// Pure-state arithmetic for the small Hilbert spaces used by the simulator
// (dimension 2, 4 and 16): tensor products, inner products, Born-rule
// measurement of whole or partial systems, and Haar-random real rotations.

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qkd2e/rng.hpp"

namespace qkd2e {

/// Amplitudes are kept in Cartesian form; std::complex stores (re, im).
using Amplitude = std::complex<double>;

/// Tolerance for algebraic invariants (normalization, orthonormality).
inline constexpr double kInvariantTol = 1e-9;
/// Tolerance for normalization of freshly constructed states.
inline constexpr double kConstructionTol = 1e-12;
/// Outcome probabilities below this are treated as exactly zero.
inline constexpr double kZeroProbability = 1e-12;

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A measurement outcome was selected whose projection is (numerically) empty.
class DegenerateOutcome : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Immutable, shared list of unique basis labels.
class Labels {
 public:
  /// Throws std::invalid_argument on duplicate entries.
  Labels(std::vector<std::string> names);  // NOLINT(google-explicit-constructor)
  Labels(std::initializer_list<std::string> names)
      : Labels(std::vector<std::string>(names)) {}

  std::size_t size() const { return names_->size(); }
  const std::string& operator[](std::size_t i) const { return (*names_)[i]; }
  const std::vector<std::string>& names() const { return *names_; }

  bool operator==(const Labels& other) const {
    return names_ == other.names_ || *names_ == *other.names_;
  }

 private:
  std::shared_ptr<const std::vector<std::string>> names_;
};

/// Normalized pure state over a labeled orthonormal basis.
class StateVector {
 public:
  /// Validates finiteness, unit norm (within kInvariantTol) and that there is
  /// one label per amplitude. Throws std::invalid_argument on violation.
  StateVector(std::vector<Amplitude> amps, Labels labels);

  /// Rescales `amps` to unit norm before validation. Throws if the norm is 0.
  static StateVector normalized(std::vector<Amplitude> amps, Labels labels);

  /// Basis state e_k over the given labels.
  static StateVector basis_state(std::size_t k, Labels labels);

  std::size_t dim() const { return amps_.size(); }
  std::span<const Amplitude> amplitudes() const { return amps_; }
  const std::vector<std::string>& labels() const { return labels_.names(); }
  const Labels& label_set() const { return labels_; }
  const Amplitude& operator[](std::size_t i) const { return amps_[i]; }

  double norm() const;

  /// Index of `label`, or dim() if absent.
  std::size_t index_of(const std::string& label) const;

  bool operator==(const StateVector&) const = default;

 private:
  std::vector<Amplitude> amps_;
  Labels labels_;
};

/// Orthonormal family of states defining a projective measurement.
class MeasurementBasis {
 public:
  /// Throws std::invalid_argument unless there are exactly dim vectors of
  /// dimension dim, pairwise orthogonal and normalized within kInvariantTol.
  MeasurementBasis(std::vector<StateVector> vectors, std::string tag);

  static MeasurementBasis computational(Labels labels,
                                        std::string tag = "computational");

  std::size_t dim() const { return vectors_.size(); }
  const std::vector<StateVector>& vectors() const { return vectors_; }
  const StateVector& operator[](std::size_t k) const { return vectors_[k]; }
  const std::string& tag() const { return tag_; }

 private:
  std::vector<StateVector> vectors_;
  std::string tag_;
};

/// Element of SO(n), stored row-major.
class RotationMatrix {
 public:
  /// Throws std::invalid_argument unless R R^T = I and det R = +1 within
  /// kInvariantTol.
  RotationMatrix(std::size_t n, std::vector<double> entries);

  static RotationMatrix identity(std::size_t n);
  /// SO(2) element [[cos t, -sin t], [sin t, cos t]].
  static RotationMatrix planar(double theta);

  std::size_t n() const { return n_; }
  double operator()(std::size_t row, std::size_t col) const {
    return entries_[row * n_ + col];
  }
  std::span<const double> entries() const { return entries_; }
  RotationMatrix transposed() const;
  double determinant() const;

 private:
  std::size_t n_;
  std::vector<double> entries_;
};

/// Outcome of a projective measurement plus the collapsed state.
struct Measurement {
  std::size_t outcome;
  StateVector state;
};

/// One branch of a measurement: its Born probability and the normalized
/// post-measurement state. Probability-zero branches carry no state.
struct MeasurementBranch {
  double probability;
  std::vector<Amplitude> collapsed;
};

/// Describes a tensor-product layout of a state: factor dimensions, slowest
/// index first. {2,2,2,2} for the biphoton space.
using FactorDims = std::span<const std::size_t>;

StateVector tensor(const StateVector& a, const StateVector& b);

/// <a|b> = sum_k conj(a_k) b_k.
Amplitude inner(const StateVector& a, const StateVector& b);

/// p_k = |<basis_k|state>|^2.
std::vector<double> born_distribution(const StateVector& state,
                                      const MeasurementBasis& basis);

/// Selects outcome k by inverse CDF at u in [0,1) and returns basis vector k.
Measurement projective_measure(const StateVector& state,
                               const MeasurementBasis& basis, double u);

/// Born distribution of a measurement on the factors listed in `subsystem`.
/// The basis acts on the tensor product of those factors, taken in the order
/// listed.
std::vector<double> marginal_distribution(const StateVector& state,
                                          FactorDims dims,
                                          std::span<const std::size_t> subsystem,
                                          const MeasurementBasis& basis);

/// All branches of a partial measurement, in basis order.
std::vector<MeasurementBranch> measurement_branches(
    const StateVector& state, FactorDims dims,
    std::span<const std::size_t> subsystem, const MeasurementBasis& basis);

/// Measures the listed factors and returns the renormalized joint state, in
/// which the measured factors hold the selected basis vector.
/// Throws DegenerateOutcome if the selected branch has probability below
/// kZeroProbability.
Measurement partial_measure(const StateVector& state, FactorDims dims,
                            std::span<const std::size_t> subsystem,
                            const MeasurementBasis& basis, double u);

/// Haar-distributed element of SO(n), n in {2, 4}.
RotationMatrix haar_rotation(std::size_t n, Rng& rng);

/// Output vector k = sum_j R(j,k) * input vector j.
MeasurementBasis rotate_basis(const MeasurementBasis& basis,
                              const RotationMatrix& rotation);

/// Applies a real rotation to a state's amplitudes: out = R * in.
StateVector rotate_state(const StateVector& state,
                         const RotationMatrix& rotation);

/// Tensor product of bases; vector index (i, j) -> i * dim(b) + j.
MeasurementBasis tensor(const MeasurementBasis& a, const MeasurementBasis& b);

}  // namespace qkd2e
