#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace sievevar {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Whether position 0 holds lag 1 (AR coefficients A_1..A_p) or horizon 0
/// (moving-average / impulse-response coefficients Phi_0..Phi_H).
enum class IndexBase { zero = 0, one = 1 };

/**
 * Ordered sequence of K x K real matrices indexed by lag or horizon.
 *
 * Construction validates that every entry is K x K with finite values, and
 * that a zero-based sequence starts with the identity exactly. Values are
 * immutable afterwards.
 */
class MatrixSeq {
 public:
  MatrixSeq(Index dim, IndexBase base, std::vector<MatrixXd> entries);

  /// AR sequence A_1..A_p. An empty list is allowed (p = 0).
  static MatrixSeq ar(Index dim, std::vector<MatrixXd> entries);
  /// MA/IRF sequence Phi_0..Phi_H; entries[0] must be I_K.
  static MatrixSeq ma(Index dim, std::vector<MatrixXd> entries);
  /// Splits a K x (K n) block row [A_1 ... A_n] into an AR sequence.
  static MatrixSeq from_stacked(const MatrixXd& stacked);

  [[nodiscard]] Index dim() const noexcept { return dim_; }
  [[nodiscard]] IndexBase base() const noexcept { return base_; }
  [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
  [[nodiscard]] bool empty() const noexcept { return entries_.empty(); }

  /// Positional access (position 0 is A_1 for AR sequences, Phi_0 for MA).
  [[nodiscard]] const MatrixXd& operator[](std::size_t pos) const { return entries_[pos]; }
  [[nodiscard]] const std::vector<MatrixXd>& entries() const noexcept { return entries_; }

  /// A_j for an AR sequence, with A_j = 0 for j beyond the stored order.
  [[nodiscard]] MatrixXd lag(std::size_t j) const;

  /// Horizontal block row [A_1 ... A_p] (K x Kp).
  [[nodiscard]] MatrixXd stacked() const;

 private:
  Index dim_;
  IndexBase base_;
  std::vector<MatrixXd> entries_;
};

}  // namespace sievevar
