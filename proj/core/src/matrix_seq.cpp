#include "sievevar/matrix_seq.hpp"

#include "sievevar/error.hpp"

#include <string>
#include <utility>

namespace sievevar {

MatrixSeq::MatrixSeq(Index dim, IndexBase base, std::vector<MatrixXd> entries)
    : dim_(dim), base_(base), entries_(std::move(entries)) {
  if (dim_ < 1) {
    throw InputError("matrix sequence dimension must be positive");
  }
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& m = entries_[i];
    if (m.rows() != dim_ || m.cols() != dim_) {
      throw InputError("matrix sequence entry " + std::to_string(i) + " is " +
                       std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                       ", expected " + std::to_string(dim_) + "x" + std::to_string(dim_));
    }
    if (!m.allFinite()) {
      throw InputError("matrix sequence entry " + std::to_string(i) + " has non-finite values");
    }
  }
  if (base_ == IndexBase::zero) {
    if (entries_.empty()) {
      throw InputError("moving-average sequence must contain Phi_0");
    }
    if (entries_.front() != MatrixXd::Identity(dim_, dim_)) {
      throw InputError("moving-average sequence must start with the identity");
    }
  }
}

MatrixSeq MatrixSeq::ar(Index dim, std::vector<MatrixXd> entries) {
  return MatrixSeq(dim, IndexBase::one, std::move(entries));
}

MatrixSeq MatrixSeq::ma(Index dim, std::vector<MatrixXd> entries) {
  return MatrixSeq(dim, IndexBase::zero, std::move(entries));
}

MatrixSeq MatrixSeq::from_stacked(const MatrixXd& stacked) {
  const Index k = stacked.rows();
  if (k < 1 || stacked.cols() % k != 0) {
    throw InputError("stacked coefficient block must be K x (K p)");
  }
  std::vector<MatrixXd> out;
  out.reserve(static_cast<std::size_t>(stacked.cols() / k));
  for (Index j = 0; j < stacked.cols() / k; ++j) {
    out.emplace_back(stacked.middleCols(j * k, k));
  }
  return ar(k, std::move(out));
}

MatrixXd MatrixSeq::lag(std::size_t j) const {
  if (base_ != IndexBase::one) {
    throw InputError("lag() requires an AR sequence");
  }
  if (j == 0 || j > entries_.size()) {
    return MatrixXd::Zero(dim_, dim_);
  }
  return entries_[j - 1];
}

MatrixXd MatrixSeq::stacked() const {
  MatrixXd out(dim_, dim_ * static_cast<Index>(entries_.size()));
  for (std::size_t j = 0; j < entries_.size(); ++j) {
    out.middleCols(static_cast<Index>(j) * dim_, dim_) = entries_[j];
  }
  return out;
}

}  // namespace sievevar
