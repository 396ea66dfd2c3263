#pragma once

#include "bdc/linalg.hpp"

namespace bdc {

// Bregman kernel phi with its gradient and distance D_phi. Two kinds are
// supported: phi(x) = 1/2 ||x||^2 and phi(x) = 1/2 ||x||^2 + 1/2 ||A x||^2.
// The Gram kind keeps a handle to A and never materializes A^T A; each
// distance evaluation costs one matrix-vector product. Both kernels are
// 1-strongly convex (mu = 1), which the outer loop uses to convert Bregman
// gaps into Euclidean gaps in diagnostics.
class KernelModel {
 public:
  enum class Kind { Quadratic, QuadraticPlusGram };

  static KernelModel quadratic(std::size_t n) { return KernelModel(Kind::Quadratic, n, nullptr); }
  static KernelModel quadratic_plus_gram(const Mat& A) {
    return KernelModel(Kind::QuadraticPlusGram, A.cols, &A);
  }

  Kind kind() const { return kind_; }
  std::size_t dim() const { return n_; }
  double strong_convexity() const { return 1.0; }

  double phi(const Vec& x) const;
  Vec phi_grad(const Vec& x) const;
  double bregman_distance(const Vec& x, const Vec& y) const;

 private:
  KernelModel(Kind kind, std::size_t n, const Mat* A) : kind_(kind), n_(n), a_(A) {}

  Kind kind_;
  std::size_t n_;
  const Mat* a_;
};

}  // namespace bdc
