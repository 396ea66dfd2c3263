#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "bdc/linalg.hpp"

namespace bdc {

// xoshiro256++ seeded through a splitmix64 chain. The generator is part of the
// instance-format contract: distributions alone do not pin a byte stream, so
// the generator and the draw order are fixed here to make instances
// reproducible across builds and platforms.
struct Xoshiro256pp {
  std::uint64_t s[4];

  explicit Xoshiro256pp(std::uint64_t seed);
  std::uint64_t next();
  // uniform double in [0, 1)
  double uniform01();
};

// Standard normals via polar Box-Muller; the spare value of each accepted
// pair is cached and returned on the following call.
struct NormalSampler {
  Xoshiro256pp rng;
  bool has_spare = false;
  double spare = 0.0;

  explicit NormalSampler(std::uint64_t seed) : rng(seed) {}
  double next();
};

struct ProblemInstance {
  Mat A;                      // m x n, column-major
  Vec b;                      // m
  std::optional<Vec> x_orig;  // n, present for generated instances
  std::size_t s = 0;          // planted sparsity (0 when unknown)
  std::uint64_t seed = 0;

  std::size_t m() const { return A.rows; }
  std::size_t n() const { return A.cols; }
  // ||b - A x_orig|| = ||0.01 * noise||, used for the kappa = nf*||0.01*n^||
  // rule; only available when x_orig is present.
  double noise_norm() const;
};

// Draw order: A column-major, then the support indices (partial Fisher-Yates,
// one uniform per index), then x_orig values on the sorted support, then the
// noise vector. b = A*x_orig + 0.01*noise. Any all-zero column of A is redrawn.
ProblemInstance gen_instance(std::size_t m, std::size_t n, std::size_t s, std::uint64_t seed);

// Container format "BDC1": one JSON header line, raw little-endian f64
// payload (A column-major, then b, then x_orig when present), then a CRC32 of
// the payload as 4 little-endian bytes.
void save_instance(const std::string& path, const ProblemInstance& inst);
ProblemInstance load_instance(const std::string& path);

// Rectangular numeric CSV (RFC-4180 subset, '.' decimal separator). b must
// have one value per row. The loaded instance has no x_orig.
ProblemInstance load_csv_matrix(const std::string& path_A, const std::string& path_b);

std::uint32_t crc32(const void* data, std::size_t len);

}  // namespace bdc
