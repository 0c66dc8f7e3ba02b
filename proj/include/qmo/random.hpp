#pragma once

#include "qmo/types.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace qmo {

// Seeded source for every randomized construction in the toolkit.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
  cplx cnormal() {
    const double re = normal();
    return {re, normal()};
  }

  CMatrix ginibre(int rows, int cols);
  // Haar-distributed unitary (QR of a Ginibre matrix with phase fix).
  CMatrix unitary(int d);
  CVector pure_state(int d);
  // Hilbert–Schmidt random density matrix of the given rank.
  CMatrix density_matrix(int d, int rank = -1);
  // Random CPTP map from d_in to d_out with `count` Kraus operators.
  std::vector<CMatrix> channel(int d_in, int d_out, int count);

 private:
  std::mt19937_64 engine_;
};

}  // namespace qmo
