// Builds the symmetric realization of {20, 1, -2, -3, -4, -5} from a 4x4 and a
// 2x2 Hadamard block, then checks its spectrum with the Jacobi solver.

#include <cstdio>

#include "niep/niep.hpp"

int main() {
  const auto spec = niep::Spectrum::of({20, 1, -2, -3, -4, -5});
  const auto r = niep::realize_two_hadamard_orders(spec, 4, 2);

  std::printf("theta = %s\n", niep::format_scalar(r.glue_trace.front().theta).c_str());
  for (std::size_t i = 0; i < r.matrix.rows(); ++i) {
    for (std::size_t j = 0; j < r.matrix.cols(); ++j) std::printf("%9.5f ", r.matrix(i, j));
    std::printf("\n");
  }
  const auto& off = std::get<niep::Surd>((*r.exact)(0, 4));
  std::printf("off-diagonal entry = sqrt(%s)/%s\n", off.radicand.get_str().c_str(), off.denominator.get_str().c_str());

  std::printf("eigenvalues:");
  for (double v : niep::symmetric_eigenvalues(r.matrix)) std::printf(" %.12f", v);
  std::printf("\n");
  return 0;
}
