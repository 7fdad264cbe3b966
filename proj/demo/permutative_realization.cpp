// Realizes a cone member with the permutative construction and prints the
// exact diagonalization data.

#include <iostream>

#include "niep/niep.hpp"

int main() {
  const auto spec = niep::Spectrum::of({3, 1, -1});
  const auto r = niep::realize_permutative(spec);

  std::cout << "x =";
  for (const auto& v : r.x) std::cout << ' ' << niep::format_scalar(v);
  std::cout << "\nP =\n";
  for (std::size_t i = 0; i < r.P.rows(); ++i) {
    for (std::size_t j = 0; j < r.P.cols(); ++j) std::cout << '\t' << niep::format_scalar(r.P(i, j));
    std::cout << '\n';
  }
  std::cout << "det S = " << niep::format_scalar(niep::determinant(r.S)) << '\n';
  std::cout << "P S == S D: " << std::boolalpha
            << (niep::multiply(r.P, r.S) == niep::multiply(r.S, r.D)) << '\n';
  return 0;
}
