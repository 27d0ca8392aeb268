// Point-evaluation constants: S_nu kernel norms and the L1-average constant
// C(r) of D^p_{p-1} at a few radii.

#include <iomanip>
#include <iostream>

#include "disclab/disclab.hpp"

int main() {
  using namespace disclab;
  std::cout << std::setprecision(10);
  std::cout << "gap      nu=-1/2        nu=0           nu=1/2         C(r), p=3\n";
  for (double gap : {0.5, 0.1, 0.01, 0.001}) {
    std::cout << std::setw(8) << gap;
    for (double nu : {-0.5, 0.0, 0.5}) std::cout << "  " << std::setw(13) << kernel_norm(nu, Real(gap)).value;
    std::cout << "  " << std::setw(13) << c_of_r(3.0, Real(gap)) << '\n';
  }
  std::cout << "A^2_1 norm of z^3: " << bergman_norm(PowerSeries::monomial(3), 2.0, 1.0).value << '\n';
}
