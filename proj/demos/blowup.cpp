// Builds the six-step witness and prints the minimum of |f| on each circle
// |z| = r_p next to the certified lower bound.

#include <algorithm>
#include <iostream>

#include "disclab/disclab.hpp"

int main() {
  using namespace disclab;
  PrecisionScope scope(256);
  LacunaryWitness w = build(BuildConfig{});
  const LacunarySeries f = w.series();
  std::cout << "p  c_p  n_p  gap_p  grid_min  lower_bound\n";
  for (std::size_t p = 1; p <= w.size(); ++p) {
    auto prof = circle_profile(f, w.gap(p), 4096);
    Real mn = *std::min_element(prof.begin(), prof.end(), [](const Real& a, const Real& b) { return a < b; });
    const auto& s = w.steps[p - 1];
    std::cout << p << "  " << s.coefficient.text() << "  " << s.exponent.get_str() << "  " << s.gap.text() << "  "
              << mn.to_string(12) << "  " << min_modulus_lower_bound(w, p).to_string(12) << '\n';
  }
}
