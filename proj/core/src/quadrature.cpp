#include "krein/quadrature.hpp"

#include <vector>

namespace krein {

Extrapolation richardson(std::span<const cplx> samples, double ratio) {
  if (samples.empty()) throw InvalidArgument("richardson needs at least one sample");
  const std::size_t k_max = samples.size();
  // row k holds T(k, 0..k); only the previous row is needed
  std::vector<cplx> prev(samples.begin(), samples.begin() + 1);
  cplx prev_diag = prev[0];
  cplx diag = prev[0];
  for (std::size_t k = 1; k < k_max; ++k) {
    std::vector<cplx> row(k + 1);
    row[0] = samples[k];
    double factor = 1.0;
    for (std::size_t j = 1; j <= k; ++j) {
      factor *= ratio;
      row[j] = (factor * row[j - 1] - prev[j - 1]) / (factor - 1.0);
    }
    prev_diag = diag;
    diag = row[k];
    prev = std::move(row);
  }
  return {diag, std::abs(diag - prev_diag)};
}

}  // namespace krein
