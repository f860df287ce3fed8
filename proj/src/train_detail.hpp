#pragma once

// Internal pieces of the training loop, separated for direct testing.

#include <algorithm>
#include <cstddef>
#include <vector>

namespace swr::detail {

struct Triple {
  double beta;
  double delta;
  double sigma;
};

inline std::vector<Triple> sorted_triples(const std::vector<double>& theta,
                                          std::size_t k) {
  std::vector<Triple> tr(k);
  for (std::size_t i = 0; i < k; ++i) {
    tr[i] = {theta[i], theta[k + i], theta[2 * k + i]};
  }
  std::stable_sort(tr.begin(), tr.end(),
                   [](const Triple& a, const Triple& b) { return a.delta < b.delta; });
  return tr;
}

// Collapses windows whose fitted locations collided: weights add up, the
// location/width of the heaviest member win. Input must be sorted by delta.
inline std::vector<Triple> merge_collisions(const std::vector<Triple>& tr, double tol) {
  std::vector<Triple> out;
  std::size_t i = 0;
  while (i < tr.size()) {
    std::size_t j = i + 1;
    Triple rep = tr[i];
    double beta_sum = tr[i].beta;
    while (j < tr.size() && tr[j].delta - tr[j - 1].delta <= tol) {
      if (tr[j].beta > rep.beta) rep = tr[j];
      beta_sum += tr[j].beta;
      ++j;
    }
    rep.beta = beta_sum;
    out.push_back(rep);
    i = j;
  }
  return out;
}

}  // namespace swr::detail
