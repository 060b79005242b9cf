#pragma once

// Cartan characters of a quasi-linear Pfaffian system, checked against the
// dimension of its space of integral elements.

#include <vector>

#include "ljet/tensor_core.hpp"

namespace ljet {

struct CartanReport {
  int n = 0;             // hypersurface dimension + 1 (0 for a generic tableau)
  std::vector<int> s;    // characters s_1 .. s_p
  int Q = 0;             // sum k s_k
  int N = 0;             // dimension of the integral-element space
  bool involutive = false;
};

// Generic entry point.  Each 2-form is a skew matrix on R^{p + q}: the first
// p coordinates are the independent 1-forms, the last q the unknown forms pi.
// No pi ^ pi terms are allowed.  Characters come from rank increments of the
// polar equations along a random flag (fixed seed); a borderline pivot
// redraws the flag.
CartanReport tableau_characters(const std::vector<Matrix>& two_forms, int p, int q,
                                unsigned seed = 1);

// System omega^n = 0, omega_a^n = lambda_ab omega^b: one 2-form
// sum_a omega^a ^ omega_a^n on m = n - 2 independent forms.
CartanReport characters(int n, unsigned seed = 1);

}  // namespace ljet
