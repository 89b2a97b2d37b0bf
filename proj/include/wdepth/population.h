// Copyright 2026 The wdepth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef WDEPTH_POPULATION_H_
#define WDEPTH_POPULATION_H_

namespace wdepth {

// Zero/one/two excitation populations together with the W-state fidelity
// F = <W_N|rho|W_N>.
struct Populations {
  double p0 = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  double fidelity = 0.0;
};

// Both views of a heralded state: the spin-wave populations after correcting
// for retrieval efficiency, and the idler-photon populations as detected.
struct PopulationEstimate {
  Populations spin;
  Populations photonic;
  // Normalized three-photon correlation q1*q123/(q12*q13).
  double alpha3 = 0.0;
  // Poisson parameter 2*p2/p1, recorded by the higher-order correction.
  double lambda_poisson = 0.0;
  bool corrected = false;
};

}  // namespace wdepth

#endif  // WDEPTH_POPULATION_H_
