// Copyright 2026 The qfilter Authors
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

#pragma once

#include <array>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>

#include "qfilter/filter.hpp"

namespace qfilter::photonbox {

/// Atom-sector jumps: number of atoms and the states they collapsed to.
enum class AtomJump : std::size_t { No, G, E, GG, GE, EG, EE };
/// Cavity-sector jumps: no jump, L_+ ∝ a, L_- ∝ a†.
enum class CavityJump : std::size_t { O, Plus, Minus };
/// What the detector can report. Double detections do not order the atoms.
enum class Detection : std::size_t { No, G, E, GG, GE, EE };

inline constexpr std::size_t kAtomJumps = 7;
inline constexpr std::size_t kCavityJumps = 3;
inline constexpr std::size_t kDetections = 6;
inline constexpr std::size_t kCompositeJumps = kAtomJumps * kCavityJumps;

std::string_view label(AtomJump a);
std::string_view label(CavityJump c);
std::string_view label(Detection p);

/// Composite jumps are ordered atom-major: index = 3·atom + cavity.
constexpr std::size_t composite_index(AtomJump a, CavityJump c) {
  return static_cast<std::size_t>(a) * kCavityJumps + static_cast<std::size_t>(c);
}
/// "(ge,+)" style label.
std::string composite_label(AtomJump a, CavityJump c);

/// Experiment parameters. The defaults are desk-scale values for
/// simulation, not measured ones.
struct PhotonBoxParams {
  int n_max = 10;
  /// Probability of 0, 1 or 2 atoms interacting with the field.
  std::array<double, 3> atom_count{0.2, 0.7, 0.1};
  double detection_efficiency = 0.8;
  /// Probability of reading e for an atom in g.
  double eta_g = 0.1;
  /// Probability of reading g for an atom in e.
  double eta_e = 0.1;
  double epsilon = 1e-2;
  double n_th = 5e-2;
  double phi0 = std::numbers::pi / 5.0;
  double phi_r = std::numbers::pi / 4.0;

  /// Throws ParameterOutOfRange.
  void validate() const;
  Index dim() const noexcept { return n_max + 1; }
  bool operator==(const PhotonBoxParams&) const = default;
};

struct FockOperators {
  ComplexMatrix a;
  ComplexMatrix a_dagger;
  ComplexMatrix number;
};

/// Ladder and number operators on span{|0⟩, …, |n_max⟩}.
FockOperators fock_operators(int n_max);

/// exp(α a† − α* a) on the truncated space, through the eigendecomposition
/// of the Hermitian matrix i(α* a − α a†). Exactly unitary on the retained
/// space; warns when |α|² > n_max/4, where truncation distorts the action.
ComplexMatrix displacement(Complex alpha, int n_max);

/// D_β|0⟩ on the truncated space.
DensityOperator coherent_state(Complex beta, int n_max);

struct LOperators {
  std::array<ComplexMatrix, kAtomJumps> atom;
  std::array<ComplexMatrix, kCavityJumps> cavity;

  const ComplexMatrix& operator[](AtomJump a) const {
    return atom[static_cast<std::size_t>(a)];
  }
  const ComplexMatrix& operator[](CavityJump c) const {
    return cavity[static_cast<std::size_t>(c)];
  }
};

/// The atom-sector operators (diagonal in the Fock basis, functions of
/// φ_n = (φ₀(n + 1/2) + φ_R)/2) and the cavity decoherence operators.
LOperators l_operators(const PhotonBoxParams& params);

/// ‖Σ_a L_a†L_a − I‖_max over the seven atom jumps.
double atom_sector_deficit(const LOperators& ops);

struct CavityDeficit {
  /// ‖L_o†L_o + L_+†L_+ + L_-†L_- − I‖_max on levels 0 … n_max−1, where
  /// truncation does not touch a a†. Scales as ε².
  double below_truncation = 0.0;
  /// Same over the whole space, including the O(ε) corner at n_max.
  double full = 0.0;
};
CavityDeficit cavity_sector_deficit(const LOperators& ops);

/// The 21 operators L_{q^c} D_α L_{q^a}, atom-major, with "(q^a,q^c)"
/// labels. The completeness tolerance is the measured deficit of the
/// family (at least the full cavity-sector deficit).
KrausFamily composite_kraus(const PhotonBoxParams& params, Complex alpha);

/// 6 × 21 detector matrix; every cavity jump of a given atom jump shares
/// one column pattern.
ErrorModel table1_error_model(const PhotonBoxParams& params);

MeasurementStep make_step(const PhotonBoxParams& params, Complex alpha,
                          bool precompute_superoperators = true);

/// Builds steps per control value and caches them. Safe to call from
/// several threads.
class PhotonBoxModel {
 public:
  explicit PhotonBoxModel(PhotonBoxParams params);

  const PhotonBoxParams& params() const noexcept { return params_; }
  Index dim() const noexcept { return params_.dim(); }
  MeasurementStep step(Complex alpha) const;

 private:
  PhotonBoxParams params_;
  mutable std::mutex mutex_;
  mutable std::map<std::pair<double, double>, MeasurementStep> cache_;
};

}  // namespace qfilter::photonbox
