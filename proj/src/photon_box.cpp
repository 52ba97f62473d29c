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

#include "qfilter/photon_box.hpp"

#include <cmath>
#include <string>

#include "qfilter/log.hpp"

namespace qfilter::photonbox {

namespace {

void require_unit_interval(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw Error(ErrorKind::ParameterOutOfRange,
                std::string(name) + " = " + std::to_string(v) +
                    " is outside [0, 1]",
                v);
  }
}

ComplexMatrix diagonal(const RealVector& v) {
  return v.cast<Complex>().asDiagonal();
}

}  // namespace

std::string_view label(AtomJump a) {
  static constexpr std::array<std::string_view, kAtomJumps> names{
      "no", "g", "e", "gg", "ge", "eg", "ee"};
  return names[static_cast<std::size_t>(a)];
}

std::string_view label(CavityJump c) {
  static constexpr std::array<std::string_view, kCavityJumps> names{"o", "+", "-"};
  return names[static_cast<std::size_t>(c)];
}

std::string_view label(Detection p) {
  static constexpr std::array<std::string_view, kDetections> names{
      "no", "g", "e", "gg", "ge", "ee"};
  return names[static_cast<std::size_t>(p)];
}

std::string composite_label(AtomJump a, CavityJump c) {
  return "(" + std::string(label(a)) + "," + std::string(label(c)) + ")";
}

void PhotonBoxParams::validate() const {
  if (n_max < 1) {
    throw Error(ErrorKind::ParameterOutOfRange, "n_max must be at least 1",
                n_max);
  }
  require_unit_interval(atom_count[0], "P_a(0)");
  require_unit_interval(atom_count[1], "P_a(1)");
  require_unit_interval(atom_count[2], "P_a(2)");
  const double total = atom_count[0] + atom_count[1] + atom_count[2];
  if (std::abs(total - 1.0) > 1e-12) {
    throw Error(ErrorKind::ParameterOutOfRange,
                "atom-count probabilities sum to " + std::to_string(total),
                total - 1.0);
  }
  require_unit_interval(detection_efficiency, "detection efficiency");
  require_unit_interval(eta_g, "eta_g");
  require_unit_interval(eta_e, "eta_e");
  if (!(epsilon > 0.0) || !(n_th > 0.0) || !std::isfinite(epsilon) ||
      !std::isfinite(n_th)) {
    throw Error(ErrorKind::ParameterOutOfRange,
                "epsilon and n_th must be positive and finite");
  }
  if (!std::isfinite(phi0) || !std::isfinite(phi_r)) {
    throw Error(ErrorKind::ParameterOutOfRange, "phases must be finite");
  }
}

FockOperators fock_operators(int n_max) {
  if (n_max < 1) {
    throw Error(ErrorKind::ParameterOutOfRange, "n_max must be at least 1",
                n_max);
  }
  const Index d = n_max + 1;
  ComplexMatrix a = ComplexMatrix::Zero(d, d);
  for (Index n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  ComplexMatrix number = ComplexMatrix::Zero(d, d);
  for (Index n = 0; n < d; ++n) number(n, n) = static_cast<double>(n);
  ComplexMatrix a_dagger = a.adjoint();
  return {std::move(a), std::move(a_dagger), std::move(number)};
}

ComplexMatrix displacement(Complex alpha, int n_max) {
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) {
    throw Error(ErrorKind::ParameterOutOfRange, "alpha must be finite");
  }
  if (std::norm(alpha) > n_max / 4.0) {
    warn("|alpha|^2 = " + std::to_string(std::norm(alpha)) +
         " exceeds n_max/4; the truncated displacement is inaccurate");
  }
  const FockOperators f = fock_operators(n_max);
  // α a† − α* a = i·H with H Hermitian.
  const ComplexMatrix h =
      hermitian_part(Complex(0.0, -1.0) * (alpha * f.a_dagger - std::conj(alpha) * f.a));
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  const ComplexVector phases =
      (Complex(0.0, 1.0) * es.eigenvalues().cast<Complex>()).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

DensityOperator coherent_state(Complex beta, int n_max) {
  const ComplexMatrix d = displacement(beta, n_max);
  return DensityOperator::pure(d.col(0));
}

LOperators l_operators(const PhotonBoxParams& params) {
  params.validate();
  const Index d = params.dim();
  RealVector c(d);
  RealVector s(d);
  for (Index n = 0; n < d; ++n) {
    const double phi =
        (params.phi0 * (static_cast<double>(n) + 0.5) + params.phi_r) / 2.0;
    c(n) = std::cos(phi);
    s(n) = std::sin(phi);
  }
  const double p0 = std::sqrt(params.atom_count[0]);
  const double p1 = std::sqrt(params.atom_count[1]);
  const double p2 = std::sqrt(params.atom_count[2]);

  LOperators ops;
  auto set_atom = [&](AtomJump a, const RealVector& v) {
    ops.atom[static_cast<std::size_t>(a)] = diagonal(v);
  };
  set_atom(AtomJump::No, RealVector::Constant(d, p0));
  set_atom(AtomJump::G, p1 * c);
  set_atom(AtomJump::E, p1 * s);
  set_atom(AtomJump::GG, p2 * c.cwiseProduct(c));
  set_atom(AtomJump::GE, p2 * c.cwiseProduct(s));
  set_atom(AtomJump::EG, p2 * c.cwiseProduct(s));
  set_atom(AtomJump::EE, p2 * s.cwiseProduct(s));

  const FockOperators f = fock_operators(params.n_max);
  const double eps = params.epsilon;
  const double nth = params.n_th;
  ops.cavity[static_cast<std::size_t>(CavityJump::O)] =
      ComplexMatrix::Identity(d, d) - (eps * (1.0 + 2.0 * nth) / 2.0) * f.number -
      (eps * nth / 2.0) * ComplexMatrix::Identity(d, d);
  ops.cavity[static_cast<std::size_t>(CavityJump::Plus)] =
      std::sqrt(eps * (1.0 + nth)) * f.a;
  ops.cavity[static_cast<std::size_t>(CavityJump::Minus)] =
      std::sqrt(eps * nth) * f.a_dagger;
  return ops;
}

double atom_sector_deficit(const LOperators& ops) {
  const Index d = ops.atom.front().rows();
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (const ComplexMatrix& l : ops.atom) sum += l.adjoint() * l;
  return max_abs(ComplexMatrix(sum - ComplexMatrix::Identity(d, d)));
}

CavityDeficit cavity_sector_deficit(const LOperators& ops) {
  const Index d = ops.cavity.front().rows();
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (const ComplexMatrix& l : ops.cavity) sum += l.adjoint() * l;
  const ComplexMatrix excess = sum - ComplexMatrix::Identity(d, d);
  return {max_abs(ComplexMatrix(excess.topLeftCorner(d - 1, d - 1))),
          max_abs(excess)};
}

KrausFamily composite_kraus(const PhotonBoxParams& params, Complex alpha) {
  const LOperators ops = l_operators(params);
  const ComplexMatrix disp = displacement(alpha, params.n_max);
  const Index d = params.dim();
  std::vector<ComplexMatrix> kraus;
  std::vector<std::string> labels;
  kraus.reserve(kCompositeJumps);
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (std::size_t a = 0; a < kAtomJumps; ++a) {
    const ComplexMatrix shifted = disp * ops.atom[a];
    for (std::size_t c = 0; c < kCavityJumps; ++c) {
      kraus.push_back(ops.cavity[c] * shifted);
      labels.push_back(
          composite_label(static_cast<AtomJump>(a), static_cast<CavityJump>(c)));
      sum += kraus.back().adjoint() * kraus.back();
    }
  }
  const double measured = max_abs(ComplexMatrix(sum - ComplexMatrix::Identity(d, d)));
  const double tolerance =
      std::max(measured, cavity_sector_deficit(ops).full) + 1e-12;
  return KrausFamily(std::move(kraus), tolerance, std::move(labels));
}

ErrorModel table1_error_model(const PhotonBoxParams& params) {
  const double ed = params.detection_efficiency;
  const double eg = params.eta_g;
  const double ee = params.eta_e;
  require_unit_interval(ed, "detection efficiency");
  require_unit_interval(eg, "eta_g");
  require_unit_interval(ee, "eta_e");
  const double miss = 1.0 - ed;
  const double one_of_two = 2.0 * ed * miss;

  using Column = std::array<double, kDetections>;
  std::array<Column, kAtomJumps> by_atom{};
  by_atom[static_cast<std::size_t>(AtomJump::No)] = {1, 0, 0, 0, 0, 0};
  by_atom[static_cast<std::size_t>(AtomJump::G)] = {miss, ed * (1 - eg), ed * eg, 0, 0, 0};
  by_atom[static_cast<std::size_t>(AtomJump::E)] = {miss, ed * ee, ed * (1 - ee), 0, 0, 0};
  by_atom[static_cast<std::size_t>(AtomJump::GG)] = {
      miss * miss,          one_of_two * (1 - eg),        one_of_two * eg,
      ed * ed * (1 - eg) * (1 - eg), 2 * ed * ed * eg * (1 - eg), ed * ed * eg * eg};
  by_atom[static_cast<std::size_t>(AtomJump::EE)] = {
      miss * miss,     one_of_two * ee,              one_of_two * (1 - ee),
      ed * ed * ee * ee, 2 * ed * ed * ee * (1 - ee), ed * ed * (1 - ee) * (1 - ee)};
  const Column mixed = {miss * miss,
                        ed * miss * (1 - eg + ee),
                        ed * miss * (1 - ee + eg),
                        ed * ed * ee * (1 - eg),
                        ed * ed * ((1 - eg) * (1 - ee) + eg * ee),
                        ed * ed * eg * (1 - ee)};
  by_atom[static_cast<std::size_t>(AtomJump::GE)] = mixed;
  by_atom[static_cast<std::size_t>(AtomJump::EG)] = mixed;

  RealMatrix eta(kDetections, kCompositeJumps);
  for (std::size_t a = 0; a < kAtomJumps; ++a) {
    for (std::size_t c = 0; c < kCavityJumps; ++c) {
      const auto q = static_cast<Index>(
          composite_index(static_cast<AtomJump>(a), static_cast<CavityJump>(c)));
      for (std::size_t p = 0; p < kDetections; ++p) {
        eta(static_cast<Index>(p), q) = by_atom[a][p];
      }
    }
  }
  return ErrorModel::validate(eta);
}

MeasurementStep make_step(const PhotonBoxParams& params, Complex alpha,
                          bool precompute_superoperators) {
  MeasurementStep::Options options;
  options.precompute_superoperators = precompute_superoperators;
  return MeasurementStep(composite_kraus(params, alpha), table1_error_model(params),
                         "photon-box alpha=(" + std::to_string(alpha.real()) +
                             "," + std::to_string(alpha.imag()) + ")",
                         options);
}

PhotonBoxModel::PhotonBoxModel(PhotonBoxParams params) : params_(params) {
  params_.validate();
}

MeasurementStep PhotonBoxModel::step(Complex alpha) const {
  const std::pair<double, double> key{alpha.real(), alpha.imag()};
  std::lock_guard lock(mutex_);
  auto it = cache_.find(key);
  if (it == cache_.end()) {
    it = cache_.emplace(key, make_step(params_, alpha)).first;
  }
  return it->second;
}

}  // namespace qfilter::photonbox
