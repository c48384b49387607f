// Copyright 2026 The rhist Authors
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

// Reference values computed without the library: closed forms, hand-rolled
// dense arithmetic on the full tensor-product space, and frozen numbers from
// an independent numpy prototype.

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace oracle {

using cd = std::complex<double>;

// ---- frozen values -------------------------------------------------------------

// Three boxes, H = 0, Ψ = (1,1,1)/√3, Φ = (1,1,−1)/√3.
// P_Φ P_A Ψ = ⟨Φ|A⟩⟨A|Ψ⟩ Φ = Φ/3, P_Φ P_Ā Ψ = P_Φ (0,1,1)/√3 = 0.
inline constexpr double kThreeBoxPAPhi = 1.0 / 9.0;
inline constexpr double kThreeBoxPNotAPhi = 0.0;
inline constexpr double kThreeBoxPANotPhi = 2.0 / 9.0;
inline constexpr double kThreeBoxPNotANotPhi = 6.0 / 9.0;
// Fine set, history (B̄,A,Φ) vs (B,Ā,Φ): ⟨Φ/3 | P_Φ P_Ā P_B Ψ⟩ = ⟨Φ/3|Φ/3⟩ = 1/9.
inline constexpr double kThreeBoxFineOffDiagonal = 1.0 / 9.0;

// Qubit trine: ⟨0|b⁺⟩⟨b⁺|a⁺⟩⟨a⁺|0⟩ = cos(2π/3)·cos(π/3)·cos(π/3).
inline constexpr double kTrineEp = -0.125;

// Lattice two-slit, m = 64, slits 24/40, σ = 1, T = 16 (numpy prototype).
inline constexpr double kTwoSlitMinEp = -0.004289058472520277;
inline constexpr double kTwoSlitRatio = 39.198573944394525;

// Imaginary overlap at c = 0.1: D off-diagonal = i·c; largest correlation
// off-diagonal (1 − √(1 − 16c²))/8 from the numpy prototype.
inline constexpr double kImaginaryOverlapR = 0.010435607626104001;

// ---- dense helpers ---------------------------------------------------------------

struct Dense {
  std::size_t n = 0;
  std::vector<cd> a;
  explicit Dense(std::size_t n_) : n(n_), a(n_ * n_) {}
  cd& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
  cd operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

inline Dense identity(std::size_t n) {
  Dense d(n);
  for (std::size_t i = 0; i < n; ++i) d(i, i) = 1.0;
  return d;
}

inline Dense kron(const Dense& x, const Dense& y) {
  Dense d(x.n * y.n);
  for (std::size_t i = 0; i < x.n; ++i)
    for (std::size_t j = 0; j < x.n; ++j)
      for (std::size_t k = 0; k < y.n; ++k)
        for (std::size_t l = 0; l < y.n; ++l) d(i * y.n + k, j * y.n + l) = x(i, j) * y(k, l);
  return d;
}

inline std::vector<cd> kron(const std::vector<cd>& x, const std::vector<cd>& y) {
  std::vector<cd> out;
  for (cd p : x)
    for (cd q : y) out.push_back(p * q);
  return out;
}

inline std::vector<cd> apply(const Dense& m, const std::vector<cd>& v) {
  std::vector<cd> out(m.n);
  for (std::size_t i = 0; i < m.n; ++i)
    for (std::size_t j = 0; j < m.n; ++j) out[i] += m(i, j) * v[j];
  return out;
}

inline cd inner(const std::vector<cd>& x, const std::vector<cd>& y) {
  cd s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
  return s;
}

inline Dense outer(const std::vector<cd>& x, const std::vector<cd>& y) {
  Dense d(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) d(i, j) = x[i] * std::conj(y[j]);
  return d;
}

// ---- spin environment on the full 2^{N+1} space -----------------------------------

/// D and ℛ of the system-plus-environment model built from explicit qubit
/// tensor products. Histories (s, a): system z value s before the coupling,
/// system x value a after it; flat index 2s + a. Records (system x) ⊗
/// (optimal discrimination of the two environment states).
struct SpinEnvOracle {
  std::vector<std::vector<cd>> d;  // 4 x 4
  std::vector<std::vector<double>> r;
};

inline SpinEnvOracle spin_env_bruteforce(std::size_t n, double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  std::vector<cd> e0{1.0}, e1{1.0};
  for (std::size_t k = 0; k < n; ++k) {
    e0 = kron(e0, std::vector<cd>{1.0, 0.0});
    e1 = kron(e1, std::vector<cd>{c, s});
  }
  const std::size_t ne = e0.size();
  const std::vector<cd> up{1.0, 0.0}, down{0.0, 1.0};
  const double h = 1.0 / std::sqrt(2.0);
  const std::vector<cd> plus{h, h}, minus{h, -h};
  // After the coupling, branch s carries |s⟩⊗E_s with amplitude 1/√2.
  std::vector<cd> branch_state[2] = {kron(up, e0), kron(down, e1)};
  for (auto& v : branch_state)
    for (auto& x : v) x *= h;
  std::vector<cd> full(branch_state[0].size());
  for (std::size_t i = 0; i < full.size(); ++i) full[i] = branch_state[0][i] + branch_state[1][i];

  Dense px[2] = {kron(outer(plus, plus), identity(ne)), kron(outer(minus, minus), identity(ne))};

  // Environment discrimination projector onto f0 = (g + h)/√2.
  cd ov = inner(e0, e1);
  double ovr = std::abs(ov);
  std::vector<cd> e1p = e1;
  if (ovr > 0)
    for (auto& x : e1p) x *= std::conj(ov) / ovr;
  Dense pi0(ne);
  if (1.0 - ovr < 1e-12) {
    pi0 = outer(e0, e0);
  } else {
    std::vector<cd> f0(ne);
    for (std::size_t i = 0; i < ne; ++i) {
      cd g = (e0[i] + e1p[i]) / std::sqrt(2 * (1 + ovr));
      cd hh = (e0[i] - e1p[i]) / std::sqrt(2 * (1 - ovr));
      f0[i] = (g + hh) / std::sqrt(2.0);
    }
    pi0 = outer(f0, f0);
  }
  Dense pi1 = identity(ne);
  for (std::size_t i = 0; i < pi1.a.size(); ++i) pi1.a[i] -= pi0.a[i];
  const Dense* pis[2] = {&pi0, &pi1};

  SpinEnvOracle o;
  o.d.assign(4, std::vector<cd>(4));
  o.r.assign(4, std::vector<double>(4));
  for (std::size_t s1 = 0; s1 < 2; ++s1)
    for (std::size_t a1 = 0; a1 < 2; ++a1)
      for (std::size_t s2 = 0; s2 < 2; ++s2)
        for (std::size_t a2 = 0; a2 < 2; ++a2) {
          auto v1 = oracle::apply(px[a1], branch_state[s1]);
          auto v2 = oracle::apply(px[a2], branch_state[s2]);
          o.d[2 * s1 + a1][2 * s2 + a2] = inner(v1, v2);
          // ℛ((s1,a1),(s2,a2)) = Re⟨Ψ(1)|(P_{a1} ⊗ Π_{s1}) P_{a2} |s2,E_{s2}⟩/√2
          Dense rec = kron(a1 == 0 ? outer(plus, plus) : outer(minus, minus), *pis[s1]);
          auto w = oracle::apply(rec, v2);
          o.r[2 * s1 + a1][2 * s2 + a2] = inner(full, w).real();
        }
  return o;
}

inline double spin_env_max_offdiag(const std::vector<std::vector<cd>>& d) {
  double m = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = 0; j < d.size(); ++j)
      if (i != j) m = std::max(m, std::abs(d[i][j]));
  return m;
}

}  // namespace oracle
