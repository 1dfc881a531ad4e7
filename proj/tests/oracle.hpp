// Copyright 2026 The cqpt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Reference Hamiltonians assembled from Pauli and ladder operators with
// Kronecker products, independent of the library's matrix rows.

#ifndef CQPT_TESTS_ORACLE_HPP
#define CQPT_TESTS_ORACLE_HPP

#include <bit>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Mat = Eigen::MatrixXd;

inline Mat eye(int d) { return Mat::Identity(d, d); }

inline Mat kron(const Mat& a, const Mat& b) {
  Mat r(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return r;
}

// Basis index = bit pattern, bit i = site i. Site 0 is the least
// significant factor, so it is the rightmost in the Kronecker chain.
inline Mat site_op(int n, int site, const Mat& op) {
  Mat r = eye(1);
  for (int s = n - 1; s >= 0; --s) r = kron(r, s == site ? op : eye(2));
  return r;
}

inline Mat sx() { Mat m(2, 2); m << 0, 1, 1, 0; return m; }
inline Mat sz() { Mat m(2, 2); m << -1, 0, 0, 1; return m; }  // |1> = up = +1
inline Mat nop() { Mat m(2, 2); m << 0, 0, 0, 1; return m; }
inline Mat lower() { Mat m(2, 2); m << 0, 1, 0, 0; return m; }  // |1> -> |0>
inline Mat parity() { Mat m(2, 2); m << 1, 0, 0, -1; return m; }  // (-1)^n

// Jordan-Wigner annihilator with the string on sites below `site`.
inline Mat fermion_c(int n, int site) {
  Mat r = site_op(n, site, lower());
  for (int s = 0; s < site; ++s) r = site_op(n, s, parity()) * r;
  return r;
}

inline Mat boson_b(int n, int site) { return site_op(n, site, lower()); }

inline std::vector<std::pair<int, int>> bonds(int n, bool periodic) {
  std::vector<std::pair<int, int>> b;
  for (int i = 0; i + 1 < n; ++i) b.emplace_back(i, i + 1);
  if (periodic && n >= 3) b.emplace_back(n - 1, 0);
  return b;
}

inline Mat hopping(int n, bool periodic, bool fermion) {
  Mat h = Mat::Zero(1 << n, 1 << n);
  for (auto [i, j] : bonds(n, periodic)) {
    const Mat ci = fermion ? fermion_c(n, i) : boson_b(n, i);
    const Mat cj = fermion ? fermion_c(n, j) : boson_b(n, j);
    h -= ci.transpose() * cj + cj.transpose() * ci;
  }
  return h;
}

inline Mat transverse(int n) {
  Mat h = Mat::Zero(1 << n, 1 << n);
  for (int i = 0; i < n; ++i) h -= site_op(n, i, sx());
  return h;
}

// Rows/columns of the given particle number.
inline Mat restrict_particles(const Mat& h, int np) {
  std::vector<int> idx;
  for (int b = 0; b < h.rows(); ++b)
    if (std::popcount(static_cast<unsigned>(b)) == np) idx.push_back(b);
  Mat r(idx.size(), idx.size());
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = 0; b < idx.size(); ++b) r(a, b) = h(idx[a], idx[b]);
  return r;
}

inline Eigen::VectorXd spectrum(const Mat& h) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

}  // namespace oracle

#endif  // CQPT_TESTS_ORACLE_HPP
