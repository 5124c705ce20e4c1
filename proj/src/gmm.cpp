// genuin/gmm.cpp

// Copyright 2026  The genuin authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "genuin/gmm.hpp"

#include <fstream>
#include <sstream>

#include "io_util.hpp"

namespace genuin {

double ScoreTrial(const Gmm &genuine, const Gmm &spoof, const FeatureMatrix &x) {
  return GmmLogLikelihood(genuine, x.frames) - GmmLogLikelihood(spoof, x.frames);
}

void ValidateGmm(const Gmm &m) {
  const Eigen::Index k = m.num_components();
  if (k < 1) throw Error(ErrorKind::kInput, "GMM has no components");
  if (m.means.rows() != k || m.variances.rows() != k || m.variances.cols() != m.means.cols())
    throw Error(ErrorKind::kInput, "GMM parameter shapes disagree");
  if ((m.weights.array() < 0.0).any() || std::abs(m.weights.sum() - 1.0) > 1e-9)
    throw Error(ErrorKind::kInput, "GMM weights must be non-negative and sum to 1");
  if (!(m.variances.array() > 0.0).all() || !m.means.allFinite())
    throw Error(ErrorKind::kInput, "GMM variances must be positive and means finite");
}

void WriteGmm(const std::filesystem::path &path, const Gmm &m) {
  ValidateGmm(m);
  for (const std::string *tok : {&m.provenance, &m.fingerprint})
    if (tok->empty() || tok->find_first_of(" \n\t") != std::string::npos)
      throw Error(ErrorKind::kFormat, "GMM header tokens must be non-empty without spaces");
  std::ostringstream os;
  os << "GGMM1 " << m.num_components() << ' ' << m.dim() << ' ' << m.provenance << ' '
     << m.fingerprint << '\n';
  for (Eigen::Index k = 0; k < m.num_components(); ++k) detail::PutLe64(os, m.weights(k));
  for (Eigen::Index k = 0; k < m.num_components(); ++k)
    for (Eigen::Index f = 0; f < m.dim(); ++f) detail::PutLe64(os, m.means(k, f));
  for (Eigen::Index k = 0; k < m.num_components(); ++k)
    for (Eigen::Index f = 0; f < m.dim(); ++f) detail::PutLe64(os, m.variances(k, f));
  detail::AtomicWrite(path, os.str());
}

Gmm ReadGmm(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  std::string header;
  if (!std::getline(in, header)) throw Error(ErrorKind::kIo, path.string() + ": empty file");
  std::istringstream hs(header);
  std::string magic;
  long long k = 0, dim = 0;
  Gmm m;
  hs >> magic >> k >> dim >> m.provenance >> m.fingerprint;
  if (magic != "GGMM1" || !hs || k < 1 || dim < 1)
    throw Error(ErrorKind::kFormat, path.string() + ": bad GMM header");
  m.weights.resize(k);
  m.means.resize(k, dim);
  m.variances.resize(k, dim);
  for (Eigen::Index i = 0; i < k; ++i) m.weights(i) = detail::GetLe64(in);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index f = 0; f < dim; ++f) m.means(i, f) = detail::GetLe64(in);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index f = 0; f < dim; ++f) m.variances(i, f) = detail::GetLe64(in);
  ValidateGmm(m);
  return m;
}

}  // namespace genuin
