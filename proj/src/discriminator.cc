// Copyright 2026 The hinand Authors.
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

#include "hinand/discriminator.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "hinand/rng.h"

namespace hinand {
namespace {

// Forward pass keeping activations for backprop.
struct Forward {
  std::vector<double> input;   // [u; v]
  std::vector<double> hidden;  // tanh(W0^T x + b0)
  std::vector<double> output;  // d
};

Forward Run(const DiscriminatorParams& params, std::span<const double> content,
            std::span<const double> relation) {
  const size_t in = params.input_dim();
  const size_t h = params.hidden_dim();
  const size_t out = params.output_dim();
  if (content.size() + relation.size() != in || content.size() != relation.size()) {
    throw std::invalid_argument("discriminator input has length " +
                                std::to_string(content.size()) + "+" +
                                std::to_string(relation.size()) + ", expected " +
                                std::to_string(in));
  }
  Forward f;
  f.input.reserve(in);
  f.input.insert(f.input.end(), content.begin(), content.end());
  f.input.insert(f.input.end(), relation.begin(), relation.end());
  f.hidden = params.b0;
  for (size_t i = 0; i < in; ++i) {
    const double x = f.input[i];
    if (x == 0.0) continue;
    Axpy(x, params.w0.row(i), f.hidden);
  }
  for (double& a : f.hidden) a = std::tanh(a);
  f.output = params.b1;
  for (size_t j = 0; j < h; ++j) Axpy(f.hidden[j], params.w1.row(j), f.output);
  for (size_t o = 0; o < out; ++o) f.output[o] = std::tanh(f.output[o]);
  return f;
}

// Adds the contribution of dJ/dd = grad_out to `grad`.
void Backward(const DiscriminatorParams& params, const Forward& f,
              std::span<const double> grad_out, DiscriminatorParams& grad) {
  const size_t in = params.input_dim();
  const size_t h = params.hidden_dim();
  const size_t out = params.output_dim();
  std::vector<double> gz1(out);
  for (size_t o = 0; o < out; ++o) {
    gz1[o] = grad_out[o] * (1.0 - f.output[o] * f.output[o]);
    grad.b1[o] += gz1[o];
  }
  std::vector<double> gz0(h);
  for (size_t j = 0; j < h; ++j) {
    Axpy(f.hidden[j], gz1, grad.w1.row(j));
    gz0[j] = Dot(params.w1.row(j), gz1) * (1.0 - f.hidden[j] * f.hidden[j]);
    grad.b0[j] += gz0[j];
  }
  for (size_t i = 0; i < in; ++i) {
    if (f.input[i] == 0.0) continue;
    Axpy(f.input[i], gz0, grad.w0.row(i));
  }
}

void ReadSectionHeader(std::istream& in, const std::string& name, size_t& rows,
                       size_t& cols, bool matrix) {
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("checkpoint: missing section " + name);
  }
  std::istringstream header(line);
  std::string label;
  long long r = -1, c = 1;
  header >> label >> r;
  if (matrix) header >> c;
  std::string extra;
  if (!header || label != name || r < 1 || c < 1 || (header >> extra)) {
    throw std::runtime_error("checkpoint: bad section header \"" + line +
                             "\", expected " + name);
  }
  rows = static_cast<size_t>(r);
  cols = static_cast<size_t>(c);
}

std::vector<double> ReadRow(std::istream& in, size_t width, const std::string& name) {
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("checkpoint: truncated section " + name);
  }
  std::istringstream row(line);
  std::vector<double> values;
  std::string token;
  while (row >> token) values.push_back(ParseDouble(token));
  if (values.size() != width) {
    throw std::runtime_error("checkpoint: section " + name + " row has " +
                             std::to_string(values.size()) + " values, expected " +
                             std::to_string(width));
  }
  return values;
}

void WriteRow(std::ostream& out, std::span<const double> values) {
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) out << ' ';
    out << FormatDouble(values[i]);
  }
  out << '\n';
}

}  // namespace

PaperFeatures GatherFeatures(const NameBlock& block, const EmbeddingTable& content,
                             const EmbeddingTable& relation) {
  if (content.dim() != relation.dim()) {
    throw std::invalid_argument("content and relation dimensions differ (" +
                                std::to_string(content.dim()) + " vs " +
                                std::to_string(relation.dim()) + ")");
  }
  PaperFeatures f;
  f.content = Matrix(0, content.dim());
  f.relation = Matrix(0, relation.dim());
  for (const auto& p : block.papers) {
    f.ids.push_back(p.id);
    f.content.AppendRow(NormalizedOrZero(content.at(p.id)));
    f.relation.AppendRow(NormalizedOrZero(relation.at(PaperNodeId(p.id))));
  }
  return f;
}

DiscriminatorParams DiscriminatorParams::Zeros(size_t k, size_t hidden,
                                               size_t output) {
  if (k < 1 || hidden < 1 || output < 1) {
    throw std::invalid_argument("discriminator dimensions must be >= 1");
  }
  DiscriminatorParams p;
  p.w0 = Matrix(2 * k, hidden);
  p.b0.assign(hidden, 0.0);
  p.w1 = Matrix(hidden, output);
  p.b1.assign(output, 0.0);
  return p;
}

DiscriminatorParams DiscriminatorParams::Init(size_t k, size_t hidden,
                                              size_t output, uint64_t seed) {
  DiscriminatorParams p = Zeros(k, hidden, output);
  Rng rng(seed);
  const double r0 = 1.0 / std::sqrt(static_cast<double>(2 * k));
  for (double& w : p.w0.data()) w = rng.Uniform(-r0, r0);
  const double r1 = 1.0 / std::sqrt(static_cast<double>(hidden));
  for (double& w : p.w1.data()) w = rng.Uniform(-r1, r1);
  return p;
}

bool DiscriminatorParams::AllFinite() const {
  auto finite = [](std::span<const double> xs) {
    return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
  };
  return w0.AllFinite() && w1.AllFinite() && finite(b0) && finite(b1);
}

void DiscriminatorParams::Write(std::ostream& out) const {
  out << "W0 " << w0.rows() << ' ' << w0.cols() << '\n';
  for (size_t r = 0; r < w0.rows(); ++r) WriteRow(out, w0.row(r));
  out << "b0 " << b0.size() << '\n';
  WriteRow(out, b0);
  out << "W1 " << w1.rows() << ' ' << w1.cols() << '\n';
  for (size_t r = 0; r < w1.rows(); ++r) WriteRow(out, w1.row(r));
  out << "b1 " << b1.size() << '\n';
  WriteRow(out, b1);
}

DiscriminatorParams DiscriminatorParams::Read(std::istream& in) {
  DiscriminatorParams p;
  size_t rows = 0, cols = 0;
  ReadSectionHeader(in, "W0", rows, cols, true);
  p.w0 = Matrix(0, cols);
  for (size_t r = 0; r < rows; ++r) p.w0.AppendRow(ReadRow(in, cols, "W0"));
  ReadSectionHeader(in, "b0", rows, cols, false);
  p.b0 = ReadRow(in, rows, "b0");
  ReadSectionHeader(in, "W1", rows, cols, true);
  p.w1 = Matrix(0, cols);
  for (size_t r = 0; r < rows; ++r) p.w1.AppendRow(ReadRow(in, cols, "W1"));
  ReadSectionHeader(in, "b1", rows, cols, false);
  p.b1 = ReadRow(in, rows, "b1");
  if (p.w0.rows() % 2 != 0 || p.b0.size() != p.w0.cols() ||
      p.w1.rows() != p.w0.cols() || p.b1.size() != p.w1.cols()) {
    throw std::runtime_error("checkpoint: inconsistent section shapes");
  }
  if (!p.AllFinite()) throw std::runtime_error("checkpoint: non-finite weight");
  return p;
}

void DiscriminatorParams::WriteFile(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  Write(out);
}

DiscriminatorParams DiscriminatorParams::ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return Read(in);
}

std::vector<double> EmbedD(const DiscriminatorParams& params,
                           std::span<const double> content,
                           std::span<const double> relation) {
  return Run(params, content, relation).output;
}

Matrix EmbedAll(const DiscriminatorParams& params, const PaperFeatures& features) {
  Matrix d(features.size(), params.output_dim());
  for (size_t i = 0; i < features.size(); ++i) {
    auto row = EmbedD(params, features.content.row(i), features.relation.row(i));
    std::copy(row.begin(), row.end(), d.row(i).begin());
  }
  return d;
}

double Score(std::span<const double> d_p, std::span<const double> d_q) {
  if (d_p.size() != d_q.size()) {
    throw std::invalid_argument("score: vectors differ in length");
  }
  return Sigmoid(Dot(d_p, d_q));
}

std::vector<LabeledPair> SelectPseudoPositives(const DiscriminatorParams& params,
                                               const PaperFeatures& features,
                                               size_t top_k) {
  const size_t n = features.size();
  std::vector<LabeledPair> out;
  if (n < 2 || top_k == 0) return out;
  const Matrix d = EmbedAll(params, features);
  std::vector<std::pair<double, size_t>> ranked;
  for (size_t anchor = 0; anchor < n; ++anchor) {
    ranked.clear();
    for (size_t p = 0; p < n; ++p) {
      if (p != anchor) ranked.emplace_back(Score(d.row(p), d.row(anchor)), p);
    }
    const size_t take = std::min(top_k, ranked.size());
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(take),
                      ranked.end(), [&](const auto& a, const auto& b) {
                        if (a.first != b.first) return a.first > b.first;
                        return features.ids[a.second] < features.ids[b.second];
                      });
    for (size_t r = 0; r < take; ++r) out.push_back({ranked[r].second, anchor, 1});
  }
  return out;
}

namespace {

// Distinct papers in the batch with their forward passes.
std::map<size_t, Forward> ForwardBatch(const DiscriminatorParams& params,
                                       std::span<const LabeledPair> batch,
                                       const PaperFeatures& features) {
  std::map<size_t, Forward> cache;
  for (const auto& pair : batch) {
    for (size_t idx : {pair.paper, pair.anchor}) {
      if (idx >= features.size()) {
        throw std::out_of_range("pair references unknown paper " + std::to_string(idx));
      }
      if (!cache.contains(idx)) {
        cache.emplace(idx, Run(params, features.content.row(idx),
                               features.relation.row(idx)));
      }
    }
  }
  return cache;
}

}  // namespace

double DiscriminatorObjective(const DiscriminatorParams& params,
                              std::span<const LabeledPair> batch,
                              const PaperFeatures& features) {
  const auto cache = ForwardBatch(params, batch, features);
  double total = 0.0;
  for (const auto& pair : batch) {
    const double s = Dot(cache.at(pair.paper).output, cache.at(pair.anchor).output);
    total += pair.label ? -Softplus(-s) : -Softplus(s);
  }
  return total;
}

DiscriminatorParams DiscriminatorGradient(const DiscriminatorParams& params,
                                          std::span<const LabeledPair> batch,
                                          const PaperFeatures& features) {
  const auto cache = ForwardBatch(params, batch, features);
  const size_t out = params.output_dim();
  std::map<size_t, std::vector<double>> grad_d;
  for (const auto& [idx, f] : cache) grad_d.emplace(idx, std::vector<double>(out, 0.0));
  for (const auto& pair : batch) {
    const auto& dp = cache.at(pair.paper).output;
    const auto& dq = cache.at(pair.anchor).output;
    const double coeff = static_cast<double>(pair.label) - Sigmoid(Dot(dp, dq));
    Axpy(coeff, dq, grad_d.at(pair.paper));
    Axpy(coeff, dp, grad_d.at(pair.anchor));
  }
  DiscriminatorParams grad = DiscriminatorParams::Zeros(
      params.input_dim() / 2, params.hidden_dim(), params.output_dim());
  for (const auto& [idx, f] : cache) Backward(params, f, grad_d.at(idx), grad);
  return grad;
}

DiscriminatorParams UpdateD(const DiscriminatorParams& params,
                            std::span<const LabeledPair> batch,
                            const PaperFeatures& features, double lr) {
  if (batch.empty()) throw std::invalid_argument("empty discriminator batch");
  const DiscriminatorParams grad = DiscriminatorGradient(params, batch, features);
  if (!grad.AllFinite()) {
    throw std::runtime_error("non-finite discriminator gradient");
  }
  DiscriminatorParams next = params;
  Axpy(lr, grad.w0.data(), next.w0.data());
  Axpy(lr, grad.b0, next.b0);
  Axpy(lr, grad.w1.data(), next.w1.data());
  Axpy(lr, grad.b1, next.b1);
  return next;
}

}  // namespace hinand
