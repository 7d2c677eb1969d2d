#include "ncck/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace ncck {

void realify(const CMatrix& m, std::span<double> out) {
  const auto k = static_cast<std::size_t>(m.rows());
  const std::size_t w = 2 * k;
  if (out.size() < w * w) throw DimensionError("realify buffer too small");
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      const Complex z = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      out[i * w + j] = z.real();
      out[i * w + k + j] = -z.imag();
      out[(k + i) * w + j] = z.imag();
      out[(k + i) * w + k + j] = z.real();
    }
}

Complex normalized_trace_of_realified(std::span<const double> r, std::size_t k) {
  const std::size_t w = 2 * k;
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    re += r[i * w + i];
    im += r[(k + i) * w + i];
  }
  return {re / static_cast<double>(k), im / static_cast<double>(k)};
}

namespace {

void set_identity(double* out, std::size_t m) {
  std::fill(out, out + m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) out[i * m + i] = 1.0;
}

}  // namespace

TraceEvaluator::TraceEvaluator(const KernelRep& k, const simd::Kernels& kernels, Strategy strategy)
    : kernels_(&kernels), strategy_(strategy), degree_(k.degree()), variables_(k.variables()) {
  const OrthoBasis& basis = k.basis();
  if (strategy_ == Strategy::automatic)
    strategy_ = basis.free_factors ? Strategy::factorized : Strategy::monomial;
  if (strategy_ == Strategy::factorized && !basis.free_factors)
    throw std::invalid_argument("factorized evaluation needs a free product basis");

  const auto& words = basis.words;
  std::unordered_map<Word, std::size_t, WordHash> pos;
  for (std::size_t j = 0; j < words.size(); ++j) pos.emplace(words[j], j);

  if (strategy_ == Strategy::monomial) {
    parent_.resize(words.size(), 0);
    last_.resize(words.size(), 0);
    for (std::size_t j = 1; j < words.size(); ++j) {
      parent_[j] = pos.at(words[j].sub(0, words[j].size() - 1));
      last_[j] = words[j][words[j].size() - 1];
    }
    const Eigen::MatrixXd& d = k.orthonormal();
    for (Eigen::Index r = 0; r < d.rows(); ++r) {
      SparseRow row;
      for (Eigen::Index u = 0; u < d.cols(); ++u)
        if (d(r, u) != 0.0) {
          row.cols.push_back(static_cast<std::size_t>(u));
          row.values.push_back(d(r, u));
        }
      rows_.push_back(std::move(row));
    }
    return;
  }

  for (const OrthoBasis& single : *basis.free_factors) {
    std::vector<SparseRow> by_run(degree_ + 1);
    Eigen::MatrixXd d = single.orthonormal_matrix();
    for (std::size_t r = 0; r < single.retained.size(); ++r) {
      const std::size_t run = single.retained[r].size();
      if (run > degree_) continue;
      SparseRow& row = by_run[run];
      for (std::size_t e = 0; e <= degree_ && e < single.words.size(); ++e) {
        const double x = d(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(e));
        if (x != 0.0) {
          row.cols.push_back(single.words[e].size());
          row.values.push_back(x);
        }
      }
    }
    single_rows_.push_back(std::move(by_run));
  }
  std::unordered_map<std::size_t, std::size_t> slot;  // word index -> buffer slot
  for (const Word& w : basis.retained) {
    const std::size_t j = pos.at(w);
    slot.emplace(j, live_.size());
    live_.push_back(j);
    if (w.empty()) {
      steps_.push_back({0, 0, 0});
      continue;
    }
    std::size_t run = 1;
    while (run < w.size() && w[run] == w[0]) ++run;
    const std::size_t suffix = pos.at(w.sub(run, w.size() - run));
    auto it = slot.find(suffix);
    if (it == slot.end()) throw std::logic_error("free product basis word retained without its suffix");
    steps_.push_back({w[0], run, it->second});
  }
}

double TraceEvaluator::normalized_trace(std::span<const double* const> mats, std::size_t m) {
  if (mats.size() < variables_) throw DimensionError("tuple has fewer matrices than kernel variables");
  return strategy_ == Strategy::factorized ? factorized_path(mats, m) : monomial_path(mats, m);
}

double TraceEvaluator::siciak(std::span<const double* const> mats, std::size_t m) {
  return std::pow(normalized_trace(mats, m), 1.0 / static_cast<double>(degree_));
}

double TraceEvaluator::monomial_path(std::span<const double* const> mats, std::size_t m) {
  const std::size_t mm = m * m;
  const std::size_t s = parent_.size();
  buffer_.resize((s + 1) * mm);
  double* mon = buffer_.data();
  double* tmp = mon + s * mm;
  set_identity(mon, m);
  for (std::size_t j = 1; j < s; ++j) {
    const double* a = mats[last_[j] - 1];
    if (parent_[j] == 0) std::memcpy(mon + j * mm, a, mm * sizeof(double));
    else kernels_->gemm(m, mon + parent_[j] * mm, a, mon + j * mm);
  }
  double acc = 0.0;
  for (const SparseRow& row : rows_) {
    std::fill(tmp, tmp + mm, 0.0);
    for (std::size_t t = 0; t < row.cols.size(); ++t) kernels_->axpy(mm, row.values[t], mon + row.cols[t] * mm, tmp);
    acc += kernels_->dot(mm, tmp, tmp);
  }
  return acc / static_cast<double>(m);
}

double TraceEvaluator::factorized_path(std::span<const double* const> mats, std::size_t m) {
  const std::size_t mm = m * m;
  const std::size_t n = single_rows_.size();
  const std::size_t per_var = 2 * (degree_ + 1);  // powers, then polynomials
  buffer_.resize((n * per_var + live_.size()) * mm);
  double* base = buffer_.data();
  auto power = [&](std::size_t i, std::size_t e) { return base + (i * per_var + e) * mm; };
  auto poly = [&](std::size_t i, std::size_t r) { return base + (i * per_var + degree_ + 1 + r) * mm; };
  double* prod = base + n * per_var * mm;

  for (std::size_t i = 0; i < n; ++i) {
    set_identity(power(i, 0), m);
    if (degree_ >= 1) std::memcpy(power(i, 1), mats[i], mm * sizeof(double));
    for (std::size_t e = 2; e <= degree_; ++e) kernels_->gemm(m, power(i, e - 1), mats[i], power(i, e));
    for (std::size_t r = 1; r <= degree_; ++r) {
      const SparseRow& row = single_rows_[i][r];
      if (row.cols.empty()) continue;
      double* out = poly(i, r);
      std::fill(out, out + mm, 0.0);
      for (std::size_t t = 0; t < row.cols.size(); ++t) kernels_->axpy(mm, row.values[t], power(i, row.cols[t]), out);
    }
  }

  double acc = 0.0;
  for (std::size_t s = 0; s < steps_.size(); ++s) {
    double* out = prod + s * mm;
    const Step& st = steps_[s];
    if (st.letter == 0) {
      set_identity(out, m);
    } else if (st.suffix == 0 && live_[0] == 0) {
      std::memcpy(out, poly(st.letter - 1, st.run), mm * sizeof(double));
    } else {
      kernels_->gemm(m, poly(st.letter - 1, st.run), prod + st.suffix * mm, out);
    }
    acc += kernels_->dot(mm, out, out);
  }
  return acc / static_cast<double>(m);
}

// ---------------------------------------------------------------------------

ObservableEvaluator::ObservableEvaluator(const NcPolynomial& f, const simd::Kernels& kernels) : kernels_(&kernels) {
  std::map<std::pair<std::size_t, Letter>, std::size_t> children;
  nodes_.push_back({0, 0});
  for (const auto& [w, c] : f.terms()) {
    std::size_t node = 0;
    for (Letter l : w) {
      auto [it, inserted] = children.try_emplace({node, l}, nodes_.size());
      if (inserted) nodes_.push_back({node, l});
      node = it->second;
    }
    terms_.emplace_back(node, c.to_complex());
  }
}

double ObservableEvaluator::evaluate(std::span<const double* const> mats, std::size_t m, bool realified) {
  const std::size_t mm = m * m;
  buffer_.resize(nodes_.size() * mm);
  double* base = buffer_.data();
  set_identity(base, m);
  for (std::size_t j = 1; j < nodes_.size(); ++j) {
    const Node& nd = nodes_[j];
    if (nd.letter > mats.size()) throw DimensionError("observable uses a variable without a matrix");
    const double* a = mats[nd.letter - 1];
    if (nd.parent == 0) std::memcpy(base + j * mm, a, mm * sizeof(double));
    else kernels_->gemm(m, base + nd.parent * mm, a, base + j * mm);
  }
  double acc = 0.0;
  for (const auto& [node, c] : terms_) {
    const double* x = base + node * mm;
    Complex t;
    if (realified) {
      t = normalized_trace_of_realified(std::span<const double>(x, mm), m / 2);
    } else {
      double tr = 0.0;
      for (std::size_t i = 0; i < m; ++i) tr += x[i * m + i];
      t = tr / static_cast<double>(m);
    }
    acc += (c * t).real();
  }
  return acc;
}

}  // namespace ncck
