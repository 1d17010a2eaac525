#include "ted/maxplus.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace ted {

DenseBlock naive_maxplus(const DenseBlock& a, const DenseBlock& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("naive_maxplus: inner dimension mismatch");
  DenseBlock c(a.rows(), b.cols(), kNegInf);
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < b.cols(); ++j) {
      Value best = kNegInf;
      for (int k = 0; k < a.cols(); ++k) best = std::max(best, sat_add(a.at(i, k), b.at(k, j)));
      c.at(i, j) = best;
    }
  }
  return c;
}

DenseBlock maxplus_omp(const DenseBlock& a, const DenseBlock& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("maxplus_omp: inner dimension mismatch");
  const int n = a.rows();
  const int inner = a.cols();
  const int m = b.cols();
  DenseBlock c(n, m, kNegInf);
#pragma omp parallel for schedule(static) if (static_cast<long long>(n) * inner * m > 32768)
  for (int i = 0; i < n; ++i) {
    Value* out = c.row(i);
    const Value* arow = a.row(i);
    for (int k = 0; k < inner; ++k) {
      const Value aik = arow[k];
      if (aik == kNegInf) continue;
      const Value* brow = b.row(k);
      for (int j = 0; j < m; ++j) {
        const Value bkj = brow[j];
        const Value v = bkj == kNegInf ? kNegInf : aik + bkj;
        out[j] = v > out[j] ? v : out[j];
      }
    }
  }
  return c;
}

BDKernel make_kernel(KernelKind kind) {
  switch (kind) {
    case KernelKind::Naive:
      return naive_maxplus;
    case KernelKind::Plugged:
      return maxplus_omp;
  }
  throw std::invalid_argument("unknown kernel kind");
}

KernelKind parse_kernel(const std::string& name) {
  if (name == "naive") return KernelKind::Naive;
  if (name == "plugged") return KernelKind::Plugged;
  throw std::invalid_argument("unknown kernel '" + name + "' (expected naive or plugged)");
}

std::string to_string(KernelKind kind) {
  return kind == KernelKind::Naive ? "naive" : "plugged";
}

MonotoneMatrix mul1(const MonotoneMatrix& a, const MonotoneMatrix& b, int m_a, int m_b,
                    Mul1Stats* stats, const TripleObserver* observer) {
  const int n = a.rows();
  if (a.cols() != n || b.rows() != n || b.cols() != n) {
    throw std::invalid_argument("mul1: operands must be square and equally sized");
  }
  if (m_a < 0 || m_b < 0) throw std::invalid_argument("mul1: negative bound");
  MonotoneMatrix c = MonotoneMatrix::new_neg_inf(n, n);

  // For each column k of A, the distinct answers of maxrow(A, k, y) for
  // y = 0..m_A together with A_{ik}. Computed lazily; shared by all j.
  struct Hit {
    int i;
    Value value;
  };
  std::vector<std::vector<Hit>> a_hits(static_cast<std::size_t>(n) + 1);
  std::vector<char> a_ready(static_cast<std::size_t>(n) + 1, 0);
  auto hits_for = [&](int k) -> const std::vector<Hit>& {
    auto& hits = a_hits[static_cast<std::size_t>(k)];
    if (a_ready[static_cast<std::size_t>(k)] != 0) return hits;
    a_ready[static_cast<std::size_t>(k)] = 1;
    for (int y = 0; y <= m_a; ++y) {
      const auto [i, aik] = a.maxrow_value(k, y);
      if (hits.empty() || hits.back().i != i) hits.push_back({i, aik});
      if (aik < y) break;  // every larger threshold is absent too
    }
    return hits;
  };

  std::int64_t writes = 0;
  for (int j = 1; j <= n; ++j) {
    int prev_k = -1;
    for (int x = 0; x <= m_b; ++x) {
      const auto [k, bkj] = b.maxrow_value(j, x);
      if (k != prev_k) {
        prev_k = k;
        for (const Hit& h : hits_for(k)) {
          if (observer != nullptr) (*observer)(h.i, k, j);
          c.assign_max(h.i, j, sat_add(h.value, bkj));
          ++writes;
        }
      }
      if (bkj < x) break;
    }
  }
  if (stats != nullptr) {
    stats->iterations += static_cast<std::int64_t>(n) * (m_b + 1) * (m_a + 1);
    stats->rangemax_calls += writes;
  }
  return c;
}

namespace {

/// Largest i (0-based) with col[i] >= x for a non-increasing column given
/// by stride access; -1 if none.
template <typename At>
int dense_maxrow(int rows, At at, Value x) {
  int lo = -1;
  int hi = rows - 1;
  while (lo < hi) {
    const int mid = (lo + hi + 1) / 2;
    if (at(mid) >= x) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return lo;
}

}  // namespace

MonotoneMatrix mul2(const DenseBlock& a, const MonotoneMatrix& b, const MonotoneMatrix& c_prev,
                    int m) {
  const int l = a.rows();
  if (a.cols() != l || b.rows() != l || c_prev.rows() != l || c_prev.cols() != b.cols()) {
    throw std::invalid_argument("mul2: dimension mismatch");
  }
  for (int i = 0; i < l; ++i) {
    for (int k = 0; k < l; ++k) {
      const Value v = a.at(i, k);
      if (v < 0 || v > m) throw std::invalid_argument("mul2: A entries must lie in [0, m]");
    }
  }
  const int n = b.cols();
  // maxrow over A's columns: a_rows[k][y] (1-based i), A entries in [0, m].
  std::vector<std::vector<int>> a_rows(static_cast<std::size_t>(l), std::vector<int>(m + 1));
  for (int k = 0; k < l; ++k) {
    for (int y = 0; y <= m; ++y) {
      a_rows[k][y] = dense_maxrow(l, [&](int i) { return a.at(i, k); }, y) + 1;
    }
  }
  MonotoneMatrix c = c_prev;
  for (int j = 1; j <= n; ++j) {
    const Value top = b.get(1, j);
    if (top == kNegInf) continue;
    int prev_k = -1;
    for (Value x = top - m; x <= top; ++x) {
      const auto [k, bkj] = b.maxrow_value(j, x);
      if (k == prev_k) continue;
      prev_k = k;
      int prev_i = -1;
      for (int y = 0; y <= m; ++y) {
        const int i = a_rows[k - 1][y];
        if (i == 0) break;
        if (i == prev_i) continue;
        prev_i = i;
        c.assign_max(i, j, sat_add(a.at(i - 1, k - 1), bkj));
      }
    }
  }
  return c;
}

DenseBlock mul2_dense(const DenseBlock& a, const DenseBlock& b, const DenseBlock& c_prev) {
  const int l = a.rows();
  const int n = b.cols();
  if (a.cols() != l || b.rows() != l || c_prev.rows() != l || c_prev.cols() != n) {
    throw std::invalid_argument("mul2_dense: dimension mismatch");
  }
  if (l == 0 || n == 0) return c_prev;
  Value lo = a.at(0, 0);
  Value hi = a.at(0, 0);
  for (int i = 0; i < l; ++i) {
    for (int k = 0; k < l; ++k) {
      const Value v = a.at(i, k);
      if (v == kNegInf) throw std::invalid_argument("mul2_dense: A must be finite");
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  // Shift A into [0, m]; the product shifts by `lo`.
  const int m = hi - lo;
  std::vector<int> a_rows(static_cast<std::size_t>(l) * (m + 1));
  for (int k = 0; k < l; ++k) {
    int i = l - 1;
    for (int y = 0; y <= m; ++y) {
      while (i >= 0 && a.at(i, k) - lo < y) --i;
      a_rows[static_cast<std::size_t>(k) * (m + 1) + y] = i;
    }
  }
  // Corner buffer: corner(i, j) holds the largest value written with that
  // exact corner; the dominance sweep below applies the rectangles.
  DenseBlock corner = c_prev;
  for (int j = 0; j < n; ++j) {
    const Value top = b.at(0, j);
    if (top == kNegInf) continue;
    int k = 0;
    int prev_k = -1;
    for (Value x = top; x >= top - m; --x) {
      while (k + 1 < l && b.at(k + 1, j) >= x) ++k;
      if (k == prev_k) continue;
      prev_k = k;
      const Value bkj = b.at(k, j);
      const int* rows = &a_rows[static_cast<std::size_t>(k) * (m + 1)];
      int prev_i = -1;
      for (int y = 0; y <= m; ++y) {
        const int i = rows[y];
        if (i < 0) break;
        if (i == prev_i) continue;
        prev_i = i;
        const Value v = sat_add(a.at(i, k), bkj);
        if (v > corner.at(i, j)) corner.at(i, j) = v;
      }
    }
  }
  for (int i = l - 1; i >= 0; --i) {
    Value* row = corner.row(i);
    const Value* below = i + 1 < l ? corner.row(i + 1) : nullptr;
    for (int j = 0; j < n; ++j) {
      Value v = row[j];
      if (below != nullptr && below[j] > v) v = below[j];
      if (j > 0 && row[j - 1] > v) v = row[j - 1];
      row[j] = v;
    }
  }
  return corner;
}

DenseBlock neg_inf_fill(const DenseBlock& a, int w) {
  DenseBlock out = a;
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < std::min(i, a.cols()); ++j) out.at(i, j) = w * (j - i);
  }
  return out;
}

namespace {

DenseBlock kernel_strips(const DenseBlock& a, const DenseBlock& b, const BDKernel& kernel,
                         Mul3Stats* stats) {
  const int l = a.rows();
  const int n = b.cols();
  DenseBlock c(l, n, kNegInf);
  for (int c0 = 0; c0 < n; c0 += l) {
    const int width = std::min(l, n - c0);
    DenseBlock strip(l, l);
    for (int r = 0; r < l; ++r) {
      const Value* src = b.row(r);
      Value* dst = strip.row(r);
      for (int t = 0; t < l; ++t) dst[t] = src[c0 + std::min(t, width - 1)];
    }
    const DenseBlock part = kernel(a, strip);
    if (part.rows() != l || part.cols() != l) {
      throw std::runtime_error("kernel returned a block of the wrong shape");
    }
    for (int r = 0; r < l; ++r) std::copy(part.row(r), part.row(r) + width, c.row(r) + c0);
    if (stats != nullptr) ++stats->kernel_calls;
  }
  return c;
}

DenseBlock mul3_rec(const DenseBlock& a, const DenseBlock& b, int cutoff, const BDKernel& kernel,
                    Mul3Stats* stats, int depth) {
  const int l = a.rows();
  if (stats != nullptr) stats->max_depth = std::max<std::int64_t>(stats->max_depth, depth);
  if (l <= cutoff) return kernel_strips(a, b, kernel, stats);
  const int h = l / 2;
  const int n = b.cols();
  const DenseBlock g = b.block(0, 0, h, n);
  const DenseBlock hh = b.block(h, 0, h, n);
  // The lower-left quadrant of A' is ignored: after the fill its products
  // never beat the diagonal choice k = i inside F * H.
  const DenseBlock up =
      mul2_dense(a.block(0, h, h, h), hh,
                 mul3_rec(a.block(0, 0, h, h), g, cutoff, kernel, stats, depth + 1));
  if (stats != nullptr) ++stats->mul2_calls;
  const DenseBlock down = mul3_rec(a.block(h, h, h, h), hh, cutoff, kernel, stats, depth + 1);
  DenseBlock c(l, n);
  c.paste(up, 0, 0);
  c.paste(down, h, 0);
  return c;
}

}  // namespace

DenseBlock mul3(const DenseBlock& a, const DenseBlock& b, int cutoff, const BDKernel& kernel,
                Mul3Stats* stats) {
  const int l = a.rows();
  if (a.cols() != l || b.rows() != l) throw std::invalid_argument("mul3: dimension mismatch");
  if (l == 0 || !std::has_single_bit(static_cast<unsigned>(l))) {
    throw std::invalid_argument("mul3: l must be a power of two (pad first)");
  }
  if (cutoff < 1) throw std::invalid_argument("mul3: cutoff must be >= 1");
  return mul3_rec(a, b, cutoff, kernel, stats, 0);
}

int default_mul3_cutoff(int m) {
  return std::max(1, static_cast<int>(std::lround(std::pow(std::max(m, 1), 1.0963))));
}

namespace {

void check_similarity_shape(const DenseBlock& d, const char* name, int bound) {
  const int n = d.rows();
  for (int i = 0; i < n; ++i) {
    if (d.at(i, i) != 0) {
      throw std::invalid_argument(std::string("monotone_bd_product: ") + name +
                                  " must have a zero main diagonal");
    }
    for (int j = i; j < n; ++j) {
      const Value v = d.at(i, j);
      if (v == kNegInf) {
        throw std::invalid_argument(std::string("monotone_bd_product: ") + name +
                                    " must be finite on and above the diagonal");
      }
      if (bound >= 0 && v > bound) {
        throw std::invalid_argument(std::string("monotone_bd_product: ") + name +
                                    " exceeds its stated bound m");
      }
      if (j > i && std::abs(v - d.at(i, j - 1)) > 2) {
        throw std::invalid_argument(std::string("monotone_bd_product: ") + name +
                                    " is not 2-bounded-difference");
      }
    }
  }
}

}  // namespace

MonotoneMatrix monotone_bd_product(const MonotoneMatrix& a, const MonotoneMatrix& b, int m,
                                const BDKernel& kernel, int cutoff, Mul3Stats* stats) {
  const int n = a.rows();
  if (a.cols() != n || b.rows() != n || b.cols() != n) {
    throw std::invalid_argument("monotone_bd_product: operands must be square and equally sized");
  }
  constexpr int kW = 2;
  DenseBlock ad = a.to_dense();
  DenseBlock bd = b.to_dense();
  check_similarity_shape(ad, "A", m);
  check_similarity_shape(bd, "B", -1);
  ad = neg_inf_fill(ad, kW);
  bd = neg_inf_fill(bd, kW);

  // Pad to a power of two. A's extra columns repeat its last column, extra
  // rows follow the fill formula (zero on/above the diagonal); B's extra
  // rows follow the fill formula. Neither can win a maximum for an
  // original row, so cropping restores the exact product.
  const int len = static_cast<int>(std::bit_ceil(static_cast<unsigned>(n)));
  DenseBlock ap(len, len);
  DenseBlock bp(len, n);
  for (int i = 0; i < len; ++i) {
    for (int k = 0; k < len; ++k) {
      Value v;
      if (i < n && k < n) {
        v = ad.at(i, k);
      } else if (i < n) {
        v = ad.at(i, n - 1);
      } else {
        v = k >= i ? 0 : kW * (k - i);
      }
      ap.at(i, k) = v;
    }
  }
  for (int k = 0; k < len; ++k) {
    for (int j = 0; j < n; ++j) bp.at(k, j) = k < n ? bd.at(k, j) : kW * (j - k);
  }

  const int cut = cutoff > 0 ? cutoff : default_mul3_cutoff(m);
  DenseBlock c = mul3(ap, bp, cut, kernel, stats);
  DenseBlock out(n, n, kNegInf);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) out.at(i, j) = c.at(i, j);
  }
  return MonotoneMatrix::from_dense(out);
}

MonotoneMatrix anti_transpose(const MonotoneMatrix& m) {
  const int n = m.rows();
  if (m.cols() != n) throw std::invalid_argument("anti_transpose: matrix must be square");
  const DenseBlock d = m.to_dense();
  DenseBlock r(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) r.at(i, j) = d.at(n - 1 - j, n - 1 - i);
  }
  return MonotoneMatrix::from_dense(r);
}

MonotoneMatrix structured_product(const MonotoneMatrix& a, const MonotoneMatrix& b, int m_a,
                                  int m_b, const BDKernel& kernel, int cutoff,
                                  Mul3Stats* stats) {
  if (m_a <= m_b) return monotone_bd_product(a, b, m_a, kernel, cutoff, stats);
  return anti_transpose(
      monotone_bd_product(anti_transpose(b), anti_transpose(a), m_b, kernel, cutoff, stats));
}

}  // namespace ted
