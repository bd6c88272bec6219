#include "htap/matching.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <tuple>

#include "htap/errors.hpp"

namespace htap {

namespace {

// ---------------------------------------------------------------------------
// Edmonds' maximum weight matching, O(n^3), following the primal-dual
// formulation of Galil ("Efficient algorithms for finding maximum matching
// in graphs", 1986). Dual variables are stored doubled so that integer edge
// weights keep every quantity integral.

class BlossomMatcher {
 public:
  BlossomMatcher(std::size_t n, std::span<const std::tuple<std::size_t, std::size_t, long long>> edges,
                 bool max_cardinality)
      : nv_(static_cast<long>(n)), max_cardinality_(max_cardinality) {
    for (const auto& [u, v, w] : edges) edges_.push_back({static_cast<long>(u), static_cast<long>(v), w});
    const long ne = static_cast<long>(edges_.size());
    long long max_weight = 0;
    for (const Edge& e : edges_) max_weight = std::max(max_weight, e.w);

    endpoint_.resize(2 * ne);
    for (long p = 0; p < 2 * ne; ++p) endpoint_[p] = (p % 2 == 0) ? edges_[p / 2].u : edges_[p / 2].v;
    neighbend_.assign(nv_, {});
    for (long k = 0; k < ne; ++k) {
      neighbend_[edges_[k].u].push_back(2 * k + 1);
      neighbend_[edges_[k].v].push_back(2 * k);
    }
    mate_.assign(nv_, -1);
    label_.assign(2 * nv_, 0);
    labelend_.assign(2 * nv_, -1);
    inblossom_.resize(nv_);
    for (long v = 0; v < nv_; ++v) inblossom_[v] = v;
    blossomparent_.assign(2 * nv_, -1);
    blossomchilds_.assign(2 * nv_, {});
    blossombase_.assign(2 * nv_, -1);
    for (long v = 0; v < nv_; ++v) blossombase_[v] = v;
    blossomendps_.assign(2 * nv_, {});
    bestedge_.assign(2 * nv_, -1);
    blossombestedges_.assign(2 * nv_, {});
    has_bestedges_.assign(2 * nv_, false);
    for (long b = 2 * nv_ - 1; b >= nv_; --b) unusedblossoms_.push_back(b);
    dualvar_.assign(2 * nv_, 0);
    for (long v = 0; v < nv_; ++v) dualvar_[v] = max_weight;
    allowedge_.assign(ne, false);
  }

  std::vector<long> solve() {
    const long ne = static_cast<long>(edges_.size());
    for (long stage = 0; stage < nv_; ++stage) {
      std::fill(label_.begin(), label_.end(), 0);
      std::fill(bestedge_.begin(), bestedge_.end(), -1);
      for (long b = nv_; b < 2 * nv_; ++b) {
        blossombestedges_[b].clear();
        has_bestedges_[b] = false;
      }
      std::fill(allowedge_.begin(), allowedge_.end(), false);
      queue_.clear();

      for (long v = 0; v < nv_; ++v) {
        if (mate_[v] == -1 && label_[inblossom_[v]] == 0) assign_label(v, 1, -1);
      }

      bool augmented = false;
      while (true) {
        while (!queue_.empty() && !augmented) {
          const long v = queue_.back();
          queue_.pop_back();
          for (long p : neighbend_[v]) {
            const long k = p / 2;
            const long w = endpoint_[p];
            if (inblossom_[v] == inblossom_[w]) continue;
            long long kslack = 0;
            if (!allowedge_[k]) {
              kslack = slack(k);
              if (kslack <= 0) allowedge_[k] = true;
            }
            if (allowedge_[k]) {
              if (label_[inblossom_[w]] == 0) {
                assign_label(w, 2, p ^ 1);
              } else if (label_[inblossom_[w]] == 1) {
                const long base = scan_blossom(v, w);
                if (base >= 0) {
                  add_blossom(base, k);
                } else {
                  augment_matching(k);
                  augmented = true;
                  break;
                }
              } else if (label_[w] == 0) {
                label_[w] = 2;
                labelend_[w] = p ^ 1;
              }
            } else if (label_[inblossom_[w]] == 1) {
              const long b = inblossom_[v];
              if (bestedge_[b] == -1 || kslack < slack(bestedge_[b])) bestedge_[b] = k;
            } else if (label_[w] == 0) {
              if (bestedge_[w] == -1 || kslack < slack(bestedge_[w])) bestedge_[w] = k;
            }
          }
        }
        if (augmented) break;

        int deltatype = -1;
        long long delta = 0;
        long deltaedge = -1;
        long deltablossom = -1;
        if (!max_cardinality_) {
          deltatype = 1;
          delta = *std::min_element(dualvar_.begin(), dualvar_.begin() + nv_);
        }
        for (long v = 0; v < nv_; ++v) {
          if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
            const long long d = slack(bestedge_[v]);
            if (deltatype == -1 || d < delta) {
              delta = d;
              deltatype = 2;
              deltaedge = bestedge_[v];
            }
          }
        }
        for (long b = 0; b < 2 * nv_; ++b) {
          if (blossomparent_[b] == -1 && label_[b] == 1 && bestedge_[b] != -1) {
            const long long kslack = slack(bestedge_[b]);
            if (kslack % 2 != 0) throw InvariantViolation("blossom matching: odd slack between S-blossoms");
            const long long d = kslack / 2;
            if (deltatype == -1 || d < delta) {
              delta = d;
              deltatype = 3;
              deltaedge = bestedge_[b];
            }
          }
        }
        for (long b = nv_; b < 2 * nv_; ++b) {
          if (blossombase_[b] >= 0 && blossomparent_[b] == -1 && label_[b] == 2 &&
              (deltatype == -1 || dualvar_[b] < delta)) {
            delta = dualvar_[b];
            deltatype = 4;
            deltablossom = b;
          }
        }
        if (deltatype == -1) {
          deltatype = 1;
          delta = std::max<long long>(0, *std::min_element(dualvar_.begin(), dualvar_.begin() + nv_));
        }

        for (long v = 0; v < nv_; ++v) {
          if (label_[inblossom_[v]] == 1) {
            dualvar_[v] -= delta;
          } else if (label_[inblossom_[v]] == 2) {
            dualvar_[v] += delta;
          }
        }
        for (long b = nv_; b < 2 * nv_; ++b) {
          if (blossombase_[b] >= 0 && blossomparent_[b] == -1) {
            if (label_[b] == 1) {
              dualvar_[b] += delta;
            } else if (label_[b] == 2) {
              dualvar_[b] -= delta;
            }
          }
        }

        if (deltatype == 1) {
          break;
        } else if (deltatype == 2) {
          allowedge_[deltaedge] = true;
          long i = edges_[deltaedge].u;
          long j = edges_[deltaedge].v;
          if (label_[inblossom_[i]] == 0) std::swap(i, j);
          queue_.push_back(i);
        } else if (deltatype == 3) {
          allowedge_[deltaedge] = true;
          queue_.push_back(edges_[deltaedge].u);
        } else if (deltatype == 4) {
          expand_blossom(deltablossom, false);
        }
      }
      if (!augmented) break;

      for (long b = nv_; b < 2 * nv_; ++b) {
        if (blossomparent_[b] == -1 && blossombase_[b] >= 0 && label_[b] == 1 && dualvar_[b] == 0) {
          expand_blossom(b, true);
        }
      }
    }
    (void)ne;
    std::vector<long> result(nv_, -1);
    for (long v = 0; v < nv_; ++v) {
      if (mate_[v] >= 0) result[v] = endpoint_[mate_[v]];
    }
    return result;
  }

 private:
  struct Edge {
    long u;
    long v;
    long long w;
  };

  long long slack(long k) const {
    const Edge& e = edges_[k];
    return dualvar_[e.u] + dualvar_[e.v] - 2 * e.w;
  }

  void blossom_leaves(long b, std::vector<long>& out) const {
    if (b < nv_) {
      out.push_back(b);
      return;
    }
    for (long t : blossomchilds_[b]) blossom_leaves(t, out);
  }

  std::vector<long> leaves(long b) const {
    std::vector<long> out;
    blossom_leaves(b, out);
    return out;
  }

  void assign_label(long w, int t, long p) {
    const long b = inblossom_[w];
    label_[w] = label_[b] = t;
    labelend_[w] = labelend_[b] = p;
    bestedge_[w] = bestedge_[b] = -1;
    if (t == 1) {
      blossom_leaves(b, queue_);
    } else if (t == 2) {
      const long base = blossombase_[b];
      assign_label(endpoint_[mate_[base]], 1, mate_[base] ^ 1);
    }
  }

  long scan_blossom(long v, long w) {
    std::vector<long> path;
    long base = -1;
    while (v != -1 || w != -1) {
      long b = inblossom_[v];
      if (label_[b] & 4) {
        base = blossombase_[b];
        break;
      }
      path.push_back(b);
      label_[b] = 5;
      if (labelend_[b] == -1) {
        v = -1;
      } else {
        v = endpoint_[labelend_[b]];
        b = inblossom_[v];
        v = endpoint_[labelend_[b]];
      }
      if (w != -1) std::swap(v, w);
    }
    for (long b : path) label_[b] = 1;
    return base;
  }

  void add_blossom(long base, long k) {
    long v = edges_[k].u;
    long w = edges_[k].v;
    const long bb = inblossom_[base];
    long bv = inblossom_[v];
    long bw = inblossom_[w];
    const long b = unusedblossoms_.back();
    unusedblossoms_.pop_back();
    blossombase_[b] = base;
    blossomparent_[b] = -1;
    blossomparent_[bb] = b;
    std::vector<long>& path = blossomchilds_[b];
    std::vector<long>& endps = blossomendps_[b];
    path.clear();
    endps.clear();
    while (bv != bb) {
      blossomparent_[bv] = b;
      path.push_back(bv);
      endps.push_back(labelend_[bv]);
      v = endpoint_[labelend_[bv]];
      bv = inblossom_[v];
    }
    path.push_back(bb);
    std::reverse(path.begin(), path.end());
    std::reverse(endps.begin(), endps.end());
    endps.push_back(2 * k);
    while (bw != bb) {
      blossomparent_[bw] = b;
      path.push_back(bw);
      endps.push_back(labelend_[bw] ^ 1);
      w = endpoint_[labelend_[bw]];
      bw = inblossom_[w];
    }
    label_[b] = 1;
    labelend_[b] = labelend_[bb];
    dualvar_[b] = 0;
    for (long leaf : leaves(b)) {
      if (label_[inblossom_[leaf]] == 2) queue_.push_back(leaf);
      inblossom_[leaf] = b;
    }

    std::vector<long> bestedgeto(2 * nv_, -1);
    for (long sub : path) {
      std::vector<long> candidates;
      if (!has_bestedges_[sub]) {
        for (long leaf : leaves(sub)) {
          for (long p : neighbend_[leaf]) candidates.push_back(p / 2);
        }
      } else {
        candidates = blossombestedges_[sub];
      }
      for (long kk : candidates) {
        long i = edges_[kk].u;
        long j = edges_[kk].v;
        if (inblossom_[j] == b) std::swap(i, j);
        const long bj = inblossom_[j];
        if (bj != b && label_[bj] == 1 &&
            (bestedgeto[bj] == -1 || slack(kk) < slack(bestedgeto[bj]))) {
          bestedgeto[bj] = kk;
        }
      }
      blossombestedges_[sub].clear();
      has_bestedges_[sub] = false;
      bestedge_[sub] = -1;
    }
    blossombestedges_[b].clear();
    for (long kk : bestedgeto) {
      if (kk != -1) blossombestedges_[b].push_back(kk);
    }
    has_bestedges_[b] = true;
    bestedge_[b] = -1;
    for (long kk : blossombestedges_[b]) {
      if (bestedge_[b] == -1 || slack(kk) < slack(bestedge_[b])) bestedge_[b] = kk;
    }
  }

  void expand_blossom(long b, bool endstage) {
    const std::vector<long> childs = blossomchilds_[b];
    for (long s : childs) {
      blossomparent_[s] = -1;
      if (s < nv_) {
        inblossom_[s] = s;
      } else if (endstage && dualvar_[s] == 0) {
        expand_blossom(s, endstage);
      } else {
        for (long leaf : leaves(s)) inblossom_[leaf] = s;
      }
    }
    if (!endstage && label_[b] == 2) {
      const long entrychild = inblossom_[endpoint_[labelend_[b] ^ 1]];
      const long len = static_cast<long>(childs.size());
      long j = static_cast<long>(std::find(childs.begin(), childs.end(), entrychild) - childs.begin());
      long jstep;
      long endptrick;
      if (j & 1) {
        j -= len;
        jstep = 1;
        endptrick = 0;
      } else {
        jstep = -1;
        endptrick = 1;
      }
      auto at = [len](const std::vector<long>& vec, long idx) { return vec[((idx % len) + len) % len]; };
      const std::vector<long>& endps = blossomendps_[b];
      long p = labelend_[b];
      while (j != 0) {
        label_[endpoint_[p ^ 1]] = 0;
        label_[endpoint_[at(endps, j - endptrick) ^ endptrick ^ 1]] = 0;
        assign_label(endpoint_[p ^ 1], 2, p);
        allowedge_[at(endps, j - endptrick) / 2] = true;
        j += jstep;
        p = at(endps, j - endptrick) ^ endptrick;
        allowedge_[p / 2] = true;
        j += jstep;
      }
      long bv = at(childs, j);
      label_[endpoint_[p ^ 1]] = label_[bv] = 2;
      labelend_[endpoint_[p ^ 1]] = labelend_[bv] = p;
      bestedge_[bv] = -1;
      j += jstep;
      while (at(childs, j) != entrychild) {
        bv = at(childs, j);
        if (label_[bv] == 1) {
          j += jstep;
          continue;
        }
        long found = -1;
        for (long leaf : leaves(bv)) {
          if (label_[leaf] != 0) {
            found = leaf;
            break;
          }
        }
        if (found != -1) {
          label_[found] = 0;
          label_[endpoint_[mate_[blossombase_[bv]]]] = 0;
          assign_label(found, 2, labelend_[found]);
        }
        j += jstep;
      }
    }
    label_[b] = labelend_[b] = -1;
    blossomchilds_[b].clear();
    blossomendps_[b].clear();
    blossombase_[b] = -1;
    blossombestedges_[b].clear();
    has_bestedges_[b] = false;
    bestedge_[b] = -1;
    unusedblossoms_.push_back(b);
  }

  void augment_blossom(long b, long v) {
    long t = v;
    while (blossomparent_[t] != b) t = blossomparent_[t];
    if (t >= nv_) augment_blossom(t, v);
    std::vector<long>& childs = blossomchilds_[b];
    std::vector<long>& endps = blossomendps_[b];
    const long len = static_cast<long>(childs.size());
    auto at = [len](const std::vector<long>& vec, long idx) { return vec[((idx % len) + len) % len]; };
    const long i = static_cast<long>(std::find(childs.begin(), childs.end(), t) - childs.begin());
    long j = i;
    long jstep;
    long endptrick;
    if (i & 1) {
      j -= len;
      jstep = 1;
      endptrick = 0;
    } else {
      jstep = -1;
      endptrick = 1;
    }
    while (j != 0) {
      j += jstep;
      t = at(childs, j);
      const long p = at(endps, j - endptrick) ^ endptrick;
      if (t >= nv_) augment_blossom(t, endpoint_[p]);
      j += jstep;
      t = at(childs, j);
      if (t >= nv_) augment_blossom(t, endpoint_[p ^ 1]);
      mate_[endpoint_[p]] = p ^ 1;
      mate_[endpoint_[p ^ 1]] = p;
    }
    std::rotate(childs.begin(), childs.begin() + i, childs.end());
    std::rotate(endps.begin(), endps.begin() + i, endps.end());
    blossombase_[b] = blossombase_[childs[0]];
  }

  void augment_matching(long k) {
    const long v = edges_[k].u;
    const long w = edges_[k].v;
    const std::pair<long, long> starts[2] = {{v, 2 * k + 1}, {w, 2 * k}};
    for (auto [s, p] : starts) {
      while (true) {
        const long bs = inblossom_[s];
        if (bs >= nv_) augment_blossom(bs, s);
        mate_[s] = p;
        if (labelend_[bs] == -1) break;
        const long t = endpoint_[labelend_[bs]];
        const long bt = inblossom_[t];
        s = endpoint_[labelend_[bt]];
        const long j = endpoint_[labelend_[bt] ^ 1];
        if (bt >= nv_) augment_blossom(bt, j);
        mate_[j] = labelend_[bt];
        p = labelend_[bt] ^ 1;
      }
    }
  }

  long nv_;
  bool max_cardinality_;
  std::vector<Edge> edges_;
  std::vector<long> endpoint_;
  std::vector<std::vector<long>> neighbend_;
  std::vector<long> mate_;
  std::vector<int> label_;
  std::vector<long> labelend_;
  std::vector<long> inblossom_;
  std::vector<long> blossomparent_;
  std::vector<std::vector<long>> blossomchilds_;
  std::vector<long> blossombase_;
  std::vector<std::vector<long>> blossomendps_;
  std::vector<long> bestedge_;
  std::vector<std::vector<long>> blossombestedges_;
  std::vector<bool> has_bestedges_;
  std::vector<long> unusedblossoms_;
  std::vector<long long> dualvar_;
  std::vector<bool> allowedge_;
  std::vector<long> queue_;
};

Pairing exhaustive_matching(std::size_t n, const PairWeight& weight) {
  if (n > 20) throw ArgumentError("exhaustive matching is limited to 20 points");
  const std::uint32_t full = (1u << n) - 1u;
  // best[mask] = min weight to perfectly match the points in `mask`.
  std::vector<double> best(std::size_t{1} << n, std::numeric_limits<double>::infinity());
  std::vector<std::uint8_t> partner(std::size_t{1} << n, 0);
  best[0] = 0.0;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    if (std::popcount(mask) % 2 != 0) continue;
    const unsigned first = static_cast<unsigned>(std::countr_zero(mask));
    const std::uint32_t rest = mask & ~(1u << first);
    for (unsigned j = first + 1; j < n; ++j) {
      if (!(rest & (1u << j))) continue;
      const double cand = weight(first, j) + best[rest & ~(1u << j)];
      if (cand < best[mask]) {
        best[mask] = cand;
        partner[mask] = static_cast<std::uint8_t>(j);
      }
    }
  }
  Pairing out;
  std::uint32_t mask = full;
  while (mask != 0) {
    const unsigned first = static_cast<unsigned>(std::countr_zero(mask));
    const unsigned j = partner[mask];
    out.pairs.emplace_back(first, j);
    out.weight += weight(first, j);
    mask &= ~((1u << first) | (1u << j));
  }
  return out;
}

Pairing greedy_matching(std::size_t n, const PairWeight& weight) {
  std::vector<std::tuple<double, std::size_t, std::size_t>> cand;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) cand.emplace_back(weight(a, b), a, b);
  }
  std::sort(cand.begin(), cand.end());
  std::vector<bool> used(n, false);
  Pairing out;
  out.exact = false;
  for (const auto& [w, a, b] : cand) {
    if (used[a] || used[b]) continue;
    used[a] = used[b] = true;
    out.pairs.emplace_back(a, b);
    out.weight += weight(a, b);
  }
  std::sort(out.pairs.begin(), out.pairs.end());
  return out;
}

Pairing blossom_min_matching(std::size_t n, const PairWeight& weight) {
  double max_w = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) max_w = std::max(max_w, weight(a, b));
  }
  // Quantize to integers with 2^40 steps over [0, max]; the rounding error
  // per pair is at most max * 2^-41, far below the instance tolerance.
  const double scale = max_w > 0.0 ? std::ldexp(1.0, 40) / max_w : 0.0;
  auto quantize = [&](double w) { return static_cast<long long>(std::llround(w * scale)); };
  const long long ceiling = quantize(max_w) + 1;
  std::vector<std::tuple<std::size_t, std::size_t, long long>> edges;
  edges.reserve(n * (n - 1) / 2);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) edges.emplace_back(a, b, ceiling - quantize(weight(a, b)));
  }
  const std::vector<long> mate = max_weight_matching(n, edges, true);
  Pairing out;
  for (std::size_t a = 0; a < n; ++a) {
    if (mate[a] < 0) throw InvariantViolation("blossom matching left a point unmatched");
    const auto b = static_cast<std::size_t>(mate[a]);
    if (a < b) {
      out.pairs.emplace_back(a, b);
      out.weight += weight(a, b);
    }
  }
  return out;
}

}  // namespace

std::vector<long> max_weight_matching(std::size_t n_vertices,
                                      std::span<const std::tuple<std::size_t, std::size_t, long long>> edges,
                                      bool max_cardinality) {
  if (n_vertices == 0 || edges.empty()) return std::vector<long>(n_vertices, -1);
  return BlossomMatcher(n_vertices, edges, max_cardinality).solve();
}

Pairing min_weight_perfect_matching(std::size_t n, const PairWeight& weight, MatchingMethod method) {
  if (n % 2 != 0) throw ArgumentError("perfect matching needs an even number of points, got " + std::to_string(n));
  if (n == 0) return {};
  switch (method) {
    case MatchingMethod::kAuto:
      return n <= kExhaustiveLimit ? exhaustive_matching(n, weight) : blossom_min_matching(n, weight);
    case MatchingMethod::kExhaustive:
      if (n > kExhaustiveLimit) {
        throw ArgumentError("exhaustive matching is limited to " + std::to_string(kExhaustiveLimit) + " points");
      }
      return exhaustive_matching(n, weight);
    case MatchingMethod::kBlossom:
      return blossom_min_matching(n, weight);
    case MatchingMethod::kGreedy:
      return greedy_matching(n, weight);
  }
  return {};
}

}  // namespace htap
