#pragma once

#include <algorithm>
#include <vector>

namespace frb {

// Hopcroft-Karp maximum bipartite matching. Deterministic for a fixed input:
// left vertices are processed in ascending order and adjacency lists are
// scanned in the order edges were added (callers add them sorted).
class HopcroftKarp {
 public:
  HopcroftKarp(int n_left, int n_right) : nl_(n_left), nr_(n_right), adj_(n_left) {}

  void add_edge(int l, int r) { adj_[l].push_back(r); }

  int solve() {
    ml_.assign(nl_, -1);
    mr_.assign(nr_, -1);
    int matched = 0;
    std::vector<int> dist(nl_);
    std::vector<int> queue;
    queue.reserve(nl_);
    while (true) {
      std::fill(dist.begin(), dist.end(), -1);
      queue.clear();
      for (int u = 0; u < nl_; ++u)
        if (ml_[u] < 0) {
          dist[u] = 0;
          queue.push_back(u);
        }
      bool reachable_free = false;
      for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        int u = queue[qi];
        for (int v : adj_[u]) {
          int w = mr_[v];
          if (w < 0)
            reachable_free = true;
          else if (dist[w] < 0) {
            dist[w] = dist[u] + 1;
            queue.push_back(w);
          }
        }
      }
      if (!reachable_free) break;
      int found = 0;
      for (int u = 0; u < nl_; ++u)
        if (ml_[u] < 0 && try_augment(u, dist)) ++found;
      if (!found) break;
      matched += found;
    }
    return matched;
  }

  const std::vector<int>& match_left() const { return ml_; }
  const std::vector<int>& match_right() const { return mr_; }

  // Koenig-style certificate after solve(): left vertices reachable from some
  // unmatched left vertex by alternating paths. When the matching does not
  // saturate the left side, the returned set T satisfies |N(T)| < |T|.
  std::vector<int> hall_violator() const {
    std::vector<char> inl(nl_, 0), inr(nr_, 0);
    std::vector<int> queue;
    for (int u = 0; u < nl_; ++u)
      if (ml_[u] < 0) {
        inl[u] = 1;
        queue.push_back(u);
      }
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      int u = queue[qi];
      for (int v : adj_[u]) {
        if (inr[v]) continue;
        inr[v] = 1;
        int w = mr_[v];
        if (w >= 0 && !inl[w]) {
          inl[w] = 1;
          queue.push_back(w);
        }
      }
    }
    std::vector<int> out;
    for (int u = 0; u < nl_; ++u)
      if (inl[u]) out.push_back(u);
    return out;
  }

 private:
  bool try_augment(int u, std::vector<int>& dist) {
    for (int v : adj_[u]) {
      int w = mr_[v];
      if (w < 0 || (dist[w] == dist[u] + 1 && try_augment(w, dist))) {
        ml_[u] = v;
        mr_[v] = u;
        return true;
      }
    }
    dist[u] = -2;  // dead end for this phase
    return false;
  }

  int nl_, nr_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> ml_, mr_;
};

}  // namespace frb
