// Copyright 2026 The urne Authors
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

#include "urne/lattice_ops.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "urne/errors.h"

namespace urne {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool NodeSeqLess(const std::vector<int>& a, const std::vector<int>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

double LogAdd(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  double hi = std::max(a, b);
  double lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

}  // namespace

std::vector<BestHalfPath> ViterbiPrefixes(const Lattice& lattice,
                                          const ScaleConfig& scales) {
  std::vector<BestHalfPath> best(lattice.num_nodes);
  best[0].reachable = true;
  best[0].nodes = {0};
  const auto out = OutgoingArcs(lattice);
  for (int v : TopoOrder(lattice)) {
    if (!best[v].reachable) continue;
    for (int arc_index : out[v]) {
      const Arc& arc = lattice.arcs[arc_index];
      double score = best[v].score + ArcScore(arc, scales);
      BestHalfPath& dst = best[arc.to];
      bool take = !dst.reachable || score > dst.score;
      if (!take && score == dst.score) {
        // Same node appended to both candidates, so comparing prefixes of
        // the predecessor decides.
        std::vector<int> cand_nodes = best[v].nodes;
        cand_nodes.push_back(arc.to);
        take = NodeSeqLess(cand_nodes, dst.nodes);
      }
      if (take) {
        dst.reachable = true;
        dst.score = score;
        dst.arcs = best[v].arcs;
        dst.arcs.push_back(arc_index);
        dst.nodes = best[v].nodes;
        dst.nodes.push_back(arc.to);
      }
    }
  }
  return best;
}

std::vector<BestHalfPath> ViterbiSuffixes(const Lattice& lattice,
                                          const ScaleConfig& scales) {
  std::vector<BestHalfPath> best(lattice.num_nodes);
  const auto out = OutgoingArcs(lattice);
  const auto order = TopoOrder(lattice);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int v = *it;
    BestHalfPath& dst = best[v];
    if (lattice.IsFinal(v)) {
      dst.reachable = true;
      dst.score = 0.0;
      dst.nodes = {v};
      dst.arcs.clear();
    }
    for (int arc_index : out[v]) {
      const Arc& arc = lattice.arcs[arc_index];
      const BestHalfPath& tail = best[arc.to];
      if (!tail.reachable) continue;
      double score = ArcScore(arc, scales) + tail.score;
      bool take = !dst.reachable || score > dst.score;
      if (!take && score == dst.score) {
        std::vector<int> cand_nodes = {v};
        cand_nodes.insert(cand_nodes.end(), tail.nodes.begin(),
                          tail.nodes.end());
        take = NodeSeqLess(cand_nodes, dst.nodes);
      }
      if (take) {
        dst.reachable = true;
        dst.score = score;
        dst.arcs.clear();
        dst.arcs.push_back(arc_index);
        dst.arcs.insert(dst.arcs.end(), tail.arcs.begin(), tail.arcs.end());
        dst.nodes.clear();
        dst.nodes.push_back(v);
        dst.nodes.insert(dst.nodes.end(), tail.nodes.begin(),
                         tail.nodes.end());
      }
    }
  }
  return best;
}

Path MakePath(const Lattice& lattice, const std::vector<int>& arc_indices,
              const ScaleConfig& scales) {
  Path path;
  path.nodes.push_back(0);
  for (int arc_index : arc_indices) {
    const Arc& arc = lattice.arcs[arc_index];
    path.words.push_back(arc.word);
    path.nodes.push_back(arc.to);
    path.acoustic_total += arc.acoustic;
    path.lm_total += arc.lm;
    path.total_score += ArcScore(arc, scales);
  }
  return path;
}

Path BestPath(const Lattice& lattice, const ScaleConfig& scales) {
  const auto prefixes = ViterbiPrefixes(lattice, scales);
  const BestHalfPath* winner = nullptr;
  for (int f : lattice.final_nodes) {
    const BestHalfPath& cand = prefixes[f];
    if (!cand.reachable) continue;
    if (winner == nullptr || cand.score > winner->score ||
        (cand.score == winner->score &&
         NodeSeqLess(cand.nodes, winner->nodes))) {
      winner = &cand;
    }
  }
  if (winner == nullptr) {
    throw EmptyLattice("lattice " + lattice.utterance_id +
                       " has no start->final path");
  }
  return MakePath(lattice, winner->arcs, scales);
}

namespace {

// Best achievable completion score per node, with stopping allowed at
// finals. Exact heuristic for the n-best search.
std::vector<double> BestCompletionScores(const Lattice& lattice,
                                         const ScaleConfig& scales) {
  std::vector<double> beta(lattice.num_nodes, kNegInf);
  const auto out = OutgoingArcs(lattice);
  const auto order = TopoOrder(lattice);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int v = *it;
    if (lattice.IsFinal(v)) beta[v] = 0.0;
    for (int arc_index : out[v]) {
      const Arc& arc = lattice.arcs[arc_index];
      if (beta[arc.to] == kNegInf) continue;
      beta[v] = std::max(beta[v], ArcScore(arc, scales) + beta[arc.to]);
    }
  }
  return beta;
}

struct SearchState {
  double priority = 0.0;  // partial score + best completion
  double score = 0.0;     // partial score from the start
  int node = 0;
  bool done = false;  // complete path popped at a final node
  std::vector<int> arcs;
  std::vector<int> nodes;
};

struct SearchStateWorse {
  bool operator()(const SearchState& a, const SearchState& b) const {
    if (a.priority != b.priority) return a.priority < b.priority;
    return NodeSeqLess(b.nodes, a.nodes);
  }
};

}  // namespace

std::vector<Path> NBest(const Lattice& lattice, int n,
                        const ScaleConfig& scales) {
  const auto beta = BestCompletionScores(lattice, scales);
  if (beta[0] == kNegInf) {
    throw EmptyLattice("lattice " + lattice.utterance_id +
                       " has no start->final path");
  }
  const auto out = OutgoingArcs(lattice);

  std::priority_queue<SearchState, std::vector<SearchState>, SearchStateWorse>
      queue;
  SearchState start;
  start.priority = beta[0];
  start.nodes = {0};
  queue.push(std::move(start));

  std::vector<Path> result;
  std::set<std::vector<std::string>> emitted;
  while (!queue.empty() && static_cast<int>(result.size()) < n) {
    SearchState state = queue.top();
    queue.pop();
    if (state.done) {
      Path path = MakePath(lattice, state.arcs, scales);
      if (emitted.insert(path.words).second) result.push_back(std::move(path));
      continue;
    }
    if (lattice.IsFinal(state.node)) {
      SearchState stop = state;
      stop.done = true;
      stop.priority = stop.score;
      queue.push(std::move(stop));
    }
    for (int arc_index : out[state.node]) {
      const Arc& arc = lattice.arcs[arc_index];
      if (beta[arc.to] == kNegInf) continue;
      SearchState next = state;
      next.node = arc.to;
      next.score += ArcScore(arc, scales);
      next.priority = next.score + beta[arc.to];
      next.arcs.push_back(arc_index);
      next.nodes.push_back(arc.to);
      queue.push(std::move(next));
    }
  }
  return result;
}

std::vector<double> ArcPosteriors(const Lattice& lattice,
                                  const ScaleConfig& scales) {
  const auto out = OutgoingArcs(lattice);
  const auto order = TopoOrder(lattice);

  std::vector<double> alpha(lattice.num_nodes, kNegInf);
  alpha[0] = 0.0;
  for (int v : order) {
    if (alpha[v] == kNegInf) continue;
    for (int arc_index : out[v]) {
      const Arc& arc = lattice.arcs[arc_index];
      alpha[arc.to] = LogAdd(alpha[arc.to], alpha[v] + ArcScore(arc, scales));
    }
  }

  std::vector<double> beta(lattice.num_nodes, kNegInf);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int v = *it;
    if (lattice.IsFinal(v)) beta[v] = 0.0;
    for (int arc_index : out[v]) {
      const Arc& arc = lattice.arcs[arc_index];
      if (beta[arc.to] == kNegInf) continue;
      beta[v] = LogAdd(beta[v], ArcScore(arc, scales) + beta[arc.to]);
    }
  }

  const double total = beta[0];
  if (total == kNegInf) {
    throw EmptyLattice("lattice " + lattice.utterance_id +
                       " has no start->final path");
  }
  std::vector<double> posterior(lattice.arcs.size(), 0.0);
  for (size_t i = 0; i < lattice.arcs.size(); ++i) {
    const Arc& arc = lattice.arcs[i];
    if (alpha[arc.from] == kNegInf || beta[arc.to] == kNegInf) continue;
    posterior[i] =
        std::exp(alpha[arc.from] + ArcScore(arc, scales) + beta[arc.to] -
                 total);
  }
  return posterior;
}

std::vector<KeywordMatch> FindKeywords(const Lattice& lattice,
                                       const std::set<std::string>& keywords,
                                       const ScaleConfig& scales) {
  std::vector<KeywordMatch> matches;
  if (keywords.empty() || lattice.arcs.empty()) return matches;
  const auto on_path = ArcsOnCompletePaths(lattice);
  const auto prefixes = ViterbiPrefixes(lattice, scales);
  const auto suffixes = ViterbiSuffixes(lattice, scales);
  for (size_t i = 0; i < lattice.arcs.size(); ++i) {
    const Arc& arc = lattice.arcs[i];
    if (!on_path[i] || keywords.count(arc.word) == 0) continue;
    KeywordMatch match;
    match.keyword = arc.word;
    match.entry_node = arc.from;
    match.exit_node = arc.to;
    match.arc_index = static_cast<int>(i);
    match.best_path_score = prefixes[arc.from].score + ArcScore(arc, scales) +
                            suffixes[arc.to].score;
    matches.push_back(std::move(match));
  }
  return matches;
}

}  // namespace urne
