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

#ifndef URNE_LATTICE_OPS_H_
#define URNE_LATTICE_OPS_H_

#include <set>
#include <string>
#include <vector>

#include "urne/lattice.h"

namespace urne {

// Best prefix (start->node) under max-score Viterbi; ties resolved by the
// lexicographically smallest node sequence. nodes includes both endpoints.
struct BestHalfPath {
  bool reachable = false;
  double score = 0.0;
  std::vector<int> arcs;
  std::vector<int> nodes;
};

std::vector<BestHalfPath> ViterbiPrefixes(const Lattice& lattice,
                                          const ScaleConfig& scales);
// Best completion (node->any final), same tie-break on the suffix sequence.
std::vector<BestHalfPath> ViterbiSuffixes(const Lattice& lattice,
                                          const ScaleConfig& scales);

// Assembles a Path from arc indices forming a start->final walk.
Path MakePath(const Lattice& lattice, const std::vector<int>& arc_indices,
              const ScaleConfig& scales);

// Max-total-score complete path; ties broken by the lexicographically
// smallest node sequence. Throws EmptyLattice.
Path BestPath(const Lattice& lattice, const ScaleConfig& scales);

// Top-n paths with distinct word sequences, descending score. Exact search
// with a best-completion heuristic; returns fewer when the lattice holds
// fewer distinct sequences. Throws EmptyLattice.
std::vector<Path> NBest(const Lattice& lattice, int n,
                        const ScaleConfig& scales);

// Posterior probability per arc (aligned with lattice.arcs), computed by
// log-space forward-backward over exp(scaled path scores).
std::vector<double> ArcPosteriors(const Lattice& lattice,
                                  const ScaleConfig& scales);

// One match per arc whose label is a keyword and which lies on a complete
// path; semantics of composing the lattice with a single-state keyword
// acceptor. Matches are ordered by arc index.
std::vector<KeywordMatch> FindKeywords(const Lattice& lattice,
                                       const std::set<std::string>& keywords,
                                       const ScaleConfig& scales = {});

}  // namespace urne

#endif  // URNE_LATTICE_OPS_H_
