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

#ifndef URNE_LATTICE_H_
#define URNE_LATTICE_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace urne {

// One weighted word arc. Scores are natural-log and must be finite.
struct Arc {
  int from = 0;
  int to = 0;
  std::string word;
  double acoustic = 0.0;
  double lm = 0.0;
};

// Acyclic word lattice from a first-pass decode. Node 0 is the start node.
// Values are immutable once built; all operations below are free functions
// returning fresh lattices or derived results.
struct Lattice {
  std::string utterance_id;
  int num_nodes = 0;
  std::vector<Arc> arcs;
  std::vector<int> final_nodes;  // sorted, unique

  bool IsFinal(int node) const;
};

// Arc score combination is linear in the two log-scores.
struct ScaleConfig {
  double acoustic_scale = 1.0;
  double lm_scale = 1.0;
};

inline double ArcScore(const Arc& arc, const ScaleConfig& scales) {
  return scales.acoustic_scale * arc.acoustic + scales.lm_scale * arc.lm;
}

// A complete start->final walk. nodes.size() == words.size() + 1.
struct Path {
  std::vector<std::string> words;
  std::vector<int> nodes;
  double acoustic_total = 0.0;
  double lm_total = 0.0;
  double total_score = 0.0;
};

// One keyword occurrence: the arc (entry_node, exit_node) carries the
// keyword label: best_path_score is the best complete-path score through it.
struct KeywordMatch {
  std::string keyword;
  int entry_node = 0;
  int exit_node = 0;
  int arc_index = 0;
  double best_path_score = 0.0;
};

// Outgoing arc indices per node, in arc-vector order.
std::vector<std::vector<int>> OutgoingArcs(const Lattice& lattice);
std::vector<std::vector<int>> IncomingArcs(const Lattice& lattice);

// Topological node order; ties resolved by smallest node id first.
// Throws CycleDetected.
std::vector<int> TopoOrder(const Lattice& lattice);

// Checks structural invariants: node ids in range, finite scores, at least
// one final node, acyclic. Throws CycleDetected or ParseError-free Error.
void Validate(const Lattice& lattice);

// True for arcs lying on at least one start->final path.
std::vector<bool> ArcsOnCompletePaths(const Lattice& lattice);

// Drops nodes and arcs not on any start->final path, renumbering nodes but
// preserving their relative order. Throws EmptyLattice when nothing remains.
Lattice Connect(const Lattice& lattice);

// Connected lattice with nodes renumbered in topological order and arcs
// sorted by (from, to, word, acoustic, lm). Serialization fixed point.
Lattice Canonicalize(const Lattice& lattice);

// Line-oriented text format:
//   UTT <id>
//   NUMNODES <n>            node 0 is the start
//   ARC <from> <to> <word> <acoustic_logprob> <lm_logprob>
//   FINAL <node>
//   <blank line>            terminates a lattice
// Lines starting with '#' are comments. Scores print with 6 decimals.
std::vector<Lattice> ReadLatticeText(std::istream& in);
void WriteLatticeText(const std::vector<Lattice>& lattices, std::ostream& out);

std::vector<Lattice> ReadLatticeFile(const std::string& path);
void WriteLatticeFile(const std::vector<Lattice>& lattices,
                      const std::string& path, const std::string& header = "");

}  // namespace urne

#endif  // URNE_LATTICE_H_
