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

#include "urne/lattice.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <queue>
#include <set>
#include <sstream>
#include <tuple>

#include "urne/errors.h"
#include "urne/text.h"

namespace urne {

bool Lattice::IsFinal(int node) const {
  return std::binary_search(final_nodes.begin(), final_nodes.end(), node);
}

std::vector<std::vector<int>> OutgoingArcs(const Lattice& lattice) {
  std::vector<std::vector<int>> out(lattice.num_nodes);
  for (size_t i = 0; i < lattice.arcs.size(); ++i) {
    out[lattice.arcs[i].from].push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<std::vector<int>> IncomingArcs(const Lattice& lattice) {
  std::vector<std::vector<int>> in(lattice.num_nodes);
  for (size_t i = 0; i < lattice.arcs.size(); ++i) {
    in[lattice.arcs[i].to].push_back(static_cast<int>(i));
  }
  return in;
}

std::vector<int> TopoOrder(const Lattice& lattice) {
  std::vector<int> indegree(lattice.num_nodes, 0);
  for (const Arc& arc : lattice.arcs) ++indegree[arc.to];
  const auto out = OutgoingArcs(lattice);

  std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
  for (int v = 0; v < lattice.num_nodes; ++v) {
    if (indegree[v] == 0) ready.push(v);
  }
  std::vector<int> order;
  order.reserve(lattice.num_nodes);
  while (!ready.empty()) {
    int v = ready.top();
    ready.pop();
    order.push_back(v);
    for (int arc_index : out[v]) {
      if (--indegree[lattice.arcs[arc_index].to] == 0) {
        ready.push(lattice.arcs[arc_index].to);
      }
    }
  }
  if (static_cast<int>(order.size()) != lattice.num_nodes) {
    throw CycleDetected("lattice " + lattice.utterance_id +
                        " contains a cycle");
  }
  return order;
}

void Validate(const Lattice& lattice) {
  if (lattice.num_nodes < 1) {
    throw Error("lattice " + lattice.utterance_id + " has no nodes");
  }
  for (const Arc& arc : lattice.arcs) {
    if (arc.from < 0 || arc.from >= lattice.num_nodes || arc.to < 0 ||
        arc.to >= lattice.num_nodes) {
      throw Error("lattice " + lattice.utterance_id + " arc node out of range");
    }
    if (!std::isfinite(arc.acoustic) || !std::isfinite(arc.lm)) {
      throw Error("lattice " + lattice.utterance_id + " has non-finite score");
    }
    if (arc.word.empty()) {
      throw Error("lattice " + lattice.utterance_id + " has empty arc label");
    }
  }
  if (lattice.final_nodes.empty()) {
    throw Error("lattice " + lattice.utterance_id + " has no final node");
  }
  for (int f : lattice.final_nodes) {
    if (f < 0 || f >= lattice.num_nodes) {
      throw Error("lattice " + lattice.utterance_id +
                  " final node out of range");
    }
  }
  TopoOrder(lattice);
}

std::vector<bool> ArcsOnCompletePaths(const Lattice& lattice) {
  const auto out = OutgoingArcs(lattice);
  const auto in = IncomingArcs(lattice);

  std::vector<bool> forward(lattice.num_nodes, false);
  std::vector<int> stack = {0};
  forward[0] = true;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int arc_index : out[v]) {
      int to = lattice.arcs[arc_index].to;
      if (!forward[to]) {
        forward[to] = true;
        stack.push_back(to);
      }
    }
  }

  std::vector<bool> backward(lattice.num_nodes, false);
  for (int f : lattice.final_nodes) {
    if (!backward[f]) {
      backward[f] = true;
      stack.push_back(f);
    }
  }
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int arc_index : in[v]) {
      int from = lattice.arcs[arc_index].from;
      if (!backward[from]) {
        backward[from] = true;
        stack.push_back(from);
      }
    }
  }

  std::vector<bool> on_path(lattice.arcs.size(), false);
  for (size_t i = 0; i < lattice.arcs.size(); ++i) {
    on_path[i] = forward[lattice.arcs[i].from] && backward[lattice.arcs[i].to];
  }
  return on_path;
}

Lattice Connect(const Lattice& lattice) {
  const auto on_path = ArcsOnCompletePaths(lattice);

  std::vector<bool> keep_node(lattice.num_nodes, false);
  for (size_t i = 0; i < lattice.arcs.size(); ++i) {
    if (on_path[i]) {
      keep_node[lattice.arcs[i].from] = true;
      keep_node[lattice.arcs[i].to] = true;
    }
  }
  // A start node that is also final stays even with no surviving arcs.
  if (lattice.IsFinal(0)) keep_node[0] = true;
  if (!keep_node[0]) {
    throw EmptyLattice("lattice " + lattice.utterance_id +
                       " has no start->final path");
  }

  std::vector<int> remap(lattice.num_nodes, -1);
  int next = 0;
  for (int v = 0; v < lattice.num_nodes; ++v) {
    if (keep_node[v]) remap[v] = next++;
  }

  Lattice result;
  result.utterance_id = lattice.utterance_id;
  result.num_nodes = next;
  for (size_t i = 0; i < lattice.arcs.size(); ++i) {
    if (!on_path[i]) continue;
    Arc arc = lattice.arcs[i];
    arc.from = remap[arc.from];
    arc.to = remap[arc.to];
    result.arcs.push_back(std::move(arc));
  }
  for (int f : lattice.final_nodes) {
    if (f < static_cast<int>(remap.size()) && remap[f] >= 0) {
      result.final_nodes.push_back(remap[f]);
    }
  }
  std::sort(result.final_nodes.begin(), result.final_nodes.end());
  result.final_nodes.erase(
      std::unique(result.final_nodes.begin(), result.final_nodes.end()),
      result.final_nodes.end());
  return result;
}

Lattice Canonicalize(const Lattice& lattice) {
  Lattice connected = Connect(lattice);
  const std::vector<int> order = TopoOrder(connected);
  std::vector<int> remap(connected.num_nodes, -1);
  for (size_t pos = 0; pos < order.size(); ++pos) {
    remap[order[pos]] = static_cast<int>(pos);
  }

  Lattice result;
  result.utterance_id = connected.utterance_id;
  result.num_nodes = connected.num_nodes;
  result.arcs = connected.arcs;
  for (Arc& arc : result.arcs) {
    arc.from = remap[arc.from];
    arc.to = remap[arc.to];
  }
  std::sort(result.arcs.begin(), result.arcs.end(),
            [](const Arc& a, const Arc& b) {
              return std::tie(a.from, a.to, a.word, a.acoustic, a.lm) <
                     std::tie(b.from, b.to, b.word, b.acoustic, b.lm);
            });
  for (int f : connected.final_nodes) result.final_nodes.push_back(remap[f]);
  std::sort(result.final_nodes.begin(), result.final_nodes.end());
  return result;
}

namespace {

struct LatticeBuilder {
  Lattice lattice;
  bool has_numnodes = false;
  bool started = false;

  void Finish(std::vector<Lattice>* out, std::set<std::string>* seen_ids,
              int line_number) {
    if (!started) return;
    if (!has_numnodes) {
      throw ParseError(line_number, "lattice without NUMNODES");
    }
    if (lattice.final_nodes.empty()) {
      throw ParseError(line_number, "lattice without FINAL node");
    }
    std::sort(lattice.final_nodes.begin(), lattice.final_nodes.end());
    lattice.final_nodes.erase(
        std::unique(lattice.final_nodes.begin(), lattice.final_nodes.end()),
        lattice.final_nodes.end());
    if (!seen_ids->insert(lattice.utterance_id).second) {
      throw DuplicateUtteranceId(lattice.utterance_id);
    }
    Validate(lattice);
    out->push_back(std::move(lattice));
    *this = LatticeBuilder();
  }
};

}  // namespace

std::vector<Lattice> ReadLatticeText(std::istream& in) {
  std::vector<Lattice> result;
  std::set<std::string> seen_ids;
  LatticeBuilder builder;
  std::string raw;
  int line_number = 0;

  while (std::getline(in, raw)) {
    ++line_number;
    std::string line = StripCr(std::move(raw));
    if (!line.empty() && line[0] == '#') continue;
    if (line.find_first_not_of(" \t") == std::string::npos) {
      builder.Finish(&result, &seen_ids, line_number);
      continue;
    }
    const auto fields = SplitWhitespace(line);
    const std::string& keyword = fields[0];
    if (keyword == "UTT") {
      if (builder.started) {
        throw ParseError(line_number, "UTT inside an unterminated lattice");
      }
      if (fields.size() != 2) throw ParseError(line_number, "UTT wants 1 field");
      builder.started = true;
      builder.lattice.utterance_id = fields[1];
    } else if (!builder.started) {
      throw ParseError(line_number, "expected UTT, got: " + keyword);
    } else if (keyword == "NUMNODES") {
      if (fields.size() != 2) {
        throw ParseError(line_number, "NUMNODES wants 1 field");
      }
      auto n = ParseInt(fields[1]);
      if (!n || *n < 1) throw ParseError(line_number, "bad node count");
      builder.lattice.num_nodes = static_cast<int>(*n);
      builder.has_numnodes = true;
    } else if (keyword == "ARC") {
      if (fields.size() != 6) {
        throw ParseError(line_number, "ARC wants 5 fields");
      }
      if (!builder.has_numnodes) {
        throw ParseError(line_number, "ARC before NUMNODES");
      }
      Arc arc;
      auto from = ParseInt(fields[1]);
      auto to = ParseInt(fields[2]);
      auto acoustic = ParseDouble(fields[4]);
      auto lm = ParseDouble(fields[5]);
      if (!from || !to || !acoustic || !lm) {
        throw ParseError(line_number, "bad ARC field");
      }
      arc.from = static_cast<int>(*from);
      arc.to = static_cast<int>(*to);
      arc.word = fields[3];
      arc.acoustic = *acoustic;
      arc.lm = *lm;
      if (arc.from < 0 || arc.from >= builder.lattice.num_nodes ||
          arc.to < 0 || arc.to >= builder.lattice.num_nodes) {
        throw ParseError(line_number, "ARC node out of range");
      }
      if (!std::isfinite(arc.acoustic) || !std::isfinite(arc.lm)) {
        throw ParseError(line_number, "ARC score not finite");
      }
      builder.lattice.arcs.push_back(std::move(arc));
    } else if (keyword == "FINAL") {
      if (fields.size() != 2) {
        throw ParseError(line_number, "FINAL wants 1 field");
      }
      if (!builder.has_numnodes) {
        throw ParseError(line_number, "FINAL before NUMNODES");
      }
      auto node = ParseInt(fields[1]);
      if (!node || *node < 0 || *node >= builder.lattice.num_nodes) {
        throw ParseError(line_number, "FINAL node out of range");
      }
      builder.lattice.final_nodes.push_back(static_cast<int>(*node));
    } else {
      throw ParseError(line_number, "unknown keyword: " + keyword);
    }
  }
  builder.Finish(&result, &seen_ids, line_number + 1);
  return result;
}

void WriteLatticeText(const std::vector<Lattice>& lattices,
                      std::ostream& out) {
  for (const Lattice& lattice : lattices) {
    out << "UTT " << lattice.utterance_id << "\n";
    out << "NUMNODES " << lattice.num_nodes << "\n";
    for (const Arc& arc : lattice.arcs) {
      out << "ARC " << arc.from << " " << arc.to << " " << arc.word << " "
          << FormatFixed(arc.acoustic, 6) << " " << FormatFixed(arc.lm, 6)
          << "\n";
    }
    for (int f : lattice.final_nodes) out << "FINAL " << f << "\n";
    out << "\n";
  }
}

std::vector<Lattice> ReadLatticeFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open lattice file: " + path);
  return ReadLatticeText(in);
}

void WriteLatticeFile(const std::vector<Lattice>& lattices,
                      const std::string& path, const std::string& header) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write lattice file: " + path);
  if (!header.empty()) WriteHeaderBlock(out, header);
  WriteLatticeText(lattices, out);
}

}  // namespace urne
