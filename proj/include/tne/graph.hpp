#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tne/errors.hpp"
#include "tne/rng.hpp"

namespace tne {

using NodeId = std::uint32_t;

// Undirected simple graph in CSR form. Immutable after construction;
// downstream stages read-share it freely.
struct Graph {
  std::vector<std::uint64_t> offsets;  // size node_count()+1
  std::vector<NodeId> targets;         // per-node neighbors, strictly ascending
  std::vector<std::string> tokens;     // dense id -> original token
  std::uint64_t edge_count = 0;        // undirected edges counted once

  std::size_t node_count() const { return tokens.size(); }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {targets.data() + offsets[v],
            static_cast<std::size_t>(offsets[v + 1] - offsets[v])};
  }

  std::size_t degree(NodeId v) const {
    return static_cast<std::size_t>(offsets[v + 1] - offsets[v]);
  }

  bool has_edge(NodeId u, NodeId v) const {
    const auto adj = neighbors(u);
    return std::binary_search(adj.begin(), adj.end(), v);
  }

  NodeId id_of(const std::string& token) const {
    for (NodeId v = 0; v < tokens.size(); ++v)
      if (tokens[v] == token) return v;
    throw DataError("unknown node token: " + token);
  }
};

struct NodeLabels {
  std::vector<std::int32_t> label;  // per node, dense ids in [0, class_count)
  std::int32_t class_count = 0;
};

namespace detail {

// pairs: (u, v) with u != v, any orientation, duplicates allowed.
inline Graph build_graph(std::size_t n, std::vector<std::pair<NodeId, NodeId>> pairs,
                         std::vector<std::string> tokens) {
  for (auto& e : pairs)
    if (e.first > e.second) std::swap(e.first, e.second);
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

  Graph g;
  g.tokens = std::move(tokens);
  g.edge_count = pairs.size();
  g.offsets.assign(n + 1, 0);
  for (const auto& [u, v] : pairs) {
    ++g.offsets[u + 1];
    ++g.offsets[v + 1];
  }
  for (std::size_t i = 0; i < n; ++i) g.offsets[i + 1] += g.offsets[i];
  g.targets.resize(2 * pairs.size());
  std::vector<std::uint64_t> cursor(g.offsets.begin(), g.offsets.end() - 1);
  for (const auto& [u, v] : pairs) {
    g.targets[cursor[u]++] = v;
    g.targets[cursor[v]++] = u;
  }
  // Sorted input pairs give sorted rows for v-entries but u-entries of
  // later rows can interleave; sort each row to be safe.
  for (std::size_t v = 0; v < n; ++v)
    std::sort(g.targets.begin() + g.offsets[v], g.targets.begin() + g.offsets[v + 1]);
  return g;
}

inline std::vector<std::string> default_tokens(std::size_t n) {
  std::vector<std::string> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::to_string(i);
  return out;
}

}  // namespace detail

// Edge-list ingestion. One edge per line, two whitespace-separated tokens,
// '#' lines ignored. Self-loops, duplicates and reversed orientations
// collapse to a single undirected edge. Token ids are assigned in first
// appearance order.
inline Graph load_edge_list(std::istream& in) {
  std::unordered_map<std::string, NodeId> ids;
  std::vector<std::string> tokens;
  std::vector<std::pair<NodeId, NodeId>> pairs;
  std::string line;
  std::size_t line_no = 0;

  auto intern = [&](const std::string& tok) {
    auto [it, inserted] = ids.emplace(tok, static_cast<NodeId>(tokens.size()));
    if (inserted) tokens.push_back(tok);
    return it->second;
  };

  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string a, b, extra;
    if (!(ls >> a)) continue;  // blank line
    if (a[0] == '#') continue;
    if (!(ls >> b) || (ls >> extra))
      throw DataError("edge list line " + std::to_string(line_no) +
                      ": expected two node tokens");
    const NodeId u = intern(a);
    const NodeId v = intern(b);
    if (u != v) pairs.emplace_back(u, v);
  }
  return detail::build_graph(tokens.size(), std::move(pairs), std::move(tokens));
}

inline void save_edge_list(const Graph& g, std::ostream& out) {
  for (NodeId u = 0; u < g.node_count(); ++u)
    for (NodeId v : g.neighbors(u))
      if (u < v) out << g.tokens[u] << ' ' << g.tokens[v] << '\n';
}

// Components disjoint and covering V; ids ordered by smallest contained node.
inline std::vector<std::int32_t> connected_components(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::int32_t> comp(n, -1);
  std::vector<NodeId> stack;
  std::int32_t next = 0;
  for (NodeId s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    comp[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const NodeId u = stack.back();
      stack.pop_back();
      for (NodeId v : g.neighbors(u)) {
        if (comp[v] < 0) {
          comp[v] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  return comp;
}

inline std::int32_t component_count(const Graph& g) {
  const auto comp = connected_components(g);
  return comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
}

// Induced subgraph on the largest connected component (smallest component id
// wins ties). Returns the subgraph plus original node ids of its vertices.
inline std::pair<Graph, std::vector<NodeId>> largest_component(const Graph& g) {
  const auto comp = connected_components(g);
  const std::int32_t ncomp = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
  std::vector<std::size_t> size(ncomp, 0);
  for (auto c : comp) ++size[c];
  const std::int32_t best = static_cast<std::int32_t>(
      std::max_element(size.begin(), size.end()) - size.begin());

  std::vector<NodeId> keep;
  std::vector<NodeId> remap(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (comp[v] == best) {
      remap[v] = static_cast<NodeId>(keep.size());
      keep.push_back(v);
    }
  }
  std::vector<std::pair<NodeId, NodeId>> pairs;
  std::vector<std::string> tokens(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) tokens[i] = g.tokens[keep[i]];
  for (NodeId u : keep)
    for (NodeId v : g.neighbors(u))
      if (u < v && comp[v] == best) pairs.emplace_back(remap[u], remap[v]);
  return {detail::build_graph(keep.size(), std::move(pairs), std::move(tokens)),
          std::move(keep)};
}

namespace detail {

// Emit each of `count` linearized slots independently with probability prob,
// skipping runs of failures geometrically.
template <typename Emit>
void bernoulli_scan(std::uint64_t count, double prob, Rng& rng, Emit&& emit) {
  if (prob <= 0.0 || count == 0) return;
  if (prob >= 1.0) {
    for (std::uint64_t t = 0; t < count; ++t) emit(t);
    return;
  }
  const double log1mp = std::log1p(-prob);
  std::uint64_t t = 0;
  for (;;) {
    double u = rng.uniform();
    while (u <= 0.0) u = rng.uniform();
    const double skip = std::floor(std::log(u) / log1mp);
    if (skip >= static_cast<double>(count - t)) return;
    t += static_cast<std::uint64_t>(skip);
    emit(t);
    if (++t >= count) return;
  }
}

}  // namespace detail

struct SbmConfig {
  std::vector<std::size_t> cluster_sizes{1000, 1000, 1000};
  double p = 0.07;   // intra-cluster
  double q = 0.003;  // inter A-B
  double c = 1.0;    // asymmetry: A-C gets c*q, B-C gets q/c
  std::uint64_t seed = 1;
};

// Planted-partition generator over three (or more) clusters. Cluster pair
// (0,2) is linked with probability c*q, pair (1,2) with q/c, every other
// cluster pair with q; the geometric mean over the asymmetric pairs stays q.
inline std::pair<Graph, NodeLabels> generate_sbm(const SbmConfig& cfg) {
  if (cfg.cluster_sizes.empty()) throw ConfigError("sbm: no clusters");
  if (!(cfg.q >= 0.0 && cfg.q <= cfg.p && cfg.p <= 1.0))
    throw ConfigError("sbm: need 0 <= q <= p <= 1");
  if (!(cfg.c >= 1.0)) throw ConfigError("sbm: need c >= 1");
  if (cfg.c * cfg.q > 1.0)
    throw ConfigError("sbm: scaled probability c*q exceeds 1");

  const std::size_t k = cfg.cluster_sizes.size();
  std::vector<std::size_t> start(k + 1, 0);
  for (std::size_t i = 0; i < k; ++i) start[i + 1] = start[i] + cfg.cluster_sizes[i];
  const std::size_t n = start[k];

  auto inter_prob = [&](std::size_t a, std::size_t b) {
    if ((a == 0 && b == 2) || (a == 2 && b == 0)) return cfg.c * cfg.q;
    if ((a == 1 && b == 2) || (a == 2 && b == 1)) return cfg.q / cfg.c;
    return cfg.q;
  };

  Rng rng(cfg.seed);
  std::vector<std::pair<NodeId, NodeId>> pairs;

  for (std::size_t a = 0; a < k; ++a) {
    // Intra-cluster upper triangle, rows advanced lazily.
    const std::size_t na = cfg.cluster_sizes[a];
    const std::uint64_t m = static_cast<std::uint64_t>(na) * (na - 1) / 2;
    std::size_t row = 0;
    std::uint64_t base = 0;
    detail::bernoulli_scan(m, cfg.p, rng, [&](std::uint64_t t) {
      while (base + (na - 1 - row) <= t) {
        base += na - 1 - row;
        ++row;
      }
      const std::size_t col = row + 1 + static_cast<std::size_t>(t - base);
      pairs.emplace_back(static_cast<NodeId>(start[a] + row),
                         static_cast<NodeId>(start[a] + col));
    });
    for (std::size_t b = a + 1; b < k; ++b) {
      const std::size_t nb = cfg.cluster_sizes[b];
      detail::bernoulli_scan(static_cast<std::uint64_t>(na) * nb, inter_prob(a, b),
                             rng, [&](std::uint64_t t) {
                               pairs.emplace_back(
                                   static_cast<NodeId>(start[a] + t / nb),
                                   static_cast<NodeId>(start[b] + t % nb));
                             });
    }
  }

  Graph g = detail::build_graph(n, std::move(pairs), detail::default_tokens(n));

  NodeLabels labels;
  labels.label.resize(n);
  labels.class_count = static_cast<std::int32_t>(k);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t v = start[a]; v < start[a + 1]; ++v)
      labels.label[v] = static_cast<std::int32_t>(a);
  return {std::move(g), std::move(labels)};
}

inline Graph generate_erdos_renyi(std::size_t n, double edge_prob, std::uint64_t seed) {
  if (n < 1) throw ConfigError("erdos-renyi: need n >= 1");
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0))
    throw ConfigError("erdos-renyi: edge probability outside [0,1]");
  Rng rng(seed);
  std::vector<std::pair<NodeId, NodeId>> pairs;
  const std::uint64_t m = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  std::size_t row = 0;
  std::uint64_t base = 0;
  detail::bernoulli_scan(m, edge_prob, rng, [&](std::uint64_t t) {
    while (base + (n - 1 - row) <= t) {
      base += n - 1 - row;
      ++row;
    }
    pairs.emplace_back(static_cast<NodeId>(row),
                       static_cast<NodeId>(row + 1 + (t - base)));
  });
  std::vector<std::string> tokens;
  detail::default_tokens_hint(n, &tokens);
  return detail::build_graph(n, std::move(pairs), std::move(tokens));
}

// d_i / 2|E| per node; the limiting node-visit law of the uniform walk.
inline std::vector<double> stationary_distribution(const Graph& g) {
  if (g.edge_count == 0) throw DataError("stationary distribution needs |E| >= 1");
  std::vector<double> pi(g.node_count());
  const double denom = 2.0 * static_cast<double>(g.edge_count);
  for (NodeId v = 0; v < g.node_count(); ++v)
    pi[v] = static_cast<double>(g.degree(v)) / denom;
  return pi;
}

// Label file: "<node-token> <label-int>" per line. Raw label values are
// remapped to dense ids preserving numeric order.
inline NodeLabels load_labels(std::istream& in, const Graph& g) {
  std::unordered_map<std::string, NodeId> ids;
  for (NodeId v = 0; v < g.node_count(); ++v) ids.emplace(g.tokens[v], v);

  std::vector<std::int64_t> raw(g.node_count());
  std::vector<bool> seen(g.node_count(), false);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tok;
    std::int64_t lab;
    if (!(ls >> tok)) continue;
    if (tok[0] == '#') continue;
    if (!(ls >> lab))
      throw DataError("label file line " + std::to_string(line_no) + ": expected <token> <int>");
    auto it = ids.find(tok);
    if (it == ids.end())
      throw DataError("label file line " + std::to_string(line_no) + ": unknown node " + tok);
    if (seen[it->second])
      throw DataError("label file line " + std::to_string(line_no) + ": duplicate label for " + tok);
    seen[it->second] = true;
    raw[it->second] = lab;
  }
  for (NodeId v = 0; v < g.node_count(); ++v)
    if (!seen[v]) throw DataError("label file: node " + g.tokens[v] + " has no label");

  std::vector<std::int64_t> classes(raw);
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  NodeLabels out;
  out.class_count = static_cast<std::int32_t>(classes.size());
  out.label.resize(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v)
    out.label[v] = static_cast<std::int32_t>(
        std::lower_bound(classes.begin(), classes.end(), raw[v]) - classes.begin());
  return out;
}

inline void save_labels(const Graph& g, const NodeLabels& labels, std::ostream& out) {
  for (NodeId v = 0; v < g.node_count(); ++v)
    out << g.tokens[v] << ' ' << labels.label[v] << '\n';
}

}  // namespace tne
