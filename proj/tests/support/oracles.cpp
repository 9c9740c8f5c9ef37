#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <set>

namespace visenrich::testing {

std::string EdgeList::to_taxonomy() const {
  std::string out;
  for (const auto& id : ids) {
    out += id + "\t";
    const auto& ps = parents.at(id);
    for (std::size_t i = 0; i < ps.size(); ++i) out += (i ? "," : "") + ps[i];
    out += "\t\n";
  }
  return out;
}

EdgeList random_dag(std::mt19937_64& rng, std::size_t n) {
  EdgeList g;
  for (std::size_t i = 0; i < n; ++i) {
    char id[24];
    std::snprintf(id, sizeof id, "c%02zu", i);
    g.ids.emplace_back(id);
    std::vector<std::string> ps;
    if (i > 0) {
      const auto k = std::uniform_int_distribution<int>(0, 2)(rng);
      for (int j = 0; j < k; ++j) {
        const auto& p = g.ids[std::uniform_int_distribution<std::size_t>(0, i - 1)(rng)];
        if (std::find(ps.begin(), ps.end(), p) == ps.end()) ps.push_back(p);
      }
    }
    g.parents[g.ids.back()] = ps;
  }
  return g;
}

std::optional<int> up_distance(const EdgeList& g, const std::string& from, const std::string& to) {
  std::map<std::string, int> dist{{from, 0}};
  std::deque<std::string> queue{from};
  while (!queue.empty()) {
    auto cur = queue.front();
    queue.pop_front();
    if (cur == to) return dist[cur];
    for (const auto& p : g.parents.at(cur)) {
      if (!dist.contains(p)) {
        dist[p] = dist[cur] + 1;
        queue.push_back(p);
      }
    }
  }
  return std::nullopt;
}

std::optional<int> undirected_distance(const EdgeList& g, const std::string& a, const std::string& b) {
  std::map<std::string, std::set<std::string>> adj;
  for (const auto& [c, ps] : g.parents) {
    adj[c];
    for (const auto& p : ps) {
      adj[c].insert(p);
      adj[p].insert(c);
    }
  }
  std::map<std::string, int> dist{{a, 0}};
  std::deque<std::string> queue{a};
  while (!queue.empty()) {
    auto cur = queue.front();
    queue.pop_front();
    if (cur == b) return dist[cur];
    for (const auto& n : adj[cur]) {
      if (!dist.contains(n)) {
        dist[n] = dist[cur] + 1;
        queue.push_back(n);
      }
    }
  }
  return std::nullopt;
}

int longest_chain(const EdgeList& g) {
  // ids are listed parents-first, so one pass suffices.
  std::map<std::string, int> depth;
  int best = 0;
  for (const auto& id : g.ids) {
    int d = 0;
    for (const auto& p : g.parents.at(id)) d = std::max(d, depth.at(p) + 1);
    depth[id] = d;
    best = std::max(best, d);
  }
  return best;
}

double oracle_similarity(const EdgeList& g, const std::string& a, const std::string& b) {
  if (a == b) return 1.0;
  auto d = undirected_distance(g, a, b);
  return d ? 1.0 / (1.0 + *d) : 0.0;
}

double oracle_membership(const EdgeList& g, const std::string& c, const std::string& source, double value) {
  if (c == source) return value;
  if (up_distance(g, source, c)) return value;          // c generalizes the source
  if (auto d = up_distance(g, c, source)) {            // c specializes the source
    const double path = static_cast<double>(*d) / static_cast<double>(longest_chain(g));
    return std::min(value + path, 1.0);
  }
  return 0.0;
}

double oracle_tconorm(TConorm kind, double a, double b) {
  switch (kind) {
    case TConorm::Max: return a > b ? a : b;
    case TConorm::ProbabilisticSum: return a + b - a * b;
    case TConorm::BoundedSum: return a + b > 1.0 ? 1.0 : a + b;
  }
  return 0.0;
}

std::map<std::string, OracleRow> oracle_mu_tot(const EdgeList& g, const std::vector<std::string>& universe,
                                               const std::vector<WeightedConcept>& vis,
                                               const std::vector<WeightedConcept>& cx, TConorm kind) {
  std::map<std::string, OracleRow> out;
  for (const auto& c : universe) {
    OracleRow row;
    for (const auto& s : vis) row.vis = oracle_tconorm(kind, row.vis, oracle_membership(g, c, s.id, s.value));
    for (const auto& s : cx) row.cx = oracle_tconorm(kind, row.cx, oracle_membership(g, c, s.id, s.value));
    row.tot = oracle_tconorm(kind, row.vis, row.cx);
    out[c] = row;
  }
  return out;
}

std::vector<CorrespondencePair> oracle_argmax(const SimilarityMatrix& m, const std::vector<double>& imps,
                                              double t_sim) {
  std::vector<CorrespondencePair> out;
  for (std::size_t k = 0; k < m.cols(); ++k) {
    std::vector<std::size_t> band;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      bool below = false;
      for (std::size_t j = 0; j < m.rows(); ++j) below = below || m(j, k) > m(i, k) + kTieTolerance;
      if (!below) band.push_back(i);
    }
    for (auto i : band) {
      bool beaten = false;
      for (auto j : band) beaten = beaten || imps[j] > imps[i] || (imps[j] == imps[i] && j < i);
      if (beaten) continue;
      if (m(i, k) >= t_sim) out.push_back({i, k, m(i, k)});
      break;
    }
  }
  return out;
}

VisRecord random_vis_record(std::mt19937_64& rng, const std::string& vo_id,
                            const std::vector<std::string>& concepts, const std::vector<std::string>& targets) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto value = [&]() {
    const double u = unit(rng);
    if (u < 0.05) return 0.0;
    if (u < 0.10) return 1.0;
    if (u < 0.50) return std::round(unit(rng) * 100.0) / 100.0;
    return unit(rng);
  };
  VisRecord r;
  r.vo_id = vo_id;
  r.vsc = concepts[std::uniform_int_distribution<std::size_t>(0, concepts.size() - 1)(rng)];
  r.r_vsc = value();
  for (std::size_t j = 0; j < kVocabSize; ++j) {
    if (unit(rng) < 0.25) r.colors[static_cast<Color>(j)] = value();
    if (unit(rng) < 0.2) r.textures[static_cast<Texture>(j)] = value();
  }
  double sum = 0.0;
  for (const auto& [_, w] : r.colors) sum += w;
  if (sum > 1.0) {
    for (auto& [_, w] : r.colors) w /= sum + unit(rng);
  }
  for (const auto& t : targets) {
    if (t == vo_id) continue;
    for (std::size_t j = 0; j < kVocabSize; ++j) {
      if (unit(rng) < 0.1) r.spatial.push_back({static_cast<SpatialRelation>(j), t});
    }
  }
  std::sort(r.spatial.begin(), r.spatial.end());
  return r;
}

}  // namespace visenrich::testing
