#pragma once

// Reference computations written straight from the definitions, kept apart
// from the library code they check.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "visenrich/context.hpp"
#include "visenrich/fusion.hpp"
#include "visenrich/fuzzy.hpp"
#include "visenrich/vis.hpp"

namespace visenrich::testing {

// Plain is_a graph: concept -> parents.
struct EdgeList {
  std::vector<std::string> ids;
  std::map<std::string, std::vector<std::string>> parents;

  std::string to_taxonomy() const;
};

// Random DAG of `n` concepts; every concept after the first picks 0-2
// parents among the earlier ones (the first is always a root).
EdgeList random_dag(std::mt19937_64& rng, std::size_t n);

// Shortest directed chain from `from` up to `to` (ancestor), by BFS.
std::optional<int> up_distance(const EdgeList& g, const std::string& from, const std::string& to);
// Shortest path ignoring edge direction.
std::optional<int> undirected_distance(const EdgeList& g, const std::string& a, const std::string& b);
// Longest chain of edges from any root to any concept.
int longest_chain(const EdgeList& g);

double oracle_similarity(const EdgeList& g, const std::string& a, const std::string& b);

// Membership of c given a source concept with weight `value`.
double oracle_membership(const EdgeList& g, const std::string& c, const std::string& source, double value);

double oracle_tconorm(TConorm kind, double a, double b);

struct OracleRow {
  double vis = 0.0;
  double cx = 0.0;
  double tot = 0.0;
};

std::map<std::string, OracleRow> oracle_mu_tot(const EdgeList& g, const std::vector<std::string>& universe,
                                               const std::vector<WeightedConcept>& vis,
                                               const std::vector<WeightedConcept>& cx, TConorm kind);

// Per column: the term i that no other term j beats, where j beats i when
// m(j,k) > m(i,k) + tol, or when the two are within tol and j has a larger
// head impact, or equal impact and a smaller index.
std::vector<CorrespondencePair> oracle_argmax(const SimilarityMatrix& m, const std::vector<double>& imps,
                                              double t_sim);

VisRecord random_vis_record(std::mt19937_64& rng, const std::string& vo_id,
                            const std::vector<std::string>& concepts, const std::vector<std::string>& targets);

}  // namespace visenrich::testing
