#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "coaodv/node.h"

namespace coaodv {

// ---------------------------------------------------------------------------
// Contact logs and location traces
// ---------------------------------------------------------------------------

using CellId = std::uint32_t;

/// Grid cell containing `p` on a square grid of side `cell_m` over `area`.
CellId grid_cell(Vec2 p, double cell_m, const Area& area);

/// Sorted, duplicate-free set of visited grid cells.
class TraceSet {
 public:
  TraceSet() = default;
  TraceSet(std::initializer_list<CellId> cells);

  void insert(CellId cell);
  bool contains(CellId cell) const;
  std::size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }
  std::span<const CellId> cells() const { return cells_; }

  friend bool operator==(const TraceSet&, const TraceSet&) = default;

 private:
  std::vector<CellId> cells_;
};

/// Contact history of an unordered node pair; `i < j` always.
struct ContactLog {
  NodeId i = 0;
  NodeId j = 0;
  std::uint32_t f = 0;  // distinct contact episodes
  TimeMs t = 0;         // cumulative contact duration
  TimeMs last_contact_end = 0;
  bool in_contact = false;
};

// ---------------------------------------------------------------------------
// Pair weights and the opportunistic subgraph
// ---------------------------------------------------------------------------

struct ContactGraphStats {
  double sigma_f = 0.0;
  double sigma_t = 0.0;
  /// Leading eigenvector of the covariance of standardized (f, t); unit norm,
  /// first component >= 0.
  std::array<double, 2> principal_axis{1.0, 0.0};
};

/// Population statistics over every logged pair. Throws std::invalid_argument
/// when `logs` is empty.
ContactGraphStats contact_graph_stats(std::span<const ContactLog> logs);

/// Scalar weight W_ij: the standardized (f, t) sample projected on the
/// principal axis. Zero-variance coordinates are dropped; if both vanish,
/// every pair weighs 1.
double pair_weight(const ContactLog& log, const ContactGraphStats& stats);

/// Mean pair weight over a node's connected neighbors (0 when isolated).
double avg_contact_degree(std::span<const double> neighbor_weights);
double avg_contact_degree(NodeId node, std::span<const ContactLog> logs, const ContactGraphStats& stats);

struct WeightedPair {
  NodeId a = 0;
  NodeId b = 0;
  double w = 0.0;
};

/// Pairs whose weight reaches the mean degree of both endpoints. The input
/// pairs are the connected neighbor pairs; the mean degree of a node is taken
/// over the pairs touching it. Output pairs are (min, max) and sorted.
std::vector<std::pair<NodeId, NodeId>> opportunistic_subgraph(std::span<const WeightedPair> pairs);

// ---------------------------------------------------------------------------
// Context similarity
// ---------------------------------------------------------------------------

/// Jaccard index of two trace sets; two empty sets score 0.
double location_similarity(const TraceSet& a, const TraceSet& b);

enum class SimilarityClass : std::uint8_t { Vagrant, Maximum };

struct ContextParams {
  double weight_age = 1.0 / 3.0;
  double weight_count = 1.0 / 3.0;
  double weight_location = 1.0 / 3.0;
  double tau_ms = 60000.0;
  double count_cap = 10.0;

  /// Throws ConfigError unless the weights sum to 1 within 1e-9.
  void validate() const;
};

struct ContextSimilarity {
  double x = 0.0;
  TimeMs a_m = 0;
  std::uint32_t n_m = 0;
  double l_m = 0.0;
  SimilarityClass cls = SimilarityClass::Vagrant;
};

/// x = w_A exp(-a_m / tau) + w_N min(n_m / cap, 1) + w_L l_m; the 0.5
/// boundary belongs to the maximum-similarity class.
ContextSimilarity context_similarity(TimeMs a_m, std::uint32_t n_m, double l_m, const ContextParams& params);

// ---------------------------------------------------------------------------
// Contact analyzer
// ---------------------------------------------------------------------------

using Tag = std::uint32_t;
using Multiset = std::map<Tag, std::uint32_t>;  // tag -> multiplicity (>= 1)

struct AffinityProfile {
  Multiset contexts;
  Multiset resources;
  Multiset destinations;
};

/// Opportunistic contact level; High (0) is the strongest affinity.
enum class OclLevel : std::uint8_t { High = 0, Medium = 1, Low = 2 };

char ocl_label(OclLevel level);

bool shares_tag(const Multiset& a, const Multiset& b);

/// Grades a peer by how many of the context / resource / destination
/// categories match. The context category only counts under maximum context
/// similarity. 3 matches -> High, 1-2 -> Medium, none -> Low.
OclLevel contact_analyzer(const AffinityProfile& self, const AffinityProfile& peer, const ContextSimilarity& similarity);

/// Fraction of in-range peers graded High or Medium; 0 with no peers.
double affinity_ratio(std::span<const OclLevel> peers);

// ---------------------------------------------------------------------------
// Run-time tracking
// ---------------------------------------------------------------------------

/// Owns every pair log and per-node trace set for one run.
class ContactTracker {
 public:
  ContactTracker(std::size_t node_count, double cell_m, Area area);

  /// Account one mobility interval [now, now + dt) for the given positions.
  void observe(TimeMs now, TimeMs dt, std::span<const NodeState> nodes);

  const ContactLog& log(NodeId a, NodeId b) const;
  /// Logs of every pair that has ever been in contact.
  std::vector<ContactLog> logged_pairs() const;
  const TraceSet& traces(NodeId node) const { return traces_.at(node); }

  /// Age of last contact (0 while in contact), episode count and trace
  /// overlap for the pair, fed through `context_similarity`.
  ContextSimilarity similarity(NodeId a, NodeId b, TimeMs now, const ContextParams& params) const;

  std::size_t node_count() const { return node_count_; }

 private:
  std::size_t index(NodeId a, NodeId b) const;

  std::size_t node_count_;
  double cell_m_;
  Area area_;
  std::vector<ContactLog> logs_;
  std::vector<TraceSet> traces_;
};

}  // namespace coaodv
