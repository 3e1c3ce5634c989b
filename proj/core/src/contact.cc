#include "coaodv/contact.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace coaodv {

CellId grid_cell(Vec2 p, double cell_m, const Area& area) {
  const auto cols = static_cast<CellId>(std::max(1.0, std::ceil(area.width / cell_m)));
  const auto rows = static_cast<CellId>(std::max(1.0, std::ceil(area.height / cell_m)));
  const auto cx = std::min<CellId>(cols - 1, static_cast<CellId>(std::max(0.0, p.x) / cell_m));
  const auto cy = std::min<CellId>(rows - 1, static_cast<CellId>(std::max(0.0, p.y) / cell_m));
  return cy * cols + cx;
}

TraceSet::TraceSet(std::initializer_list<CellId> cells) {
  for (CellId c : cells) insert(c);
}

void TraceSet::insert(CellId cell) {
  auto it = std::lower_bound(cells_.begin(), cells_.end(), cell);
  if (it == cells_.end() || *it != cell) cells_.insert(it, cell);
}

bool TraceSet::contains(CellId cell) const { return std::binary_search(cells_.begin(), cells_.end(), cell); }

// ---------------------------------------------------------------------------

namespace {

bool negligible(double sigma, double mean) { return sigma <= 1e-12 * std::max(1.0, std::abs(mean)); }

}  // namespace

ContactGraphStats contact_graph_stats(std::span<const ContactLog> logs) {
  if (logs.empty()) throw std::invalid_argument("contact statistics need at least one logged pair");
  const double n = static_cast<double>(logs.size());

  double mean_f = 0.0, mean_t = 0.0;
  for (const auto& log : logs) {
    mean_f += log.f;
    mean_t += static_cast<double>(log.t);
  }
  mean_f /= n;
  mean_t /= n;

  double var_f = 0.0, var_t = 0.0, cov = 0.0;
  for (const auto& log : logs) {
    const double df = log.f - mean_f;
    const double dt = static_cast<double>(log.t) - mean_t;
    var_f += df * df;
    var_t += dt * dt;
    cov += df * dt;
  }
  var_f /= n;
  var_t /= n;
  cov /= n;

  ContactGraphStats stats;
  stats.sigma_f = std::sqrt(var_f);
  stats.sigma_t = std::sqrt(var_t);

  const bool flat_f = negligible(stats.sigma_f, mean_f);
  const bool flat_t = negligible(stats.sigma_t, mean_t);
  if (flat_f) stats.sigma_f = 0.0;
  if (flat_t) stats.sigma_t = 0.0;
  if (flat_f || flat_t) {
    stats.principal_axis = flat_f && !flat_t ? std::array{0.0, 1.0} : std::array{1.0, 0.0};
    return stats;
  }

  // Covariance of the standardized samples, then its leading eigenvector.
  const double a = var_f / (stats.sigma_f * stats.sigma_f);
  const double c = var_t / (stats.sigma_t * stats.sigma_t);
  const double b = cov / (stats.sigma_f * stats.sigma_t);
  const double half = 0.5 * (a - c);
  const double lambda = 0.5 * (a + c) + std::sqrt(half * half + b * b);

  std::array<double, 2> v = a >= c ? std::array{lambda - c, b} : std::array{b, lambda - a};
  double norm = std::hypot(v[0], v[1]);
  if (norm < 1e-12) {
    // Isotropic covariance: every direction is principal; weigh both equally.
    v = {1.0, 1.0};
    norm = std::sqrt(2.0);
  }
  v[0] /= norm;
  v[1] /= norm;
  if (v[0] < 0.0 || (v[0] == 0.0 && v[1] < 0.0)) {
    v[0] = -v[0];
    v[1] = -v[1];
  }
  stats.principal_axis = v;
  return stats;
}

double pair_weight(const ContactLog& log, const ContactGraphStats& stats) {
  const bool has_f = stats.sigma_f > 0.0;
  const bool has_t = stats.sigma_t > 0.0;
  if (!has_f && !has_t) return 1.0;
  if (!has_f) return static_cast<double>(log.t) / stats.sigma_t;
  if (!has_t) return log.f / stats.sigma_f;
  return log.f / stats.sigma_f * stats.principal_axis[0] +
         static_cast<double>(log.t) / stats.sigma_t * stats.principal_axis[1];
}

double avg_contact_degree(std::span<const double> neighbor_weights) {
  if (neighbor_weights.empty()) return 0.0;
  double sum = 0.0;
  for (double w : neighbor_weights) sum += w;
  return sum / static_cast<double>(neighbor_weights.size());
}

double avg_contact_degree(NodeId node, std::span<const ContactLog> logs, const ContactGraphStats& stats) {
  std::vector<double> weights;
  for (const auto& log : logs) {
    if (log.i == node || log.j == node) weights.push_back(pair_weight(log, stats));
  }
  return avg_contact_degree(weights);
}

std::vector<std::pair<NodeId, NodeId>> opportunistic_subgraph(std::span<const WeightedPair> pairs) {
  std::map<NodeId, std::pair<double, std::size_t>> degree;  // sum, count
  for (const auto& p : pairs) {
    for (NodeId n : {p.a, p.b}) {
      auto& d = degree[n];
      d.first += p.w;
      ++d.second;
    }
  }
  auto mean = [&](NodeId n) {
    const auto& d = degree.at(n);
    return d.first / static_cast<double>(d.second);
  };

  std::vector<std::pair<NodeId, NodeId>> out;
  for (const auto& p : pairs) {
    const double threshold = std::max(mean(p.a), mean(p.b));
    if (p.w >= threshold - 1e-12 * std::max(1.0, std::abs(threshold))) {
      out.emplace_back(std::min(p.a, p.b), std::max(p.a, p.b));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------

double location_similarity(const TraceSet& a, const TraceSet& b) {
  if (a.empty() && b.empty()) return 0.0;
  const auto ca = a.cells();
  const auto cb = b.cells();
  std::size_t inter = 0;
  auto ia = ca.begin();
  auto ib = cb.begin();
  while (ia != ca.end() && ib != cb.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++inter;
      ++ia;
      ++ib;
    }
  }
  const std::size_t uni = ca.size() + cb.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

void ContextParams::validate() const {
  const double sum = weight_age + weight_count + weight_location;
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ConfigError("context similarity weights must sum to 1 (got " + std::to_string(sum) + ")");
  }
  if (weight_age < 0.0 || weight_count < 0.0 || weight_location < 0.0) {
    throw ConfigError("context similarity weights must be non-negative");
  }
  if (!(tau_ms > 0.0)) throw ConfigError("context_tau_ms must be positive");
  if (!(count_cap > 0.0)) throw ConfigError("context_count_cap must be positive");
}

ContextSimilarity context_similarity(TimeMs a_m, std::uint32_t n_m, double l_m, const ContextParams& params) {
  params.validate();
  ContextSimilarity s;
  s.a_m = a_m;
  s.n_m = n_m;
  s.l_m = l_m;
  const double age = std::exp(-static_cast<double>(std::max<TimeMs>(a_m, 0)) / params.tau_ms);
  const double count = std::min(static_cast<double>(n_m) / params.count_cap, 1.0);
  s.x = std::clamp(params.weight_age * age + params.weight_count * count + params.weight_location * l_m, 0.0, 1.0);
  s.cls = s.x >= 0.5 ? SimilarityClass::Maximum : SimilarityClass::Vagrant;
  return s;
}

char ocl_label(OclLevel level) {
  switch (level) {
    case OclLevel::High: return 'H';
    case OclLevel::Medium: return 'M';
    case OclLevel::Low: return 'L';
  }
  return '?';
}

bool shares_tag(const Multiset& a, const Multiset& b) {
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      return true;
    }
  }
  return false;
}

OclLevel contact_analyzer(const AffinityProfile& self, const AffinityProfile& peer, const ContextSimilarity& similarity) {
  int matches = 0;
  if (similarity.cls == SimilarityClass::Maximum && shares_tag(self.contexts, peer.contexts)) ++matches;
  if (shares_tag(self.resources, peer.resources)) ++matches;
  if (shares_tag(self.destinations, peer.destinations)) ++matches;
  if (matches == 3) return OclLevel::High;
  if (matches == 0) return OclLevel::Low;
  return OclLevel::Medium;
}

double affinity_ratio(std::span<const OclLevel> peers) {
  if (peers.empty()) return 0.0;
  const auto affine = std::count_if(peers.begin(), peers.end(), [](OclLevel l) { return l != OclLevel::Low; });
  return static_cast<double>(affine) / static_cast<double>(peers.size());
}

// ---------------------------------------------------------------------------

ContactTracker::ContactTracker(std::size_t node_count, double cell_m, Area area)
    : node_count_(node_count), cell_m_(cell_m), area_(area), logs_(node_count * (node_count > 0 ? node_count - 1 : 0) / 2),
      traces_(node_count) {
  for (NodeId i = 0; i < node_count; ++i) {
    for (NodeId j = i + 1; j < node_count; ++j) {
      auto& log = logs_[index(i, j)];
      log.i = i;
      log.j = j;
    }
  }
}

std::size_t ContactTracker::index(NodeId a, NodeId b) const {
  if (a == b || a >= node_count_ || b >= node_count_) throw std::out_of_range("invalid contact pair");
  const std::size_t i = std::min(a, b);
  const std::size_t j = std::max(a, b);
  // Row-major upper triangle without the diagonal.
  return i * (2 * node_count_ - i - 1) / 2 + (j - i - 1);
}

void ContactTracker::observe(TimeMs now, TimeMs dt, std::span<const NodeState> nodes) {
  for (const auto& n : nodes) traces_[n.uid].insert(grid_cell(n.position, cell_m_, area_));
  for (NodeId i = 0; i < node_count_; ++i) {
    for (NodeId j = i + 1; j < node_count_; ++j) {
      auto& log = logs_[index(i, j)];
      if (linked(nodes[i], nodes[j])) {
        if (!log.in_contact) {
          ++log.f;
          log.in_contact = true;
        }
        log.t += dt;
        log.last_contact_end = now + dt;
      } else {
        log.in_contact = false;
      }
    }
  }
}

const ContactLog& ContactTracker::log(NodeId a, NodeId b) const { return logs_[index(a, b)]; }

std::vector<ContactLog> ContactTracker::logged_pairs() const {
  std::vector<ContactLog> out;
  for (const auto& log : logs_) {
    if (log.f > 0) out.push_back(log);
  }
  return out;
}

ContextSimilarity ContactTracker::similarity(NodeId a, NodeId b, TimeMs now, const ContextParams& params) const {
  const auto& l = log(a, b);
  TimeMs age;
  if (l.f == 0) {
    age = std::numeric_limits<TimeMs>::max() / 4;
  } else if (l.in_contact) {
    age = 0;
  } else {
    age = std::max<TimeMs>(0, now - l.last_contact_end);
  }
  return context_similarity(age, l.f, location_similarity(traces_[a], traces_[b]), params);
}

}  // namespace coaodv
