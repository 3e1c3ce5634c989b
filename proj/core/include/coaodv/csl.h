#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "coaodv/agent.h"
#include "coaodv/contact.h"

namespace coaodv {

/// Collaboration sensitivity level of a node.
enum class Csl : std::uint8_t { NotRecommended = 0, Recommended = 1, HighlyRecommended = 2 };

inline int level(Csl c) { return static_cast<int>(c); }

/// CSL from the (OCL x belief) product:
///   (H,P) (H,C)                 -> Highly recommended
///   (H,V) (M,V) (L,S) (L,V)     -> Not recommended
///   every other cell            -> Recommended
Csl route_handling_logic(OclLevel ocl, BeliefClass belief);

/// Exact non-negative rational num/den with den > 0, kept in lowest terms.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d);

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend bool operator==(const Rational& a, const Rational& b) { return a.num == b.num && a.den == b.den; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    return a.num * b.den <=> b.num * a.den;
  }
};

std::string to_string(const Rational& r);

/// A Not-recommended node cannot compute a routing factor as a source.
class IneligibleSource : public std::domain_error {
 public:
  IneligibleSource() : std::domain_error("routing factor undefined for a Not-recommended source") {}
};

/// RF = min(source, host) / source. Throws IneligibleSource when source is 0.
Rational routing_factor(Csl source, Csl host);

/// Weakest-link RF over the hosts of a path; an empty host list scores 1.
Rational path_routing_factor(Csl source, std::span<const Csl> hosts);

/// A reply collected by the source during discovery.
struct RouteCandidate {
  std::vector<NodeId> route_record;  // source .. target
  std::vector<Csl> host_csl;         // one per intermediate host, in path order
  TimeMs arrived_at = 0;
};

struct RouteSelection {
  std::size_t index = 0;  // into the candidate list
  Rational rf_min;
  bool degraded = false;
};

/// Eligible candidates have rf_min >= 1. The shortest eligible route wins,
/// ties going to the earliest arrival. Without eligible candidates the
/// maximum-rf_min route is taken and flagged degraded.
std::optional<RouteSelection> select_route(Csl source_csl, std::span<const RouteCandidate> candidates);

/// One row of the COAODV route table.
struct RouteEntry {
  NodeId uid = 0;
  Csl csl = Csl::NotRecommended;
  NodeId source_uid = 0;
  Csl source_csl = Csl::NotRecommended;
  NodeId target_uid = 0;
  std::vector<NodeId> route_record;  // full path source .. target
  Rational rf_s{1, 1};
  bool degraded = false;
  TimeMs installed_at = 0;
  TimeMs last_used = 0;

  /// Hop segment this row is responsible for: {uid, next hop}.
  std::vector<NodeId> segment() const;
  std::optional<NodeId> next_hop() const;
  std::optional<NodeId> previous_hop() const;
};

/// True when `path` has no repeated node.
bool loop_free(std::span<const NodeId> path);

}  // namespace coaodv
