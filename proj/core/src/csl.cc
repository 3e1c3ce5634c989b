#include "coaodv/csl.h"

#include <algorithm>
#include <numeric>
#include <set>

namespace coaodv {

Csl route_handling_logic(OclLevel ocl, BeliefClass belief) {
  using B = BeliefClass;
  switch (ocl) {
    case OclLevel::High:
      if (belief == B::Patron || belief == B::Casual) return Csl::HighlyRecommended;
      if (belief == B::Vargant) return Csl::NotRecommended;
      return Csl::Recommended;
    case OclLevel::Medium:
      return belief == B::Vargant ? Csl::NotRecommended : Csl::Recommended;
    case OclLevel::Low:
      return (belief == B::Slack || belief == B::Vargant) ? Csl::NotRecommended : Csl::Recommended;
  }
  return Csl::NotRecommended;
}

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw std::invalid_argument("rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const std::int64_t g = std::gcd(n < 0 ? -n : n, d);
  num = g ? n / g : 0;
  den = g ? d / g : 1;
}

std::string to_string(const Rational& r) {
  return r.den == 1 ? std::to_string(r.num) : std::to_string(r.num) + "/" + std::to_string(r.den);
}

Rational routing_factor(Csl source, Csl host) {
  if (source == Csl::NotRecommended) throw IneligibleSource();
  return Rational(std::min(level(source), level(host)), level(source));
}

Rational path_routing_factor(Csl source, std::span<const Csl> hosts) {
  if (source == Csl::NotRecommended) throw IneligibleSource();
  Rational rf(1, 1);
  for (Csl h : hosts) rf = std::min(rf, routing_factor(source, h));
  return rf;
}

std::optional<RouteSelection> select_route(Csl source_csl, std::span<const RouteCandidate> candidates) {
  std::optional<RouteSelection> best_eligible;
  std::optional<RouteSelection> best_fallback;
  const Rational one(1, 1);

  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& c = candidates[i];
    const Rational rf = path_routing_factor(source_csl, c.host_csl);
    auto earlier = [&](const std::optional<RouteSelection>& cur) {
      return candidates[cur->index].arrived_at > c.arrived_at;
    };
    if (rf >= one) {
      if (!best_eligible) {
        best_eligible = RouteSelection{i, rf, false};
        continue;
      }
      const auto& cur = candidates[best_eligible->index];
      if (c.route_record.size() < cur.route_record.size() ||
          (c.route_record.size() == cur.route_record.size() && earlier(best_eligible))) {
        best_eligible = RouteSelection{i, rf, false};
      }
    } else {
      if (!best_fallback || rf > best_fallback->rf_min ||
          (rf == best_fallback->rf_min &&
           (c.route_record.size() < candidates[best_fallback->index].route_record.size() ||
            (c.route_record.size() == candidates[best_fallback->index].route_record.size() &&
             earlier(best_fallback))))) {
        best_fallback = RouteSelection{i, rf, true};
      }
    }
  }
  if (best_eligible) return best_eligible;
  return best_fallback;
}

std::vector<NodeId> RouteEntry::segment() const {
  std::vector<NodeId> seg{uid};
  if (auto n = next_hop()) seg.push_back(*n);
  return seg;
}

std::optional<NodeId> RouteEntry::next_hop() const {
  auto it = std::find(route_record.begin(), route_record.end(), uid);
  if (it == route_record.end() || std::next(it) == route_record.end()) return std::nullopt;
  return *std::next(it);
}

std::optional<NodeId> RouteEntry::previous_hop() const {
  auto it = std::find(route_record.begin(), route_record.end(), uid);
  if (it == route_record.end() || it == route_record.begin()) return std::nullopt;
  return *std::prev(it);
}

bool loop_free(std::span<const NodeId> path) {
  std::set<NodeId> seen;
  for (NodeId n : path) {
    if (!seen.insert(n).second) return false;
  }
  return true;
}

}  // namespace coaodv
