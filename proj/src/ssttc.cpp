#include "ttm/ssttc.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ttm {

namespace {

bool satisfies(double mean, PointRelation required, double epsilon) {
  switch (required) {
    case PointRelation::Before: return mean < -epsilon;
    case PointRelation::After: return mean > epsilon;
    case PointRelation::Equals: return std::abs(mean) <= epsilon;
  }
  return false;
}

bool matches(const RelationSignature& sig, const std::vector<ChannelCondition>& conds) {
  return std::all_of(conds.begin(), conds.end(),
                     [&](const ChannelCondition& c) { return at(sig, c.channel) == c.required; });
}

std::vector<ChannelCondition> compute_necessary(AllenRelation r) {
  const auto sig = signature_of(r);
  for (int size = 1; size <= 4; ++size) {
    // Combinations of `size` channels in lexicographic order.
    std::vector<int> idx(static_cast<std::size_t>(size));
    for (int i = 0; i < size; ++i) idx[static_cast<std::size_t>(i)] = i;
    while (true) {
      std::vector<ChannelCondition> conds;
      for (int i : idx) {
        const auto c = kAllChannels[static_cast<std::size_t>(i)];
        conds.push_back({c, at(sig, c)});
      }
      int hits = 0;
      for (AllenRelation other : kAllAllenRelations) hits += matches(signature_of(other), conds) ? 1 : 0;
      if (hits == 1) return conds;

      int pos = size - 1;
      while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == 4 - size + pos) --pos;
      if (pos < 0) break;
      ++idx[static_cast<std::size_t>(pos)];
      for (int i = pos + 1; i < size; ++i) {
        idx[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i - 1)] + 1;
      }
    }
  }
  return {};  // unreachable: the full signature is unique
}

// Relation of the contained interval with respect to the containing one.
struct Containment {
  bool first_contains = false;
  AllenRelation inner = AllenRelation::During;
};

Containment containment_of(AllenRelation r) {
  switch (r) {
    case AllenRelation::During:
    case AllenRelation::Starts:
    case AllenRelation::Finishes: return {false, r};
    case AllenRelation::Contains:
    case AllenRelation::StartedBy:
    case AllenRelation::FinishedBy:
    case AllenRelation::Equals: return {true, invert(r)};
    default: break;
  }
  throw make_error("UnsupportedRelation",
                   "synchronization needs a containment relation, got " + std::string(to_string(r)));
}

const Ssttc& find_channel(const std::vector<Ssttc>& ssttcs, Channel c) {
  for (const auto& s : ssttcs) {
    if (s.channel == c) return s;
  }
  throw make_error("MissingChannel", "no " + std::string(to_string(c)) + " constraint for the pair");
}

struct Vertex {
  double u, v, objective, offset_term, distance;
};

}  // namespace

std::vector<ChannelCondition> necessary_channels(AllenRelation r) {
  static const auto table = [] {
    std::array<std::vector<ChannelCondition>, kAllenCount> t;
    for (AllenRelation rel : kAllAllenRelations) t[index_of(rel)] = compute_necessary(rel);
    return t;
  }();
  return table[index_of(r)];
}

std::vector<Ssttc> extract_ssttcs(const ActionPairKeypointModel& apkm, AllenRelation r, double epsilon,
                                  const SsttcOptions& options) {
  std::vector<ChannelCondition> conds;
  const auto necessary = necessary_channels(r);
  if (options.all_channels) {
    const auto sig = signature_of(r);
    for (Channel c : kAllChannels) conds.push_back({c, at(sig, c)});
  } else {
    conds = necessary;
  }

  std::vector<Ssttc> out;
  for (const auto& cond : conds) {
    const auto& mixture = apkm.mixture(cond.channel);
    const GaussianComponent* best = nullptr;
    for (const auto& comp : mixture.components) {
      if (!satisfies(comp.mean, cond.required, epsilon)) continue;
      if (!best || comp.weight > best->weight) best = &comp;
    }
    if (!best) {
      const bool needed = std::find(necessary.begin(), necessary.end(), cond) != necessary.end();
      if (!needed) continue;
      throw make_error("NoSuitableComponent",
                       "channel " + std::string(to_string(cond.channel)) + " of " + apkm.pair.key() +
                           " has no component that is " + std::string(to_string(cond.required)) +
                           " zero");
    }
    out.push_back({apkm.pair, cond.channel, best->mean, best->variance, best->weight});
  }
  return out;
}

bool is_containment_relation(AllenRelation r) {
  switch (r) {
    case AllenRelation::During:
    case AllenRelation::Starts:
    case AllenRelation::Finishes:
    case AllenRelation::Contains:
    case AllenRelation::StartedBy:
    case AllenRelation::FinishedBy:
    case AllenRelation::Equals: return true;
    default: return false;
  }
}

double synchronization_objective(double t_m, double t_c, double offset_sum, double mean_m, double mean_c) {
  return std::abs(std::abs(t_m - t_c) - offset_sum) + std::abs(t_m - mean_m) + std::abs(t_c - mean_c);
}

TimelinePlan plan_bimanual(const BimanualProblem& p) {
  const auto shape = containment_of(p.relation);
  const double eps = p.epsilon;
  const double lead = std::abs(find_channel(p.ssttcs, Channel::SS).mean);
  const double lag = std::abs(find_channel(p.ssttcs, Channel::EE).mean);
  const double offsets = lead + lag;
  const double mean_m = shape.first_contains ? p.mean_duration_first : p.mean_duration_second;
  const double mean_c = shape.first_contains ? p.mean_duration_second : p.mean_duration_first;
  if (!(mean_m > 0.0) || !(mean_c > 0.0)) {
    throw make_error("InfeasibleDurations", "mean durations must be positive");
  }

  // Strict margin conditions are met with this much room to spare.
  constexpr double kStrict = 1e-9;
  const auto inner_sig = signature_of(shape.inner);

  if (!satisfies(lead, inner_sig.ss, eps) ||
      (inner_sig.ss == PointRelation::After && !(lead > eps + kStrict))) {
    std::ostringstream os;
    os << "start offset " << lead << " cannot realize " << to_string(p.relation) << " with margin " << eps;
    throw make_error("InfeasibleDurations", os.str());
  }

  // Feasible set: u, v >= min_duration and gap_lo <= u - v <= gap_hi, with
  // u the containing and v the contained duration.
  const double min_duration = 2.0 * eps + kStrict;
  // Closed bounds are pulled in as well so rounding of the planned end
  // points cannot leave the margin.
  double gap_lo = lead - eps + kStrict;
  double gap_hi = lead + eps - kStrict;
  if (inner_sig.ee == PointRelation::Before) {
    gap_lo = lead + eps + kStrict;
    gap_hi = kInf;
  }

  const std::vector<double> verticals = {mean_m, min_duration};
  const std::vector<double> horizontals = {mean_c, min_duration};
  std::vector<double> diagonals = {offsets, -offsets, 0.0, gap_lo};
  if (std::isfinite(gap_hi)) diagonals.push_back(gap_hi);

  std::vector<std::pair<double, double>> points;
  for (double u : verticals) {
    for (double v : horizontals) points.emplace_back(u, v);
    for (double g : diagonals) points.emplace_back(u, u - g);
  }
  for (double v : horizontals) {
    for (double g : diagonals) points.emplace_back(v + g, v);
  }

  constexpr double kTol = 1e-12;
  std::vector<Vertex> feasible;
  for (const auto& [u, v] : points) {
    const double g = u - v;
    if (u < min_duration - kTol || v < min_duration - kTol) continue;
    if (g < gap_lo - kTol || g > gap_hi + kTol) continue;
    feasible.push_back({u, v, synchronization_objective(u, v, offsets, mean_m, mean_c),
                        std::abs(std::abs(g) - offsets), std::abs(u - mean_m) + std::abs(v - mean_c)});
  }
  if (feasible.empty()) {
    throw make_error("InfeasibleDurations", "no positive durations realize " + std::string(to_string(p.relation)));
  }
  const auto best = *std::min_element(feasible.begin(), feasible.end(), [](const Vertex& a, const Vertex& b) {
    if (std::abs(a.objective - b.objective) > kTol) return a.objective < b.objective;
    if (std::abs(a.distance - b.distance) > kTol) return a.distance < b.distance;
    if (std::abs(a.offset_term - b.offset_term) > kTol) return a.offset_term < b.offset_term;
    if (a.u != b.u) return a.u < b.u;
    return a.v < b.v;
  });

  PlanEntry container{shape.first_contains ? p.pair.first : p.pair.second,
                      shape.first_contains ? p.hand_first : p.hand_second, 0.0, best.u};
  PlanEntry contained{shape.first_contains ? p.pair.second : p.pair.first,
                      shape.first_contains ? p.hand_second : p.hand_first, lead, best.v};
  if (contained.hand == container.hand) contained.hand = container.hand == Hand::Left ? Hand::Right : Hand::Left;

  TimelinePlan plan;
  plan.objective_value = best.objective;
  if (shape.first_contains) {
    plan.entries = {container, contained};
  } else {
    plan.entries = {contained, container};
  }

  const auto planned = classify_interval(plan.entries[0].interval(), plan.entries[1].interval(), eps);
  if (planned != p.relation) {
    throw make_error("InfeasibleDurations", "planned intervals classify as " + std::string(to_string(planned)));
  }
  return plan;
}

}  // namespace ttm
