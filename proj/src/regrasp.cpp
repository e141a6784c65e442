#include "screwgrasp/regrasp.hpp"

#include <algorithm>

#include "screwgrasp/errors.hpp"

namespace screwgrasp {

namespace {

std::vector<int> intersect_sorted(const std::vector<int>& a,
                                  const std::vector<int>& b) {
  std::vector<int> out;
  out.reserve(std::min(a.size(), b.size()));
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

GroupScore score_range(const std::vector<GraspRegion>& regions, int first,
                       int last) {
  std::vector<const std::vector<int>*> sets;
  sets.reserve(last - first + 1);
  for (int i = first; i <= last; ++i) sets.push_back(&regions[i].member_indices);
  return compute_score(sets);
}

// Group feasibility for the partition search: singletons always stand alone;
// larger groups need every member nonempty and gamma at or above threshold.
bool group_feasible(const std::vector<GraspRegion>& regions, int first, int last,
                    double gamma_th) {
  if (first == last) return true;
  for (int i = first; i <= last; ++i)
    if (regions[i].member_indices.empty()) return false;
  return score_range(regions, first, last).gamma >= gamma_th;
}

GroupScore final_group_score(const std::vector<GraspRegion>& regions, int first,
                             int last) {
  for (int i = first; i <= last; ++i)
    if (regions[i].member_indices.empty()) {
      GroupScore s;
      s.per_region.assign(last - first + 1, 0.0);
      return s;
    }
  return score_range(regions, first, last);
}

}  // namespace

GroupScore compute_score(const std::vector<const std::vector<int>*>& regions) {
  if (regions.empty()) raise(Errc::empty_input, "no regions to score");
  for (const auto* r : regions)
    if (r->empty())
      raise(Errc::invalid_argument, "compute_score requires nonempty regions");

  GroupScore score;
  score.intersection = *regions[0];
  for (size_t i = 1; i < regions.size(); ++i)
    score.intersection = intersect_sorted(score.intersection, *regions[i]);

  score.gamma = 1.0;
  for (const auto* r : regions) {
    double g = static_cast<double>(score.intersection.size()) / r->size();
    score.per_region.push_back(g);
    score.gamma = std::min(score.gamma, g);
  }
  return score;
}

GroupScore compute_score(const std::vector<GraspRegion>& regions, int first,
                         int last) {
  if (first < 0 || last >= static_cast<int>(regions.size()) || first > last)
    raise(Errc::invalid_argument, "score range outside the region list");
  return score_range(regions, first, last);
}

RegraspPlan greedy_partition(const std::vector<GraspRegion>& regions,
                             double gamma_th) {
  if (regions.empty()) raise(Errc::empty_input, "no regions to partition");
  if (!(gamma_th > 0.0 && gamma_th <= 1.0))
    raise(Errc::invalid_argument, "gamma threshold must lie in (0, 1]");

  RegraspPlan plan;
  const int n = static_cast<int>(regions.size());
  int i = 0;
  while (i < n) {
    if (regions[i].member_indices.empty()) {
      // Unexecutable segment: forced one-segment group, zero score.
      plan.groups.push_back({i, i});
      GroupScore s;
      s.per_region.assign(1, 0.0);
      plan.scores.push_back(std::move(s));
      ++i;
      continue;
    }
    int j = i;
    GroupScore current = score_range(regions, i, j);
    while (j + 1 < n && !regions[j + 1].member_indices.empty()) {
      GroupScore extended = score_range(regions, i, j + 1);
      if (extended.gamma < gamma_th) break;
      current = std::move(extended);
      ++j;
    }
    plan.groups.push_back({i, j});
    plan.scores.push_back(std::move(current));
    i = j + 1;
  }
  return plan;
}

RegraspPlan optimal_partition_bruteforce(const std::vector<GraspRegion>& regions,
                                         double gamma_th) {
  if (regions.empty()) raise(Errc::empty_input, "no regions to partition");
  const int n = static_cast<int>(regions.size());
  if (n > 16) raise(Errc::too_many_segments, "partition enumeration limited to 16 segments");

  // Bit b of a mask breaks between segments b and b+1.
  auto decode = [n](unsigned mask) {
    std::vector<SegmentRange> groups;
    int start = 0;
    for (int b = 0; b < n - 1; ++b)
      if (mask & (1u << b)) {
        groups.push_back({start, b});
        start = b + 1;
      }
    groups.push_back({start, n - 1});
    return groups;
  };

  // Prefer fewer groups, then lexicographically longer prefixes (longest
  // first group, then second, ...).
  auto better = [](const std::vector<SegmentRange>& a,
                   const std::vector<SegmentRange>& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    for (size_t i = 0; i < a.size(); ++i)
      if (a[i].length() != b[i].length()) return a[i].length() > b[i].length();
    return false;
  };

  std::vector<SegmentRange> best;
  for (unsigned mask = 0; mask < (1u << (n - 1)); ++mask) {
    std::vector<SegmentRange> groups = decode(mask);
    bool ok = true;
    for (const SegmentRange& g : groups)
      if (!group_feasible(regions, g.first, g.last, gamma_th)) {
        ok = false;
        break;
      }
    if (!ok) continue;
    if (best.empty() || better(groups, best)) best = std::move(groups);
  }

  RegraspPlan plan;
  plan.groups = std::move(best);
  for (const SegmentRange& g : plan.groups)
    plan.scores.push_back(final_group_score(regions, g.first, g.last));
  return plan;
}

ContactPair grasp_contact_selection(const std::vector<int>& intersection,
                                    const std::vector<ContactPair>& pairs,
                                    const std::vector<GraspRegion>& group_regions) {
  if (group_regions.empty()) raise(Errc::empty_input, "group has no regions");
  auto inside = [&intersection](int idx) {
    return std::binary_search(intersection.begin(), intersection.end(), idx);
  };

  const ContactPair* best = nullptr;
  double best_eta = -1.0;
  for (const ContactPair& pair : pairs) {
    if (!inside(pair.index_a) || !inside(pair.index_b)) continue;
    double eta = 1.0;
    for (const GraspRegion& region : group_regions) {
      eta = std::min(eta, region.eta[pair.index_a]);
      eta = std::min(eta, region.eta[pair.index_b]);
    }
    if (best == nullptr || eta > best_eta ||
        (eta == best_eta && (pair.index_a < best->index_a ||
                             (pair.index_a == best->index_a &&
                              pair.index_b < best->index_b)))) {
      best = &pair;
      best_eta = eta;
    }
  }
  if (best == nullptr)
    raise(Errc::no_feasible_pair, "no antipodal pair lies inside the group intersection");
  return *best;
}

}  // namespace screwgrasp
