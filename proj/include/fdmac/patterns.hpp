#pragma once

#include <cstdint>
#include <vector>

#include "fdmac/fragment_rate.hpp"

namespace fdmac {

// Maximum packet fragmentation the enumeration engines accept; the joint
// pattern x outcome space grows as 4^K.
inline constexpr int kMaxFragments = 12;

// One realization of the channel's idle/active event sequence across the
// fragments of a packet. The data phase starts on an idle channel, so the
// first event is StaysIdle or BecomesActive.
struct PuPattern {
  std::vector<PuEvent> events;       // one per fragment
  std::vector<int> change_fragments;  // 1-based fragments with a transition

  int num_changes() const { return static_cast<int>(change_fragments.size()); }
  int fragments() const { return static_cast<int>(events.size()); }

  // True when every adjacent pair of events is continuous in the channel
  // state and the sequence starts idle.
  bool consistent() const;
};

// All 2^K patterns (at each fragment the channel either keeps or flips its
// state), in a fixed order: fragment-by-fragment, keep before flip.
std::vector<PuPattern> enumerate_patterns(int fragments);

// One joint assignment of per-fragment sensing verdicts.
struct SensingOutcomeSet {
  std::uint32_t idle_mask = 0;  // bit j-1 set: fragment j's verdict was idle
  int fragments = 0;

  bool verdict_idle(int fragment) const {  // 1-based
    return (idle_mask >> (fragment - 1)) & 1u;
  }

  std::vector<int> idle_verdict_fragments() const;
  std::vector<int> busy_verdict_fragments() const;

  // Fragments that carry data: every successor of an idle-verdict fragment
  // (successors past the packet end are clipped), plus fragment 1 when
  // count_first_fragment is set.
  std::vector<int> transmit_fragments(bool count_first_fragment) const;

  bool transmits(int fragment, bool count_first_fragment) const {
    if (fragment == 1) return count_first_fragment;
    return verdict_idle(fragment - 1);
  }
};

// All 2^K verdict assignments, ordered by idle_mask.
std::vector<SensingOutcomeSet> enumerate_outcomes(int fragments);

}  // namespace fdmac
