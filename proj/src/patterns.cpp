#include "fdmac/patterns.hpp"

#include <stdexcept>
#include <string>

namespace fdmac {

namespace {

bool ends_idle(PuEvent event) {
  return event == PuEvent::StaysIdle || event == PuEvent::BecomesIdle;
}

bool starts_idle(PuEvent event) {
  return event == PuEvent::StaysIdle || event == PuEvent::BecomesActive;
}

void check_fragment_count(int fragments) {
  if (fragments < 1 || fragments > kMaxFragments) {
    throw std::invalid_argument(
        "fragment count must lie in [1, " + std::to_string(kMaxFragments) +
        "]; the pattern/outcome space grows as 4^K");
  }
}

}  // namespace

bool PuPattern::consistent() const {
  if (events.empty()) return false;
  if (!starts_idle(events.front())) return false;
  for (std::size_t j = 1; j < events.size(); ++j) {
    if (starts_idle(events[j]) != ends_idle(events[j - 1])) return false;
  }
  std::vector<int> changes;
  for (std::size_t j = 0; j < events.size(); ++j) {
    if (events[j] == PuEvent::BecomesActive ||
        events[j] == PuEvent::BecomesIdle) {
      changes.push_back(static_cast<int>(j) + 1);
    }
  }
  return changes == change_fragments;
}

std::vector<PuPattern> enumerate_patterns(int fragments) {
  check_fragment_count(fragments);
  std::vector<PuPattern> patterns;
  const std::uint32_t count = 1u << fragments;
  patterns.reserve(count);
  // A pattern is a keep/flip choice per fragment starting from idle;
  // fragment 1 is the most significant bit so "keep" sorts before "flip".
  for (std::uint32_t code = 0; code < count; ++code) {
    PuPattern pattern;
    pattern.events.reserve(fragments);
    bool idle = true;
    for (int j = 0; j < fragments; ++j) {
      const bool flip = (code >> (fragments - 1 - j)) & 1u;
      PuEvent event;
      if (idle) {
        event = flip ? PuEvent::BecomesActive : PuEvent::StaysIdle;
      } else {
        event = flip ? PuEvent::BecomesIdle : PuEvent::StaysActive;
      }
      if (flip) {
        pattern.change_fragments.push_back(j + 1);
        idle = !idle;
      }
      pattern.events.push_back(event);
    }
    patterns.push_back(std::move(pattern));
  }
  return patterns;
}

std::vector<int> SensingOutcomeSet::idle_verdict_fragments() const {
  std::vector<int> out;
  for (int j = 1; j <= fragments; ++j) {
    if (verdict_idle(j)) out.push_back(j);
  }
  return out;
}

std::vector<int> SensingOutcomeSet::busy_verdict_fragments() const {
  std::vector<int> out;
  for (int j = 1; j <= fragments; ++j) {
    if (!verdict_idle(j)) out.push_back(j);
  }
  return out;
}

std::vector<int> SensingOutcomeSet::transmit_fragments(
    bool count_first_fragment) const {
  std::vector<int> out;
  for (int j = 1; j <= fragments; ++j) {
    if (transmits(j, count_first_fragment)) out.push_back(j);
  }
  return out;
}

std::vector<SensingOutcomeSet> enumerate_outcomes(int fragments) {
  check_fragment_count(fragments);
  std::vector<SensingOutcomeSet> outcomes;
  const std::uint32_t count = 1u << fragments;
  outcomes.reserve(count);
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    outcomes.push_back(SensingOutcomeSet{mask, fragments});
  }
  return outcomes;
}

}  // namespace fdmac
