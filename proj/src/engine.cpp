// Copyright 2026 The pulsersim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pulsersim/engine.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstdlib>

namespace psim {

std::uint32_t Engine::acquire_slot() {
  if (!free_slots_.empty()) {
    const std::uint32_t slot = free_slots_.back();
    free_slots_.pop_back();
    return slot;
  }
  slots_.emplace_back();
  return static_cast<std::uint32_t>(slots_.size() - 1);
}

void Engine::release_slot(std::uint32_t slot) {
  Slot& s = slots_[slot];
  s.state = SlotState::kFree;
  ++s.generation;
  free_slots_.push_back(slot);
}

EventHandle Engine::schedule(SimTime fire_time, EventKind kind,
                             std::uint32_t target, std::uint64_t payload) {
  if (fire_time < now_) {
    std::fprintf(stderr,
                 "pulsersim: event scheduled in the past (fire_time=%" PRId64
                 " now=%" PRId64 " kind=%d target=%u)\n",
                 fire_time, now_, static_cast<int>(kind), target);
    std::abort();
  }
  const std::uint32_t slot = acquire_slot();
  Slot& s = slots_[slot];
  s.event = Event{fire_time, next_seq_, kind, target, payload};
  s.state = SlotState::kPending;
  heap_.push(HeapEntry{fire_time, next_seq_, slot});
  ++next_seq_;
  ++scheduled_;
  return EventHandle{slot, s.generation};
}

bool Engine::cancel(EventHandle handle) {
  if (handle.slot >= slots_.size()) return false;
  Slot& s = slots_[handle.slot];
  if (s.generation != handle.generation || s.state != SlotState::kPending) {
    return false;
  }
  // The heap entry stays behind and is discarded when it surfaces.
  s.state = SlotState::kCancelled;
  ++cancelled_;
  return true;
}

std::uint64_t Engine::run_until(SimTime t_end, EventSink& sink) {
  std::uint64_t processed = 0;
  while (!heap_.empty() && heap_.top().time <= t_end) {
    const HeapEntry top = heap_.top();
    heap_.pop();
    Slot& s = slots_[top.slot];
    if (s.state == SlotState::kCancelled) {
      release_slot(top.slot);
      continue;
    }
    const Event ev = s.event;
    release_slot(top.slot);
    now_ = ev.fire_time;
    ++fired_;
    ++processed;
    sink.on_event(ev);
  }
  if (t_end > now_) now_ = t_end;
  return processed;
}

}  // namespace psim
